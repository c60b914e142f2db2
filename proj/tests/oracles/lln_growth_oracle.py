# Least m >= 1 with 2 e^{-cm} / (1 - e^{-c}) < 2^-n, evaluated at 60 digits.
import mpmath as mp
mp.mp.dps = 60

def growth(c, n):
    c = mp.mpf(c)
    m = 1
    while not (2 * mp.e ** (-c * m) / (1 - mp.e ** (-c)) < mp.mpf(2) ** (-n)):
        m += 1
    return m

print("c=1/16", [growth(mp.mpf(1) / 16, n) for n in range(1, 11)])
# Q(1) = 7/10, eps = 1/10: c = eps^2 / (4 q0 q1) = 1/84
print("c=1/84", [growth(mp.mpf(1) / 84, n) for n in range(1, 6)])
