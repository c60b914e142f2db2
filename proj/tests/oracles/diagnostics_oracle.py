import sys, zlib
from fractions import Fraction
sys.path.insert(0, __file__.rsplit('/', 1)[0])
import importlib.util
spec = importlib.util.spec_from_file_location("sm", __file__.rsplit('/', 1)[0] + "/splitmix_oracle.py")
src = open(spec.origin).read().split("h=Fraction(1,2)")[0]
ns = {}
exec(src, ns)
sample = ns["sample"]
h = Fraction(1, 2)


def pack(bits):
    out = bytearray((len(bits) + 7) // 8)
    for i, b in enumerate(bits):
        if b:
            out[i // 8] |= 0x80 >> (i % 8)
    return bytes(out)


def ratio(bits):
    raw = pack(bits)
    c = zlib.compressobj(9, zlib.DEFLATED, 15, 8)
    z = c.compress(raw) + c.flush()
    return len(z), len(raw), len(z) / len(raw)


n = 10**6
print("zeros", ratio([0] * n))
print("u2 seed42", ratio(sample([h, h], 42, n)))
print("periodic01", ratio([i % 2 for i in range(n)]))

a = sample([h, h], 1, n)
b = sample([h, h], 2, n)
joint = {}
for x, y in zip(a, b):
    joint[(x, y)] = joint.get((x, y), 0) + 1
fa = [a.count(i) / n for i in range(2)]
fb = [b.count(i) / n for i in range(2)]
print("indep seeds 1,2", max(abs(joint.get((x, y), 0) / n - fa[x] * fb[y]) for x in range(2) for y in range(2)))

# dyadic source {1/2,1/4,1/4}, optimal code 0,10,11 and fixed 2-bit code 00,01,10
src3 = sample([h, Fraction(1, 4), Fraction(1, 4)], 11, n)
opt = {0: [0], 1: [1, 0], 2: [1, 1]}
fixed = {0: [0, 0], 1: [0, 1], 2: [1, 0]}
print("coded source optimal", ratio([bit for s in src3 for bit in opt[s]]))
print("coded source fixed", ratio([bit for s in src3 for bit in fixed[s]]))
