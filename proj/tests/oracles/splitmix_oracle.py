from fractions import Fraction
import math
M=(1<<64)-1
def sm(seed):
    s=seed
    while True:
        s=(s+0x9E3779B97F4A7C15)&M
        z=s
        z=((z^(z>>30))*0xBF58476D1CE4E5B9)&M
        z=((z^(z>>27))*0x94D049BB133111EB)&M
        yield z^(z>>31)
def sample(weights, seed, n):
    cum=Fraction(0); th=[]
    for w in weights:
        cum+=w; th.append(-((-cum.numerator*2**64)//cum.denominator))
    g=sm(seed); out=[]
    for _ in range(n):
        u=next(g)
        for i,t in enumerate(th):
            if u<t: out.append(i); break
        else: out.append(len(th)-1)
    return out
h=Fraction(1,2)
u=sample([h,h],42,10**6)
print("U2 seed42 ones", sum(u), "first4", u[:4], "first16", u[:16])
p=sample([Fraction(1,2),Fraction(1,3),Fraction(1,6)],7,10**6)
c=[p.count(i) for i in range(3)]
print("P3 seed7 counts",c, [abs(c[i]/1e6-float(w)) for i,w in enumerate([h,Fraction(1,3),Fraction(1,6)])])
