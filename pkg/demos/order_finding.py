"""Sample the order-finding network and recover the order from the readout.

Starting from |1>, the system register is a uniform superposition of the
Fourier cycle states, so each run reads a random a close to 2^m * l/k.
Continued fractions turn a/2^m back into l/k.
"""
from collections import Counter

from qnet.measure import make_rng
from qnet.numtheory import multiplicative_order
from qnet.shor import default_m, order_finding_attempt

rng = make_rng(0)

print("q=8, N=15 with two ancillas")
runs = [order_finding_attempt(8, 15, rng, m=2) for _ in range(2000)]
hist = Counter(r.a for r in runs)
for a in range(4):
    print(f"  a={a}: {hist[a] / len(runs):.3f}")
print(f"  order recovered in {sum(r.order == 4 for r in runs) / len(runs):.1%} of runs\n")

for q, N in [(8, 15), (2, 15), (2, 21), (11, 21)]:
    m = default_m(N)
    k = multiplicative_order(q, N)
    att = order_finding_attempt(q, N, rng)
    print(f"q={q}, N={N}, m={m}: read a={att.a}, fraction {att.fraction}, order {att.order} (true {k})")

print("\nA miss such as 1/2 for order 4 just means l and k shared a factor; rerun.")
