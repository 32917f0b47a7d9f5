"""Deciding conjugacy by cyclic reduction and a short conjugator search.

Run: python3 demos/03_conjugacy.py
"""

import random

from relhyp import catalog
from relhyp.conjugacy import (ConjugacySolver, bcd_report, bench, build_phi, conjugate_exact, random_conjugate_pair,
                              reduce)
from relhyp.metric import Metric

X = catalog.f2_plus_t()
m = Metric.build(X, 8)

# Φ: the short non-geodesic words that cyclic reduction must rewrite.
phi = build_phi(X, m, 6)
print(f"|Φ| = {len(phi)}, complete to length {phi.bound}")
for W, V in sorted(phi.words.items())[:4]:
    print(f"  {X.format_word(W)} -> {X.format_word(V)}")

print("reduce 'b a'         ->", X.format_word(reduce(X.parse_word("b a"), X, m, phi).word))
print("reduce 'a b a^-1 t'  ->", X.format_word(reduce(X.parse_word("a b a^-1 t"), X, m, phi).word))

# The conjugator bound comes from an exhaustive sweep over cyclic geodesics.
rep = bcd_report(X, m, 6, 6)
print("conjugator bound:", rep.summary())
solver = ConjugacySolver(X, m, phi, rep.constant)

U, V = X.parse_word("t a^-1 b"), X.parse_word("b b")
print(solver.decide(U, V, verify=True).summary(X))

rng = random.Random(1)
U, V = random_conjugate_pair(X, 60, rng)
v = solver.decide(U, V, verify=True)
print(f"random pair of length {len(U)}, {len(V)}: conjugate={v.conjugate}, conjugator length {len(v.conjugator)}")
c = conjugate_exact(X.evaluate(U), X.evaluate(V), X.spec)
print("exact oracle agrees:", c is not None)

res = bench(solver, sizes=(50, 100, 200, 400), trials=3)
for n, s in zip(res.sizes, res.seconds):
    print(f"  n={n}: {s * 1000:.1f} ms")
print(f"fitted exponent {res.exponent:.2f}")
