"""Geodesic words in Z^2 * Z, counted two ways.

Run: python3 demos/01_geodesics_and_growth.py
"""

from relhyp import automata as au
from relhyp import catalog
from relhyp.fellow import fftp_report
from relhyp.langmach import geo_rel_automaton, ns_automaton
from relhyp.metric import FactorBalls, build_ball, sphere_counts
from relhyp.series import growth_series

X = catalog.z2_star_z()
print("alphabet:", " ".join(X.symbols))

# A ball in the Cayley graph, by breadth-first search.
ball = build_ball(X, 6)
print("sphere sizes to radius 6:", ball.sphere_sizes())

# Every non-geodesic up to length 6 is within distance 1 of a shorter word
# with the same endpoints, so C = 1 should be enough for the acceptor.
rep = fftp_report(X, ball, L_max=6, K_max=4)
print(rep.summary())
C = rep.constant

geo = ns_automaton(X, C, ball)
print(f"geodesic acceptor: {geo.n_states} states")

# Geodesic *words* outnumber elements: e1 e2 and e2 e1 both reach (1,1).
print("geodesic words  :", growth_series(geo).to_text(8))

# Keeping only ShortLex blocks inside each factor leaves one word per element.
nf = geo_rel_automaton(X, geo, FactorBalls(X, 8), "shortlex")
s = growth_series(nf)
print("normal forms    :", s.to_text(8))
print("BFS spheres     :", sphere_counts(X, 8))
assert s.coefficients(8) == sphere_counts(X, 8)

W = X.parse_word("e2 e1 t")
print(f"{X.format_word(W)!r}: geodesic={geo.accepts(W)}, normal form={nf.accepts(W)}")
print()
print(au.to_text(nf))
