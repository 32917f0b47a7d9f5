"""Fellow-travelling constants measured on finite balls.

Every number printed here is only as good as the bound it was measured at.

Run: python3 demos/04_fellow_travellers.py
"""

from relhyp import catalog
from relhyp.fellow import async_constant, biautomatic_fellow_check, check_Lforall, staircase, sync_distance
from relhyp.langmach import geo_rel_decider, is_shortlex, rel_normal_form
from relhyp.metric import FactorBalls, Metric

Z2 = catalog.free_abelian()
m = Metric.build(Z2, 8)
U, V = Z2.parse_word("e1 e1 e2 e2"), Z2.parse_word("e2 e2 e1 e1")
print("synchronous :", sync_distance(U, V, m))
print("asynchronous:", async_constant(U, V, m))
print("staircase   :", staircase(U, V, async_constant(U, V, m), m))

# ShortLex in Z^2: moving a word by a generator on either side barely moves it.
shortlex = lambda W: is_shortlex(W, m)
print(check_Lforall(shortlex, m, 5, representatives=lambda g: [m.geodesic_word(g)]).summary())

# In Z^2 * Z the normal forms (ShortLex inside each factor) fellow travel too,
# with a constant that does not grow with the length bound.
X = catalog.z2_star_z()
mx = Metric.build(X, 7, 8)
fb = mx.factor_balls
L, reps = geo_rel_decider(mx, fb), rel_normal_form(X, fb)
for bound in (3, 4, 5):
    print(biautomatic_fellow_check(L, mx, bound, representatives=reps).summary())
