"""Taking words apart by factor, and the languages built from the pieces.

Run: python3 demos/02_factorizations.py
"""

from relhyp import catalog
from relhyp.factorize import SpecialWords, derive, factorize, has_parabolic_shortening, shortlex_factor_languages
from relhyp.langmach import factor_languages, rel_language
from relhyp.metric import FactorBalls, Metric, build_ball

# F2 on a, b plus the extra letter t = ab, which lies in no factor.
X = catalog.f2_plus_t()
fb = FactorBalls(X, 6)
W = X.parse_word("a a t b b^-1 b a")
F = factorize(W, X)
print("word      :", X.format_word(W))
print("segments  :", [X.format_word(s) or "-" for s in F.segments])
print("shortening:", has_parabolic_shortening(F, X, fb))

V = X.parse_word("a a t b a")
print("derived   :", derive(V, X, fb))

# Rel keeps a word when each of its blocks lies in the chosen factor language.
Y = catalog.z2_star_z()
yb = FactorBalls(Y, 8)
R = rel_language(Y, factor_languages(Y, yb, "shortlex"), yb)
for text in ("e1 e2 t", "e2 e1 t", "e1 t e2 t^-1"):
    print(f"Rel(ShortLex) contains {text!r}: {R.accepts(Y.parse_word(text))}")

# Special words: geodesic, in Rel, and each leading block as long as possible.
m = Metric(Y, build_ball(Y, 5), yb)
S = SpecialWords(Y, m, yb, shortlex_factor_languages(Y, yb))
g = Y.evaluate(Y.parse_word("e2 t e1 e1 t^-1 t^-1"))
rep = S.representative(g)
print("special representative:", Y.format_word(rep), "->", S.is_special(rep))
