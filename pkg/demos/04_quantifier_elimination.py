"""Formulas, witness search, quantifier elimination, sentence decision.

The concrete syntax: variables are lowercase words, constants are
$-prefixed, X n(t) is written Xn(t), connectives are ! & | ->, and
quantifiers are "E v." / "A v.".
"""

from axisspace import (
    FieldCtx,
    decide_sentence,
    eliminate_all,
    eval_qf,
    parse_formula,
    print_formula,
    rich_model,
    witness_search,
)

Q = FieldCtx.rationals()
M = rich_model(Q)

# A concrete witness problem: x two axes wide, neither inside X^1, landing
# within distance 3 of the parameter.
c = M.e(0, 0)
phi = parse_formula("X2(x) & !X1(x) & X3(x + $c)", Q)
w = witness_search(phi, "x", {"$c": c}, M)
print("witness:", w)
print("verified:", eval_qf(phi, {"x": w, "$c": c}, Q))

# Elimination produces a condition on the parameter alone.  Two unit balls
# around $c and $d intersect exactly when the centers are within distance 2.
ball = parse_formula("E x. (X1(x + -1*$c) & X1(x + -1*$d))", Q)
cond = eliminate_all(ball)
print("parameter condition:", print_formula(cond))

env_near = {"$c": M.e(0, 0), "$d": M.e(0, 0) + M.e(1, 0) + M.e(2, 0)}
env_far = {"$c": M.e(0, 0), "$d": M.e(1, 0) + M.e(2, 0) + M.e(3, 0) + M.e(4, 0)}
print("centers at distance 3:", eval_qf(cond, env_near, Q))
print("centers at distance 5:", eval_qf(cond, env_far, Q))

# Sentences are decided outright.
for text in [
    "A x. (X1(x) -> X2(x))",
    "A x. (X2(x) -> X1(x))",
    "E x. (!X1(x) & X2(x))",
    "A x. (X0(x) -> x = 0)",
]:
    print(f"{text:38} ->", decide_sentence(parse_formula(text, Q)))
