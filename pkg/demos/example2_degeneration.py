"""
A solvmanifold that degenerates earlier than its nilmanifold factor
===================================================================

``G = C x N`` with a unitary character acting on a nilpotent ``N``.  The
nilmanifold factor alone has degeneracy step at least 3, while the twisted
model of ``G`` degenerates at ``E_1``.
"""

from frolicher import (assemble_bicomplex, build_B_CORR, cohomology, corpus_get, degeneracy_step,
                       pages_direct, tot)
from frolicher.solvmodel import split_CD, pipeline_sps, euler_checks

m = corpus_get("example2").model
nil = corpus_get("example2-nilfactor").model

rN = degeneracy_step(pages_direct(assemble_bicomplex(nil)))
print("nilmanifold factor: r =", rN)

B = build_B_CORR(m)
stack = pages_direct(B)
print("solvmanifold model: r =", degeneracy_step(stack))

# Dolbeault numbers, rows p and columns q
h = stack.dims(1)
for p in range(B.P + 1):
    print("  ", [h[(p, q)] for q in range(B.Q + 1)])

b = cohomology(tot(B)).dims
print("Betti numbers:", b)

# B splits as C + D, and D contributes nothing from E_2 on
sp = split_CD(m)
print("dim C =", sum(sp.C.dims.values()), " dim D =", sum(sp.D.dims.values()))
print("E_2(D) = 0:", sp.e2_D_zero, " E_2(B) = E_2(C):", sp.e2_B_equals_C)

# vanishing Euler characteristics and the two duality symmetries
for k, v in euler_checks(h, b, m.n).items():
    print(f"  {k}: {v}")

# the full pipeline with every cross-check
print("\n".join(pipeline_sps(m).lines()))
