"""
Pages of the Iwasawa manifold
=============================

The Iwasawa manifold is the complex Heisenberg group modulo its Gaussian
integer points.  Its Frolicher spectral sequence has a nonzero first
differential and degenerates at the second page.
"""

from frolicher import ce_differential, pages_direct, pages_iterative, degeneracy_step, compare_stacks
from frolicher.algebra import GenDecl, ModelDescription, build_model
from frolicher.solvmodel import build_B_MMTT

# structure constants: [e1, e2] = -e3, all other brackets vanish
d = ce_differential(["w1", "w2", "w3"], {("w1", "w2"): {"w3": -1}}, complex_parallelizable=True)
print("d w3 =", d["w3"])

desc = ModelDescription(name="iwasawa",
                        generators=[GenDecl(x, {}, d[x]) for x in ("w1", "w2", "w3")],
                        flags={"complex_parallelizable": True})
model = build_model(desc)

# with no characters, the model is just the invariant forms
B = build_B_MMTT(model)
print(B)

stack = pages_direct(B)
for r in (1, 2):
    print(f"E_{r} dims by row p:")
    for p in range(B.P + 1):
        print("   ", [stack.dims(r)[(p, q)] for q in range(B.Q + 1)])
    print(f"  rank of d_{r}: {sum(stack.ranks(r).values())}")

# the zig-zag algorithm is an independent route to the same pages
assert compare_stacks(stack, pages_iterative(B)) == []
print("degeneracy step r =", degeneracy_step(stack))
