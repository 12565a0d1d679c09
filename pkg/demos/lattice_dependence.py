"""
Same group, two lattices
========================

``C`` acting on ``C^2`` through the characters ``e^z`` and ``e^-z``.  Whether
the unitary part of the action is trivial on the lattice decides which
twisted forms survive, and with it the degeneracy step.
"""

from frolicher import corpus_get, build_B_CORR, pages_direct, degeneracy_step, cohomology, tot
from frolicher.solvmodel import resolve_characters

for name in ("example1-2pi", "example1-1"):
    m = corpus_get(name).model
    res = resolve_characters(m)
    y1 = res.generators[1]
    print(f"{name}: U(alpha_y1) trivial on the lattice: {y1.beta_trivial}")

    B = build_B_CORR(m)
    stack = pages_direct(B)
    e1 = [stack[1].total(k) for k in range(B.top + 1)]
    b = cohomology(tot(B)).dims
    print("  dim B       ", sum(B.dims.values()))
    print("  E_1 totals  ", e1)
    print("  Betti       ", b)
    print("  r           ", degeneracy_step(stack))

# With period 2*pi the E_1 page is that of a complex 3-torus, yet b_1 = 2,
# so some differential must be nonzero: r = 2.  With period 1 the twisted
# forms drop out and the sequence degenerates at E_1.
