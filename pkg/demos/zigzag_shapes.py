"""
Reading pages off zig-zags
==========================

Every bicomplex over a field splits into dots, squares and zig-zags.  A
random one is generated from known shapes and then hidden behind a random
change of basis in each cell; the page algorithms have to rediscover the
shapes.
"""

from frolicher import pages_direct, degeneracy_step
from frolicher.randgen import random_bicomplex, shape_prediction

b = random_bicomplex(seed=11, size=4, shapes=6)
for s in b.shapes:
    print("shape:", s)

e1, einf, r = shape_prediction(b)
stack = pages_direct(b)
nz = lambda d: {c: v for c, v in d.items() if v}

print("E_1 predicted", e1)
print("E_1 computed ", nz(stack.dims(1)))
print("E_inf predicted", einf)
print("E_inf computed ", nz(stack.dims(stack.rmax)))
print("r predicted", r, "computed", degeneracy_step(stack))

# a zig-zag with only a right end, of length m, is cancelled by d_(m+1)
for r_ in range(1, stack.rmax + 1):
    rk = {c: v for c, v in stack.ranks(r_).items() if v}
    if rk:
        print(f"d_{r_} is nonzero at", rk)
