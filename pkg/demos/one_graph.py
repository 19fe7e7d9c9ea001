"""Follow one small graph through both routes of every condition."""

from walkdisc import (
    condition_d1,
    condition_d2,
    disc_exact_divisibility,
    disc_mod_p,
    localize_group,
    walk_condition,
    walk_condition_module_oracle,
    walk_matrix,
)
from walkdisc.conditions import cokernel_type
from walkdisc.experiments import exact_discriminant
from walkdisc.linalg import det_integer

# a small graph with loops whose walk matrix has determinant 24
M = [
    [1, 0, 0, 1, 0],
    [0, 0, 0, 0, 1],
    [0, 0, 1, 1, 1],
    [1, 0, 1, 1, 1],
    [0, 1, 1, 1, 0],
]
zeta = [1, 1, 0, 0, 0]

# a 5-cycle with one loop, whose discriminant has p-adic structure at 3 and 5
C = [
    [1, 1, 0, 0, 1],
    [1, 0, 1, 0, 0],
    [0, 1, 0, 1, 0],
    [0, 0, 1, 0, 1],
    [1, 0, 0, 1, 0],
]


def main():
    W = walk_matrix(M, zeta)
    print("walk matrix W:")
    for row in W.entries:
        print("  ", list(row))
    d = det_integer(W)
    G = cokernel_type(W)
    print(f"det W = {d}, coker W = {G}")
    for p in (2, 3, 5, 7):
        fast = walk_condition(M, zeta, p)
        slow = walk_condition_module_oracle(M, zeta, p)
        print(f"  p={p}: local part {localize_group(G, p)}; determinant route {fast.kind}"
              f"{'' if fast.a is None else f' (a={fast.a})'}; module route {slow.kind}")

    delta = exact_discriminant(C)
    print(f"\n5-cycle with a loop: discriminant of the characteristic polynomial = {delta}")
    for p in (2, 3, 5, 7):
        line = f"  p={p}: p | disc is {disc_mod_p(C, p)}; module route says coprime is {condition_d1(C, p)}"
        if p > 2:
            v = disc_exact_divisibility(C, p)
            line += f"; exact verdict {v.kind}, module witness {condition_d2(C, p)}"
        print(line)


if __name__ == "__main__":
    main()
