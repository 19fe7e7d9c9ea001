"""Print the limiting probabilities with their certified error bounds."""

from walkdisc import predictor

PRIMES = (2, 3, 5, 7, 11)


def main():
    print("p    walk (p^2 does not divide det W)    disc (q does not divide disc)")
    for p in PRIMES:
        w = predictor.walk_limit_p(p)
        d = predictor.disc_limit_p(2) if p == 2 else predictor.disc_limit_psquare(p)
        q = "2" if p == 2 else f"{p}^2"
        print(f"{p:<4} {w.value:.12f} +/- {w.error:.0e}      q={q:<5} {d.value:.12f}")

    print("\nproducts over all primes")
    print("  walk:", predictor.walk_limit_global())
    print("  disc:", predictor.disc_limit_global())

    print("\nnon-symmetric 0/1 matrices, walk condition")
    for p in PRIMES[:3]:
        print(f"  p={p}: {predictor.asymmetric_walk_limit(p).value:.6f}")

    print("\nassembling the p=2 walk limit from per-beta factors")
    for D in (1, 2, 4, 8, 14):
        a = predictor.assemble_over_beta(2, "walk", D)
        print(f"  deg beta <= {D:>2}: {a.value:.10f} +/- {a.error:.1e}")
    print(f"  closed form:     {predictor.walk_limit_p(2).value:.10f}")


if __name__ == "__main__":
    main()
