"""Event frequencies for symmetric matrices over a truncated local ring."""

from walkdisc.experiments import PROFINITE_EVENTS, run_profinite_check


def main():
    for p, beta, n in ((2, (0, 1), 12), (3, (0, 1), 10)):
        print(f"p={p}, beta coefficients {beta}, n={n}")
        for r in run_profinite_check(p, beta, n, PROFINITE_EVENTS, samples=5000, chunk_size=2500):
            tag = r.param.split(";")[0]
            print(f"  {tag:<10} mean={r.mean:.4f} limit={r.predicted:.4f} +/- {r.stderr:.4f} "
                  f"{'ok' if r.passed else 'outside band'}")


if __name__ == "__main__":
    main()
