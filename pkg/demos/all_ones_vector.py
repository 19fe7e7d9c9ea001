"""The walk condition with a deterministic all-ones vector drifts away from the limit.

Uniform and indicator vectors track the limit; the all-ones vector does not.
A few thousand samples at moderate n already show the gap.
"""

import sys

from walkdisc.ensembles import EnsembleSpec, VectorSpec
from walkdisc.experiments import ExperimentSpec, simulate


def main(samples: int = 20000, n: int = 60):
    print(f"n={n}, p=2, N={samples}")
    for label in ("uniform", "indicator:0", "ones"):
        spec = ExperimentSpec(EnsembleSpec("sym01_loops", n), "walk", p=2, vector=VectorSpec.parse(label),
                              samples=samples, chunk_size=1000)
        row = simulate(spec)
        print(f"  {label:<12} mean={row.mean:.4f} +/- {row.stderr:.4f}  limit={row.predicted:.5f}  z={row.z:+.1f}")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:]))
