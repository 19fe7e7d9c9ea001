"""Monte Carlo experiments, table grids, finite-n band checks and oracle sweeps.

Samples are drawn in fixed-size chunks; chunk i always uses the stream
Seed(seed, i), and chunk results are summed in chunk order. The outcome
of a run therefore depends only on the ExperimentSpec, never on the worker count.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
from dataclasses import asdict, dataclass, field, replace
from multiprocessing import get_context
from typing import Iterable, Sequence

import numpy as np

from . import predictor
from .conditions import (
    condition_d1,
    condition_d2,
    condition_wp,
    disc_exact_divisibility,
    disc_mod_p,
    length_identity_check,
    walk_condition,
    walk_condition_module_oracle,
)
from .ensembles import (
    DEFAULT_SEED,
    FIELD_KINDS,
    TRUNCATED_KINDS,
    ZERO_ONE_KINDS,
    EnsembleSpec,
    Seed,
    VectorSpec,
    sample_batch,
    sample_symmetric01,
    sample_vector,
)
from .fingerprint import EVENTS, fingerprint_from_codes
from .kernels import (
    berkowitz_charpoly,
    capped_valuation,
    derivative_coeffs,
    field_rank,
    gf2_rank,
    krylov_columns,
    local_eliminate,
    sylvester_batch,
    walk_valuation_p2,
)
from .linalg import ExactMatrix, charpoly_berkowitz, discriminant
from .polynomials import FieldPolynomial, enumerate_irreducibles
from .rings import ZZ, is_prime, prime_power, valuation

STATISTICS = ("walk", "disc", "rank", "event", "diagonal")
WALK_TAGS = ("W-trivial", "W-Fq", "N-trivial", "N-Fq")
D_TAGS = ("D-trivial", "D-Fq", "D-pair")
CSV_COLUMNS = ("table", "n", "param", "vector", "N", "seed", "mean", "stderr", "predicted", "pred_error", "z")

# entries per sub-batch; bounds peak memory of the kernels
_BATCH_ENTRIES = 4_000_000


@dataclass(frozen=True)
class ExperimentSpec:
    """A Monte Carlo experiment.

    Attributes:
        ensemble: Matrix law.
        statistic: "walk" (p^2 does not divide det W), "disc" (q does not
            divide the discriminant), "rank" (corank equals k), "event"
            (a per-beta cokernel event) or "diagonal" (M[0, 0] = 1).
        p: Prime for "walk".
        q: Prime or prime square for "disc".
        k: Corank for "rank".
        event: Event tag for "event".
        vector: Law of zeta for "walk".
        samples: Number of samples N.
        seed: Master seed.
        workers: Worker processes; does not affect the result.
        chunk_size: Samples per random stream.
    """

    ensemble: EnsembleSpec
    statistic: str
    p: int | None = None
    q: int | None = None
    k: int | None = None
    event: str | None = None
    vector: VectorSpec | None = None
    samples: int = 100_000
    seed: int = DEFAULT_SEED
    workers: int = 1
    chunk_size: int = 10_000

    def __post_init__(self):
        kind = self.ensemble.kind
        if self.statistic not in STATISTICS:
            raise ValueError(f"unknown statistic {self.statistic!r}; expected one of {STATISTICS}")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.chunk_size < 1 or self.workers < 1:
            raise ValueError("chunk_size and workers must be >= 1")
        if self.statistic == "walk":
            if kind not in ZERO_ONE_KINDS:
                raise ValueError("walk statistic needs a 0/1 ensemble")
            if self.p is None or not is_prime(self.p):
                raise ValueError(f"walk statistic needs a prime p, got {self.p}")
            if self.vector is None:
                object.__setattr__(self, "vector", VectorSpec())
            if self.vector.kind == "indicator" and self.vector.index >= self.ensemble.n:
                raise ValueError("indicator index out of range")
        elif self.statistic == "disc":
            if kind not in ZERO_ONE_KINDS:
                raise ValueError("disc statistic needs a 0/1 ensemble")
            pp = prime_power(self.q) if self.q else None
            if pp is None or pp[1] > 2:
                raise ValueError(f"disc statistic needs q = p or p^2, got {self.q}")
        elif self.statistic == "rank":
            if kind not in FIELD_KINDS:
                raise ValueError("rank statistic needs an F_q ensemble")
            if self.k is None or self.k < 0:
                raise ValueError("rank statistic needs k >= 0")
        elif self.statistic == "event":
            if kind not in TRUNCATED_KINDS:
                raise ValueError("event statistic needs a truncated-ring ensemble")
            _check_event(self.event, kind)
        elif self.statistic == "diagonal":
            if kind not in ZERO_ONE_KINDS:
                raise ValueError("diagonal statistic needs a 0/1 ensemble")

    @property
    def param(self) -> str:
        if self.statistic == "walk":
            return f"p={self.p}"
        if self.statistic == "disc":
            return f"q={self.q}"
        if self.statistic == "rank":
            s = f"q={self.ensemble.q};k={self.k}"
            return s + (f";m={self.ensemble.m}" if self.ensemble.kind == "rect_Fq" else "")
        if self.statistic == "event":
            e = self.ensemble
            beta = FieldPolynomial(e.p, e.beta)
            return f"{self.event};p={e.p};beta={beta}"
        return "diag"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ensemble"]["beta"] = list(self.ensemble.beta)
        d["vector"] = self.vector.label if self.vector else None
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentSpec":
        d = dict(d)
        ens = dict(d.pop("ensemble"))
        if "beta" in ens and ens["beta"] is not None:
            ens["beta"] = tuple(ens["beta"])
        vec = d.pop("vector", None)
        if isinstance(vec, str):
            vec = VectorSpec.parse(vec)
        elif isinstance(vec, dict):
            vec = VectorSpec(**vec)
        return cls(EnsembleSpec(**ens), vector=vec, **d)


def _check_event(tag, kind):
    if tag not in EVENTS and tag not in ("N-trivial", "N-Fq"):
        raise ValueError(f"unknown event {tag!r}")
    if tag.startswith("N-") and kind != "asym_truncated":
        raise ValueError(f"{tag} is an event of non-symmetric matrices")
    if not tag.startswith("N-") and kind == "asym_truncated":
        raise ValueError(f"{tag} is an event of symmetric matrices")


@dataclass(frozen=True)
class Estimate:
    """Success count out of N samples."""

    successes: int
    samples: int

    @property
    def mean(self) -> float:
        return self.successes / self.samples

    @property
    def stderr(self) -> float:
        m = self.mean
        return math.sqrt(m * (1 - m) / self.samples)


@dataclass(frozen=True)
class ReportRow:
    """One experiment cell compared with its predicted limit."""

    table: str
    n: int
    param: str
    vector: str
    N: int
    seed: int
    mean: float
    stderr: float
    predicted: float
    pred_error: float
    z: float
    band: float | None = None
    passed: bool | None = None

    def as_record(self) -> dict:
        return {c: getattr(self, c) for c in CSV_COLUMNS}


def z_score(mean: float, predicted: float, stderr: float) -> float:
    if stderr > 0:
        return (mean - predicted) / stderr
    return 0.0 if mean == predicted else math.copysign(math.inf, mean - predicted)


# ---------------------------------------------------------------- evaluation


def _sub_batches(count: int, per_sample: int):
    step = max(1, min(count, _BATCH_ENTRIES // max(per_sample, 1)))
    done = 0
    while done < count:
        b = min(step, count - done)
        yield b
        done += b


def walk_success(M: np.ndarray, z: np.ndarray, p: int) -> np.ndarray:
    """Boolean mask of samples with p^2 not dividing det W."""
    W = krylov_columns(M, z, p * p)
    v = walk_valuation_p2(W) if p == 2 else capped_valuation(W, p, 2)
    return v <= 1


def disc_success(M: np.ndarray, q: int) -> np.ndarray:
    """Boolean mask of samples with q not dividing the discriminant of the charpoly.

    The Sylvester matrix of (phi, phi') keeps the formal degrees n and n-1,
    so its determinant mod p^c is the integer resultant mod p^c.
    """
    p, c = prime_power(q)
    mod = p**c
    phi = berkowitz_charpoly(M, mod)
    S = sylvester_batch(phi, derivative_coeffs(phi, mod))
    if q == 2:
        return gf2_rank((S & 1).astype(np.uint8)) == S.shape[1]
    return capped_valuation(S, p, c) < c


_FP_CACHE: dict = {}


def _residual_fingerprint(ring, key_rows: np.ndarray):
    """Fingerprint of a 1-row residual block, memoized on its codes."""
    ck = (ring.p, ring.beta.coeffs, ring.beta_power, key_rows.shape, key_rows.tobytes())
    fp = _FP_CACHE.get(ck)
    if fp is None:
        fp = fingerprint_from_codes(ring, key_rows)
        _FP_CACHE[ck] = fp
    return fp


def _event_name(tag: str) -> str:
    return {"N-trivial": "W-trivial", "N-Fq": "W-Fq"}.get(tag, tag)


def event_counts(A: np.ndarray, z: np.ndarray, ring, tags: Sequence[str]) -> np.ndarray:
    """Number of samples satisfying each event tag.

    W and N tags read coker([A | z]), D tags read coker(A). After unit-pivot
    elimination only corank 0 and 1 can satisfy an event; corank-1 residual
    blocks are classified by their memoized fingerprints.
    """
    tables = ring.tables
    B, n, _ = A.shape
    out = np.zeros(len(tags), dtype=np.int64)
    for with_z in (False, True):
        idx = [i for i, t in enumerate(tags) if (t in WALK_TAGS) == with_z]
        if not idx:
            continue
        X = np.concatenate([A, z[:, :, None]], axis=2) if with_z else A
        X = X.astype(tables.add.dtype)
        stop, R = local_eliminate(X, tables)
        k = n - stop
        for i in idx:
            name = _event_name(tags[i])
            if name in ("W-trivial", "D-trivial"):
                out[i] += int(np.count_nonzero(k == 0))
        ones = np.flatnonzero(k == 1)
        for b in ones:
            fp = _residual_fingerprint(ring, np.ascontiguousarray(R[b, n - 1 :, n - 1 :]))
            for i in idx:
                name = _event_name(tags[i])
                if name not in ("W-trivial", "D-trivial") and EVENTS[name](fp):
                    out[i] += 1
    return out


def _outcomes(spec: ExperimentSpec) -> tuple:
    return (spec.event,) if spec.statistic == "event" else ("success",)


def _chunk_counts(spec: ExperimentSpec, chunk: int, count: int, tags: tuple) -> np.ndarray:
    """Counts for one chunk; drawn from stream Seed(spec.seed, chunk)."""
    rng = Seed(spec.seed, chunk).rng()
    ens = spec.ensemble
    n = ens.rows
    out = np.zeros(len(tags), dtype=np.int64)
    if spec.statistic == "disc":
        per = (2 * n) ** 2
    elif spec.statistic == "event":
        per = n * (n + 1) * 4
    else:
        per = n * (ens.cols + 1)
    for b in _sub_batches(count, per):
        M = sample_batch(ens, rng, b)
        if spec.statistic == "walk":
            z = sample_vector(spec.vector, n, rng, b)
            out[0] += int(np.count_nonzero(walk_success(M, z, spec.p)))
        elif spec.statistic == "disc":
            out[0] += int(np.count_nonzero(disc_success(M, spec.q)))
        elif spec.statistic == "rank":
            F = ens.field
            rank = gf2_rank(M.astype(np.uint8)) if F.q == 2 else field_rank(M.astype(F.tables.add.dtype), F.tables)
            out[0] += int(np.count_nonzero(n - rank == spec.k))
        elif spec.statistic == "event":
            T = ens.ring
            z = rng.integers(0, T.size, size=(b, n), dtype=np.int64)
            out += event_counts(M, z, T, tags)
        else:
            out[0] += int(np.count_nonzero(M[:, 0, 0] == 1))
    return out


def _chunk_job(args):
    return _chunk_counts(*args)


def _chunks(spec: ExperimentSpec):
    N, c = spec.samples, spec.chunk_size
    return [(i, min(c, N - i * c)) for i in range(-(-N // c))]


def run_counts(spec: ExperimentSpec, tags: tuple | None = None) -> np.ndarray:
    """Success counts per outcome tag, summed over chunks in chunk order."""
    tags = tags or _outcomes(spec)
    jobs = [(spec, i, cnt, tags) for i, cnt in _chunks(spec)]
    if spec.workers > 1 and len(jobs) > 1:
        with get_context("fork").Pool(min(spec.workers, len(jobs))) as pool:
            parts = pool.map(_chunk_job, jobs)
    else:
        parts = [_chunk_job(j) for j in jobs]
    total = np.zeros(len(tags), dtype=np.int64)
    for part in parts:
        total += part
    return total


def run(spec: ExperimentSpec) -> Estimate:
    """Estimate the success probability of spec's statistic."""
    return Estimate(int(run_counts(spec)[0]), spec.samples)


def run_events(spec: ExperimentSpec, tags: Sequence[str]) -> dict[str, Estimate]:
    """Estimate several events from the same samples."""
    if spec.statistic != "event":
        raise ValueError("run_events needs an event statistic")
    for t in tags:
        _check_event(t, spec.ensemble.kind)
    counts = run_counts(spec, tuple(tags))
    return {t: Estimate(int(c), spec.samples) for t, c in zip(tags, counts)}


# ---------------------------------------------------------------- predictions


def predict_for(spec: ExperimentSpec) -> predictor.CertifiedValue:
    """Large-n limit of spec's statistic."""
    ens = spec.ensemble
    if spec.statistic == "walk":
        if ens.kind == "asym01":
            return predictor.asymmetric_walk_limit(spec.p)
        return predictor.walk_limit_p(spec.p)
    if spec.statistic == "disc":
        p, c = prime_power(spec.q)
        if c == 1:
            return predictor.disc_limit_p(p)
        return predictor.disc_limit_psquare(p)
    if spec.statistic == "rank":
        if ens.kind == "sym_Fq":
            return predictor.rank_limit_symmetric(ens.q, spec.k)
        return predictor.rank_limit_rectangular(ens.q, spec.k, ens.m)
    if spec.statistic == "event":
        return predictor.event_limit(spec.event, ens.p, len(ens.beta) - 1)
    return predictor.CertifiedValue(0.5, 0.0)


def finite_band(spec: ExperimentSpec) -> float:
    """Known bound on |P_n - limit| at finite n (0 when none is known)."""
    ens = spec.ensemble
    if spec.statistic == "event":
        return predictor.event_band(spec.event, ens.residue_q, ens.n)
    if spec.statistic == "rank":
        return 3 / float(ens.q) ** ens.n
    return 0.0


def report_row(spec: ExperimentSpec, est: Estimate, table: str, band: float | None = None, sigmas: float = 4.0) -> ReportRow:
    pred = predict_for(spec)
    z = z_score(est.mean, pred.value, est.stderr)
    passed = None
    if band is not None:
        passed = abs(est.mean - pred.value) <= band + pred.error + sigmas * est.stderr
    return ReportRow(
        table,
        spec.ensemble.n,
        spec.param,
        spec.vector.label if spec.vector else "",
        spec.samples,
        spec.seed,
        est.mean,
        est.stderr,
        pred.value,
        pred.error,
        z,
        band,
        passed,
    )


def simulate(spec: ExperimentSpec, table: str = "sim") -> ReportRow:
    """Run spec and compare with its prediction, applying the finite-n band if known."""
    est = run(spec)
    band = finite_band(spec) if spec.statistic in ("event", "rank") else None
    return report_row(spec, est, table, band)


# ---------------------------------------------------------------- tables

TABLE_SIZES = (8, 10, 12, 15, 25, 50, 100)
TABLE_PARAMS = {
    "walk": (2, 3, 5, 7, 11),
    "disc": (2, 9, 25, 49, 121),
    "walk-ones": (2, 3, 5, 7, 11),
    "walk-indicator": (2, 3, 5, 7, 11),
}
TABLE_VECTORS = {"walk": "uniform", "walk-ones": "ones", "walk-indicator": "indicator:0"}


def table_specs(
    table: str,
    sizes: Sequence[int] | None = None,
    params: Sequence[int] | None = None,
    samples: int = 100_000,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    chunk_size: int = 10_000,
) -> list[ExperimentSpec]:
    """Experiment grid of a table, ordered by parameter then size."""
    table = str(table)
    if table not in TABLE_PARAMS:
        raise ValueError(f"unknown table {table!r}; expected one of {sorted(TABLE_PARAMS)}")
    sizes = tuple(sizes or TABLE_SIZES)
    params = tuple(params or TABLE_PARAMS[table])
    out = []
    for par in params:
        for n in sizes:
            ens = EnsembleSpec("sym01_loops", n)
            common = dict(samples=samples, seed=seed, workers=workers, chunk_size=chunk_size)
            if table == "disc":
                out.append(ExperimentSpec(ens, "disc", q=par, **common))
            else:
                vec = VectorSpec.parse(TABLE_VECTORS[table])
                out.append(ExperimentSpec(ens, "walk", p=par, vector=vec, **common))
    return out


def run_table(table: str, **overrides) -> list[ReportRow]:
    """Estimate every cell of a table grid.

    Tables: "walk" walk condition with uniform zeta, "disc" discriminant
    with q in {2, 9, 25, 49, 121}, "walk-ones" walk condition with the
    all-ones zeta, "walk-indicator" walk condition with the indicator of
    the first coordinate.
    """
    return [report_row(s, run(s), str(table)) for s in table_specs(table, **overrides)]


# ---------------------------------------------------------------- profinite checks

PROFINITE_EVENTS = ("W-trivial", "W-Fq", "D-trivial", "D-Fq", "D-pair")


def profinite_spec(p: int, beta, n: int, event: str, samples: int = 100_000, seed: int = DEFAULT_SEED,
                   workers: int = 1, beta_power: int = 3, chunk_size: int = 10_000) -> ExperimentSpec:
    kind = "asym_truncated" if event.startswith("N-") else "sym_truncated"
    ens = EnsembleSpec(kind, n, p=p, beta=tuple(beta), beta_power=beta_power)
    return ExperimentSpec(ens, "event", event=event, samples=samples, seed=seed, workers=workers, chunk_size=chunk_size)


def run_profinite_check(p: int, beta, n: int, events: str | Sequence[str] = PROFINITE_EVENTS,
                        samples: int = 100_000, seed: int = DEFAULT_SEED, workers: int = 1,
                        beta_power: int = 3, chunk_size: int = 10_000) -> list[ReportRow]:
    """Compare event frequencies over the truncated ring with their limits.

    A row passes when |mean - limit| <= c/q^n + 4 stderr (plus the
    predictor's own error bound). Events sharing a symmetry type are
    estimated from the same samples.
    """
    if isinstance(events, str):
        events = (events,)
    rows = []
    for group in (tuple(e for e in events if not e.startswith("N-")), tuple(e for e in events if e.startswith("N-"))):
        if not group:
            continue
        spec = profinite_spec(p, beta, n, group[0], samples, seed, workers, beta_power, chunk_size)
        ests = run_events(spec, group)
        for e in group:
            s = replace(spec, event=e)
            rows.append(report_row(s, ests[e], "profinite", finite_band(s)))
    return rows


# ---------------------------------------------------------------- oracle sweeps


@dataclass
class OracleReport:
    suite: str
    cases: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return f"{self.suite}: {status} ({self.cases} cases, {len(self.counterexamples)} disagreements)"


def all_symmetric01(n: int):
    """Every symmetric n x n 0/1 matrix (loops allowed), as nested lists."""
    pos = [(i, j) for i in range(n) for j in range(i, n)]
    for bits in itertools.product((0, 1), repeat=len(pos)):
        M = [[0] * n for _ in range(n)]
        for (i, j), b in zip(pos, bits):
            M[i][j] = M[j][i] = b
        yield M


def exact_discriminant(M) -> int:
    n = len(M)
    phi = charpoly_berkowitz(ExactMatrix.from_rows(ZZ, M, n))
    return discriminant([int(c) for c in phi])


def walk_oracle_suite(max_n: int = 4, primes: Sequence[int] = (2, 3, 5), limit: int = 20) -> OracleReport:
    """Determinant route vs. module route of the walk condition, exhaustively."""
    rep = OracleReport("walk")
    for n in range(1, max_n + 1):
        vectors = list(itertools.product((0, 1), repeat=n))
        for M in all_symmetric01(n):
            for z in vectors:
                for p in primes:
                    rep.cases += 1
                    a = walk_condition(M, z, p)
                    b = walk_condition_module_oracle(M, z, p)
                    c = condition_wp(M, z, p)
                    if a != b or c != a.squarefree_at_p:
                        if len(rep.counterexamples) < limit:
                            rep.counterexamples.append((M, z, p, a, b, c))
    return rep


def disc_oracle_suite(max_n: int = 4, primes: Sequence[int] = (2, 3, 5), exact_primes: Sequence[int] = (3, 5),
                      limit: int = 20) -> OracleReport:
    """Discriminant verdicts vs. the exact integer discriminant, exhaustively."""
    rep = OracleReport("disc")
    for n in range(1, max_n + 1):
        for M in all_symmetric01(n):
            delta = exact_discriminant(M)
            for p in primes:
                rep.cases += 1
                divides = delta % p == 0
                ok = disc_mod_p(M, p) == divides and condition_d1(M, p) == (not divides)
                if not ok and len(rep.counterexamples) < limit:
                    rep.counterexamples.append((M, p, "mod p", delta))
            for p in exact_primes:
                rep.cases += 1
                v = valuation(delta, p) if delta else 2
                expect = ("coprime", "exact", "square")[min(v, 2)]
                verdict = disc_exact_divisibility(M, p)
                holds, a = condition_d2(M, p)
                ok = verdict.kind == expect and holds == (expect == "exact")
                if ok and holds:
                    ok = a == verdict.a
                if not ok and len(rep.counterexamples) < limit:
                    rep.counterexamples.append((M, p, "exact", delta, verdict, (holds, a)))
    return rep


def length_oracle_suite(cases: int = 200, max_n: int = 6, primes: Sequence[int] = (2, 3), max_degree: int = 2,
                        seed: int = DEFAULT_SEED, limit: int = 20) -> OracleReport:
    """Multiplicity of beta in the charpoly vs. length of the beta-part of coker(xI - M)."""
    rep = OracleReport("length")
    rng = Seed(seed, 0).rng()
    betas = {p: enumerate_irreducibles(p, max_degree) for p in primes}
    for _ in range(cases):
        n = int(rng.integers(1, max_n + 1))
        p = int(rng.choice(primes))
        M = sample_symmetric01(n, rng).tolist()
        rep.cases += 1
        for beta in betas[p]:
            if not length_identity_check(M, p, beta):
                if len(rep.counterexamples) < limit:
                    rep.counterexamples.append((M, p, beta))
                break
    return rep


ORACLE_SUITES = ("walk", "disc", "length")


def run_oracle_suite(suite: str = "all") -> list[OracleReport]:
    """Run one suite ("walk", "disc", "length") or "all"."""
    if suite == "all":
        return [r for s in ORACLE_SUITES for r in run_oracle_suite(s)]
    if suite == "walk":
        return [walk_oracle_suite()]
    if suite == "disc":
        return [disc_oracle_suite()]
    if suite == "length":
        return [length_oracle_suite()]
    raise ValueError(f"unknown suite {suite!r}; expected one of {ORACLE_SUITES + ('all',)}")


# ---------------------------------------------------------------- output


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def rows_to_csv(rows: Iterable[ReportRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([_fmt(v) for v in r.as_record().values()])
    return buf.getvalue()


def rows_to_json(rows: Iterable[ReportRow]) -> str:
    recs = []
    for r in rows:
        rec = r.as_record()
        # JSON has no infinities
        if not math.isfinite(rec["z"]):
            rec["z"] = None
        recs.append(rec)
    return json.dumps(recs, indent=2) + "\n"


def emit(rows: Iterable[ReportRow], format: str = "csv", path: str | os.PathLike | None = None) -> str:
    """Render rows as CSV or JSON; also write them to path when given."""
    rows = list(rows)
    if format == "csv":
        text = rows_to_csv(rows)
    elif format == "json":
        text = rows_to_json(rows)
    else:
        raise ValueError(f"unknown format {format!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
