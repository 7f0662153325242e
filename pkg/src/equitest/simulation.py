"""Monte Carlo engine for the operating-characteristic and agreement studies.

Every replicate draws from its own random stream, derived from
``(seed, scenario key, replicate index)`` through :class:`numpy.random.SeedSequence`.
Any replicate can therefore be regenerated in isolation, and results do not
depend on how replicates are distributed across worker processes: workers
return integer counts which are summed in a fixed order.
"""

import csv
import io
import itertools
import json
import math
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from statistics import NormalDist
from typing import Optional, Sequence

import numpy as np

from .bayes import RSCALE_MEDIUM, BfDecision, bf_decision, jzs_bf_inclusion
from .distributions import integrate
from .equivalence import Decision, cet_decision, equiv_std_beta, nhst_t
from .exceptions import InfeasibleCorrelationError, InfeasibleDesignError, InputError, RankDeficientError
from .linear_model import Dataset, fit_ols

BALANCED = "orthogonal-balanced"
CORRELATED = "correlated-unbalanced"
DESIGNS = (BALANCED, CORRELATED)

STUDY1_DELTAS = tuple(round(0.01 + 0.005 * i, 3) for i in range(49))
STUDY2_DELTAS = (0.05, 0.10, 0.25)
STUDY2_THRESHOLDS = (3.0, 6.0, 10.0)

# marginals and correlations of the correlated, unbalanced covariates
DEFAULT_CORRELATED = {
    2: ((0.5, 0.25), ((1.0, 0.4), (0.4, 1.0))),
    4: ((0.5, 0.25, 0.25, 0.5),
        ((1.0, 0.4, 0.3, 0.0),
         (0.4, 1.0, 0.4, 0.3),
         (0.3, 0.4, 1.0, 0.4),
         (0.0, 0.3, 0.4, 1.0))),
}

_LATENT_TOL = 1e-4


# ---------------------------------------------------------------------------
# correlated binary covariates

@dataclass(frozen=True)
class CorrelatedBinaryDesign:
    marginal_probs: tuple
    target_corr: tuple

    def __post_init__(self):
        p = np.asarray(self.marginal_probs, dtype=float)
        c = np.asarray(self.target_corr, dtype=float)
        k = p.size
        if p.ndim != 1 or np.any(p <= 0) or np.any(p >= 1):
            raise InfeasibleCorrelationError(f"marginal probabilities must lie in (0, 1), got {p.tolist()}")
        if c.shape != (k, k):
            raise InfeasibleCorrelationError(f"correlation matrix must be {k}x{k}, got shape {c.shape}")
        if not np.allclose(c, c.T, atol=1e-12) or not np.allclose(np.diag(c), 1.0):
            raise InfeasibleCorrelationError("correlation matrix must be symmetric with unit diagonal")
        if np.linalg.eigvalsh(c).min() < -1e-12:
            raise InfeasibleCorrelationError("correlation matrix is not positive semidefinite")
        for i, j in itertools.combinations(range(k), 2):
            lo, hi = frechet_bounds(p[i], p[j])
            if not lo - 1e-12 <= c[i, j] <= hi + 1e-12:
                raise InfeasibleCorrelationError(
                    f"corr(X{i + 1}, X{j + 1}) = {c[i, j]} outside the attainable range [{lo:.4f}, {hi:.4f}]")
        object.__setattr__(self, "marginal_probs", tuple(p.tolist()))
        object.__setattr__(self, "target_corr", tuple(tuple(row) for row in c.tolist()))

    @property
    def k(self):
        return len(self.marginal_probs)

    def covariance(self):
        p = np.asarray(self.marginal_probs)
        sd = np.sqrt(p * (1.0 - p))
        return np.asarray(self.target_corr) * np.outer(sd, sd)


def frechet_bounds(p1, p2):
    """Attainable correlation range for two Bernoulli variables."""
    q1, q2 = 1.0 - p1, 1.0 - p2
    norm = math.sqrt(p1 * q1 * p2 * q2)
    lo = (max(0.0, p1 + p2 - 1.0) - p1 * p2) / norm
    hi = (min(p1, p2) - p1 * p2) / norm
    return lo, hi


def joint_cells_2x2(p1, p2, rho):
    """Exact probabilities of (0,0), (0,1), (1,0), (1,1) from marginals and correlation."""
    p11 = p1 * p2 + rho * math.sqrt(p1 * (1 - p1) * p2 * (1 - p2))
    cells = np.array([1.0 - p1 - p2 + p11, p2 - p11, p1 - p11, p11])
    if np.any(cells < -1e-12):
        raise InfeasibleCorrelationError(f"correlation {rho} is infeasible for marginals {p1}, {p2}")
    return np.clip(cells, 0.0, 1.0)


def _bvn_upper(a, b, r):
    """P(Z1 > a, Z2 > b) for standard bivariate normal with correlation r."""
    nd = NormalDist()
    base = (1.0 - nd.cdf(a)) * (1.0 - nd.cdf(b))
    if r == 0.0:
        return base

    # d/dr of the orthant probability is the bivariate density at (a, b)
    def density(t):
        t = np.asarray(t, dtype=float)
        om = 1.0 - t * t
        return np.exp(-(a * a - 2.0 * t * a * b + b * b) / (2.0 * om)) / (2.0 * math.pi * np.sqrt(om))

    val, _ = integrate(density, 0.0, r, tol=1e-13)
    return base + val


def latent_correlation(p1, p2, rho):
    """Gaussian correlation whose thresholded pair has Bernoulli correlation ``rho``."""
    nd = NormalDist()
    a = nd.inv_cdf(1.0 - p1)
    b = nd.inv_cdf(1.0 - p2)
    target = p1 * p2 + rho * math.sqrt(p1 * (1 - p1) * p2 * (1 - p2))
    lo, hi = -0.999999, 0.999999
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _bvn_upper(a, b, mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12:
            break
    r = 0.5 * (lo + hi)
    achieved = (_bvn_upper(a, b, r) - p1 * p2) / math.sqrt(p1 * (1 - p1) * p2 * (1 - p2))
    if abs(achieved - rho) > _LATENT_TOL:
        raise InfeasibleCorrelationError(f"cannot reach correlation {rho} for marginals {p1}, {p2}")
    return r


_LATENT_CACHE = {}


def _copula_factor(design):
    key = (design.marginal_probs, design.target_corr)
    if key not in _LATENT_CACHE:
        k = design.k
        latent = np.eye(k)
        p = design.marginal_probs
        for i, j in itertools.combinations(range(k), 2):
            latent[i, j] = latent[j, i] = latent_correlation(p[i], p[j], design.target_corr[i][j])
        try:
            chol = np.linalg.cholesky(latent)
        except np.linalg.LinAlgError:
            raise InfeasibleCorrelationError("calibrated latent correlation matrix is not positive definite") from None
        thresholds = np.array([NormalDist().inv_cdf(1.0 - pi) for pi in p])
        _LATENT_CACHE[key] = (chol, thresholds)
    return _LATENT_CACHE[key]


def sample_correlated_binary(design: CorrelatedBinaryDesign, n, rng):
    """Draw an n x K 0/1 matrix with the design's marginals and correlations.

    Two columns are drawn from their exact joint distribution; more columns
    use a Gaussian copula whose latent correlations are calibrated pairwise.
    """
    if design.k == 2:
        p1, p2 = design.marginal_probs
        cells = joint_cells_2x2(p1, p2, design.target_corr[0][1])
        idx = rng.choice(4, size=n, p=cells / cells.sum())
        return np.column_stack([(idx >= 2), (idx % 2 == 1)]).astype(float)
    chol, thresholds = _copula_factor(design)
    z = rng.standard_normal((n, design.k)) @ chol.T
    return (z > thresholds).astype(float)


def balanced_design(n, k):
    """Full-factorial 0/1 design, cells repeated in order; remainder rows cycle."""
    cells = np.array(list(itertools.product((0.0, 1.0), repeat=k)))
    if n < len(cells):
        raise InfeasibleDesignError(f"a balanced design with K={k} needs N >= {len(cells)}, got {n}")
    return cells[np.arange(n) % len(cells)]


# ---------------------------------------------------------------------------
# scenarios

def population_b1(beta, sigma2, cov):
    """Standardized coefficient of X1 implied by beta, sigma^2 and Cov(X)."""
    slopes = np.asarray(beta[1:], dtype=float)
    var_y = float(slopes @ cov @ slopes) + sigma2
    return float(slopes[0] * math.sqrt(cov[0, 0]) / math.sqrt(var_y))


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    n: int
    k: int
    beta_true: tuple
    sigma2: float
    design: str = BALANCED
    delta_grid: tuple = STUDY1_DELTAS
    alpha: float = 0.05
    replicates: int = 1000
    seed: int = 0
    marginal_probs: Optional[tuple] = None
    target_corr: Optional[tuple] = None
    b1_true: float = field(default=None)

    def __post_init__(self):
        if self.design not in DESIGNS:
            raise InputError(f"design must be one of {DESIGNS}, got {self.design!r}")
        if self.k < 1:
            raise InputError("k must be at least 1")
        beta = tuple(float(b) for b in self.beta_true)
        if len(beta) != self.k + 1:
            raise InputError(f"beta_true needs {self.k + 1} entries (intercept first), got {len(beta)}")
        if not self.sigma2 > 0:
            raise InputError("sigma2 must be positive")
        if int(self.replicates) < 1:
            raise InputError("replicates must be >= 1")
        if not 0 < self.alpha < 0.5:
            raise InputError("alpha must be in (0, 0.5)")
        grid = tuple(float(d) for d in self.delta_grid)
        if any(not 0.0 < d < 1.0 for d in grid):
            raise InputError("standardized margins in delta_grid must lie in (0, 1)")
        object.__setattr__(self, "beta_true", beta)
        object.__setattr__(self, "delta_grid", grid)
        object.__setattr__(self, "replicates", int(self.replicates))
        object.__setattr__(self, "seed", int(self.seed))
        if self.design == CORRELATED:
            default = DEFAULT_CORRELATED.get(self.k)
            probs = self.marginal_probs if self.marginal_probs is not None else (default and default[0])
            corr = self.target_corr if self.target_corr is not None else (default and default[1])
            if probs is None or corr is None:
                raise InputError(f"correlated design with K={self.k} needs marginal_probs and target_corr")
            cb = CorrelatedBinaryDesign(tuple(probs), tuple(tuple(r) for r in corr))
            if cb.k != self.k:
                raise InputError("correlated design dimension does not match k")
            object.__setattr__(self, "marginal_probs", cb.marginal_probs)
            object.__setattr__(self, "target_corr", cb.target_corr)
        elif self.n < 2 ** self.k:
            raise InfeasibleDesignError(f"a balanced design with K={self.k} needs N >= {2 ** self.k}")
        b1 = population_b1(beta, float(self.sigma2), self.covariance())
        if self.b1_true is not None and abs(self.b1_true - b1) > 1e-6:
            raise InputError(f"b1_true={self.b1_true} disagrees with the value {b1:.8f} implied by beta, sigma2, design")
        object.__setattr__(self, "b1_true", b1)

    def correlated_design(self):
        return CorrelatedBinaryDesign(self.marginal_probs, self.target_corr)

    def covariance(self):
        if self.design == CORRELATED:
            return self.correlated_design().covariance()
        return 0.25 * np.eye(self.k)

    @property
    def imbalance(self):
        """Rows left over after whole replications of the factorial cells."""
        return self.n % (2 ** self.k) if self.design == BALANCED else 0

    @property
    def key(self):
        return zlib.crc32(self.name.encode("utf-8"))

    def to_dict(self):
        d = asdict(self)
        d["beta_true"] = list(self.beta_true)
        d["delta_grid"] = list(self.delta_grid)
        return d


def _rng(spec, replicate_index, attempt=0):
    key = (spec.key, int(replicate_index)) + ((int(attempt),) if attempt else ())
    ss = np.random.SeedSequence(entropy=spec.seed, spawn_key=key)
    return np.random.Generator(np.random.PCG64(ss))


def generate_dataset(spec: ScenarioSpec, replicate_index, attempt=0) -> Dataset:
    """Replicate ``replicate_index`` of a scenario; ``attempt`` > 0 gives a redraw stream."""
    rng = _rng(spec, replicate_index, attempt)
    if spec.design == BALANCED:
        X = balanced_design(spec.n, spec.k)
    else:
        X = sample_correlated_binary(spec.correlated_design(), spec.n, rng)
    beta = np.asarray(spec.beta_true)
    y = beta[0] + X @ beta[1:] + rng.normal(0.0, math.sqrt(spec.sigma2), size=spec.n)
    return Dataset(y, X, [f"x{j + 1}" for j in range(spec.k)])


def _fit_replicate(spec, r):
    """Fit one replicate; redraw if a sampled design came out rank deficient."""
    for attempt in range(100):
        data = generate_dataset(spec, r, attempt)
        try:
            return fit_ols(data)
        except RankDeficientError:
            if spec.design == BALANCED:
                raise
    raise InfeasibleDesignError(f"scenario {spec.name}: could not draw a full-rank design")


# ---------------------------------------------------------------------------
# summaries

@dataclass
class SimSummary:
    study: int
    rows: list
    columns: Sequence[str]

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(self.columns), lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow({c: _fmt(row[c]) for c in self.columns})
        return buf.getvalue()

    def to_json(self):
        payload = {"study": self.study, "rows": self.rows}
        if self.study == 2:
            payload["mean_agreement"] = _nested(self.mean_over_scenarios("agreement_rate"))
            payload["mean_strong_disagreement"] = _nested(self.mean_over_scenarios("strong_disagreement_rate"))
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def rate(self, scenario, delta):
        for row in self.rows:
            if row["scenario"] == scenario and math.isclose(row["delta"], delta, abs_tol=1e-12):
                return row["rejection_rate"]
        raise KeyError((scenario, delta))

    def mean_over_scenarios(self, column):
        """Average a study-2 column over scenarios, keyed by (delta, threshold)."""
        acc = {}
        for row in self.rows:
            acc.setdefault((row["delta"], row["threshold"]), []).append(row[column])
        return {key: float(np.mean(vals)) for key, vals in sorted(acc.items())}


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def _nested(table):
    return [{"delta": d, "threshold": t, "value": v} for (d, t), v in table.items()]


STUDY1_COLUMNS = ("scenario", "design", "n", "k", "sigma2", "b1_true", "imbalance", "delta",
                  "replicates", "rejections", "rejection_rate", "mc_se")
STUDY2_COLUMNS = ("scenario", "design", "n", "k", "sigma2", "b1_true", "delta", "threshold",
                  "replicates", "agreement_rate", "strong_disagreement_rate",
                  "cet_positive", "cet_negative", "cet_inconclusive",
                  "bf_positive", "bf_negative", "bf_inconclusive")


def _chunks(n, workers):
    size = max(1, math.ceil(n / (4 * workers)))
    return [(lo, min(n, lo + size)) for lo in range(0, n, size)]


def _run_chunks(fn, specs, workers):
    """Evaluate ``fn(spec, lo, hi)`` over replicate chunks; sum per spec in order."""
    jobs = [(i, spec, lo, hi) for i, spec in enumerate(specs) for lo, hi in _chunks(spec.replicates, workers)]
    totals = [None] * len(specs)
    if workers <= 1:
        results = [fn(spec, lo, hi) for _, spec, lo, hi in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(fn, spec, lo, hi) for _, spec, lo, hi in jobs]
            results = [f.result() for f in futures]
    for (i, _, _, _), counts in zip(jobs, results):
        totals[i] = counts if totals[i] is None else totals[i] + counts
    return totals


def _check_unique(specs):
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise InputError("scenario names must be unique")


def _study1_chunk(spec, lo, hi):
    counts = np.zeros(len(spec.delta_grid), dtype=np.int64)
    for r in range(lo, hi):
        fit = _fit_replicate(spec, r)
        for i, d in enumerate(spec.delta_grid):
            if equiv_std_beta(fit, 1, d).p_value < spec.alpha:
                counts[i] += 1
    return counts


def run_study1(specs, workers=1) -> SimSummary:
    """Rejection rate of the standardized-coefficient equivalence test for X1."""
    specs = list(specs)
    _check_unique(specs)
    totals = _run_chunks(_study1_chunk, specs, workers)
    rows = []
    for spec, counts in zip(specs, totals):
        for d, c in zip(spec.delta_grid, counts):
            rate = int(c) / spec.replicates
            rows.append({
                "scenario": spec.name, "design": spec.design, "n": spec.n, "k": spec.k,
                "sigma2": spec.sigma2, "b1_true": spec.b1_true, "imbalance": spec.imbalance,
                "delta": d, "replicates": spec.replicates, "rejections": int(c),
                "rejection_rate": rate, "mc_se": math.sqrt(rate * (1.0 - rate) / spec.replicates),
            })
    return SimSummary(1, rows, STUDY1_COLUMNS)


_CET_ORDER = (Decision.POSITIVE, Decision.NEGATIVE, Decision.INCONCLUSIVE)
_BF_ORDER = (BfDecision.POSITIVE, BfDecision.NEGATIVE, BfDecision.INCONCLUSIVE)


def compare_decisions(cet_outcome, bf_outcome):
    """(agree, strongly disagree) for one CET outcome and one BF outcome."""
    c = Decision(cet_outcome).value
    b = BfDecision(bf_outcome).value
    strong = {c, b} == {"positive", "negative"}
    return c == b, strong


def _study2_chunk(spec, lo, hi, deltas, thresholds, rscale):
    nd, nt = len(deltas), len(thresholds)
    # [delta, threshold, (agree, strong)], [delta, cet outcome], [threshold, bf outcome]
    pair = np.zeros((nd, nt, 2), dtype=np.int64)
    cet_counts = np.zeros((nd, 3), dtype=np.int64)
    bf_counts = np.zeros((nt, 3), dtype=np.int64)
    for r in range(lo, hi):
        fit = _fit_replicate(spec, r)
        p1 = nhst_t(fit, 1).p_value
        cets = []
        for d in deltas:
            p2 = None if p1 < spec.alpha else equiv_std_beta(fit, 1, d).p_value
            cets.append(cet_decision(p1, p2, spec.alpha))
        bf10 = jzs_bf_inclusion(fit, 1, rscale).bf10
        bfs = [bf_decision(bf10, t) for t in thresholds]
        for i, c in enumerate(cets):
            cet_counts[i, _CET_ORDER.index(c)] += 1
            for j, b in enumerate(bfs):
                agree, strong = compare_decisions(c, b)
                pair[i, j, 0] += agree
                pair[i, j, 1] += strong
        for j, b in enumerate(bfs):
            bf_counts[j, _BF_ORDER.index(b)] += 1
    return _Study2Counts(pair, cet_counts, bf_counts)


@dataclass
class _Study2Counts:
    pair: np.ndarray
    cet: np.ndarray
    bf: np.ndarray

    def __add__(self, other):
        return _Study2Counts(self.pair + other.pair, self.cet + other.cet, self.bf + other.bf)


class _Study2Task:
    # picklable partial for the process pool
    def __init__(self, deltas, thresholds, rscale):
        self.deltas, self.thresholds, self.rscale = deltas, thresholds, rscale

    def __call__(self, spec, lo, hi):
        return _study2_chunk(spec, lo, hi, self.deltas, self.thresholds, self.rscale)


def run_study2(specs, deltas=STUDY2_DELTAS, thresholds=STUDY2_THRESHOLDS, workers=1,
               rscale=RSCALE_MEDIUM) -> SimSummary:
    """Agreement between CET and JZS Bayes factor decisions on the same data."""
    specs = list(specs)
    _check_unique(specs)
    deltas = tuple(float(d) for d in deltas)
    thresholds = tuple(float(t) for t in thresholds)
    for t in thresholds:
        bf_decision(1.0, t)
    totals = _run_chunks(_Study2Task(deltas, thresholds, rscale), specs, workers)
    rows = []
    for spec, counts in zip(specs, totals):
        reps = spec.replicates
        for i, d in enumerate(deltas):
            for j, t in enumerate(thresholds):
                rows.append({
                    "scenario": spec.name, "design": spec.design, "n": spec.n, "k": spec.k,
                    "sigma2": spec.sigma2, "b1_true": spec.b1_true, "delta": d, "threshold": t,
                    "replicates": reps,
                    "agreement_rate": int(counts.pair[i, j, 0]) / reps,
                    "strong_disagreement_rate": int(counts.pair[i, j, 1]) / reps,
                    "cet_positive": int(counts.cet[i, 0]) / reps,
                    "cet_negative": int(counts.cet[i, 1]) / reps,
                    "cet_inconclusive": int(counts.cet[i, 2]) / reps,
                    "bf_positive": int(counts.bf[j, 0]) / reps,
                    "bf_negative": int(counts.bf[j, 1]) / reps,
                    "bf_inconclusive": int(counts.bf[j, 2]) / reps,
                })
    return SimSummary(2, rows, STUDY2_COLUMNS)


# ---------------------------------------------------------------------------
# scenario files

_SPEC_FIELDS = {f for f in ScenarioSpec.__dataclass_fields__}


def specs_from_document(doc, replicates=None, seed=None):
    """Build specs from a parsed scenario document.

    The document holds ``scenarios`` (a list of ScenarioSpec field mappings)
    and optional ``defaults`` merged into each entry. ``replicates`` and
    ``seed`` override whatever the document says.
    """
    if not isinstance(doc, dict) or "scenarios" not in doc:
        raise InputError("scenario document must be an object with a 'scenarios' list")
    defaults = dict(doc.get("defaults", {}))
    specs = []
    for i, entry in enumerate(doc["scenarios"]):
        merged = {**defaults, **entry}
        unknown = set(merged) - _SPEC_FIELDS
        if unknown:
            raise InputError(f"scenario {i}: unknown fields {sorted(unknown)}")
        if replicates is not None:
            merged["replicates"] = replicates
        if seed is not None:
            merged["seed"] = seed
        if "seed" not in merged:
            raise InputError("a seed is required (no hidden entropy)")
        merged.setdefault("name", f"scenario{i}")
        specs.append(ScenarioSpec(**merged))
    return specs


def load_scenarios(path, replicates=None, seed=None):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return doc.get("study"), specs_from_document(doc, replicates, seed)


# ---------------------------------------------------------------------------
# study grids

STUDY1_SIZES = (180, 540, 1000, 3500)
STUDY1_SIGMA2 = (0.05, 0.15, 0.50)
STUDY1_BETAS = {
    BALANCED: {2: (-0.20, 0.10, 0.20), 4: (0.20, 0.10, 0.14, -0.10, -0.10)},
    CORRELATED: {2: (-0.20, 0.10, 0.19), 4: (0.20, 0.10, 0.14, -0.12, -0.14)},
}
STUDY2_SIZES = (20, 33, 55, 90, 149, 246, 406, 671, 1109, 1832, 3027, 5000)
STUDY2_CONFIGS = (
    ((0.20, 0.10, 0.14, -0.10, -0.10), 0.50),
    ((0.20, 0.10, 0.14, -0.10, -0.10), 1.00),
    ((0.20, 0.00, 0.14, -0.10, -0.10), 1.00),
)


def study1_scenarios(design=BALANCED, replicates=10_000, seed=0, delta_grid=STUDY1_DELTAS, sizes=STUDY1_SIZES):
    """The 32 study-1 configurations: 24 with nonzero beta_1 plus 8 with beta_1 = 0."""
    specs = []
    for k in (2, 4):
        beta = STUDY1_BETAS[design][k]
        null_beta = (beta[0], 0.0) + beta[2:]
        for n in sizes:
            for s2 in STUDY1_SIGMA2:
                specs.append(ScenarioSpec(f"s1-{design}-k{k}-n{n}-s{s2}", n, k, beta, s2, design,
                                          delta_grid, replicates=replicates, seed=seed))
            specs.append(ScenarioSpec(f"s1-{design}-k{k}-n{n}-s0.5-null", n, k, null_beta, 0.5, design,
                                      delta_grid, replicates=replicates, seed=seed))
    return specs


def study2_scenarios(replicates=150, seed=0, sizes=STUDY2_SIZES):
    """The study-2 grid: each sample size crossed with the three (beta, sigma^2) settings."""
    specs = []
    for n in sizes:
        for j, (beta, s2) in enumerate(STUDY2_CONFIGS):
            specs.append(ScenarioSpec(f"s2-n{n}-c{j}", n, 4, beta, s2, BALANCED, STUDY2_DELTAS,
                                      replicates=replicates, seed=seed))
    return specs
