"""Seeded Monte Carlo driver and verification suites.

Replicas are keyed by index, so any split of the index range across workers
gives the same per-replica records. Records are merged in index order and
every statistic is computed from the merged arrays, which makes summaries
independent of the number of workers.
"""

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field as dc_field

import numpy as np
from scipy import stats

from gueflux import gue
from gueflux.chebyshev import kernel_closed
from gueflux.field import batch_field_coeffs, counting_coeffs, field_values, sobolev_distance
from gueflux.moments import cheb_power_sums, linear_statistic_mean
from gueflux.semicircle import build_partition

SCHEMA_VERSION = 1

DEFAULT_BANDS = {
    "coeff_var_ratio": [0.85, 1.15],
    "coeff_corr_max": 0.1,
    "ks_level": 0.01,
    "johansson_rel": 0.10,
    "kernel_ratio": [0.8, 1.2],
    "rigidity_slope": [-2.2, -1.8],
}


@dataclass
class ExperimentConfig:
    n: int = 512
    replicas: int = 2000
    kmax: int = 7
    sampler: str = "tridiag"
    seed: int = 0
    alpha: float = 4.0
    grid: tuple = (-0.5, 0.0, 0.5)
    min_pair_gap: float = 0.2
    degrees: tuple = (1, 2, 3)
    ladder: tuple = ()
    ladder_replicas: int = 2000
    threads: int = 1
    bands: dict = dc_field(default_factory=lambda: dict(DEFAULT_BANDS))

    def __post_init__(self):
        if self.replicas < 2:
            raise ValueError("need at least 2 replicas")
        if self.kmax < 0:
            raise ValueError("kmax must be nonnegative")
        if self.sampler not in gue.SAMPLERS:
            raise ValueError(f"unknown sampler {self.sampler!r}")
        g = np.asarray(self.grid, dtype=float)
        if g.size and (np.any(np.abs(g) >= 1) or np.any(np.diff(g) <= 0)):
            raise ValueError("grid must be strictly increasing inside (-1, 1)")
        self.grid = tuple(float(v) for v in g)
        self.ladder = tuple(int(v) for v in self.ladder)
        self.degrees = tuple(int(v) for v in self.degrees)
        self.bands = {**DEFAULT_BANDS, **(self.bands or {})}

    @classmethod
    def from_dict(cls, d):
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    def to_dict(self):
        return asdict(self)


def grid_pairs(grid, min_gap):
    return [(x, y) for i, x in enumerate(grid) for y in grid[i + 1:] if abs(x - y) >= min_gap]


def profile_indices(n):
    """1-based eigenvalue indices tracked by the variance profile: bulk and edge."""
    return sorted({max(1, n // 2), max(1, math.isqrt(n))})


@dataclass
class ReplicaBatch:
    """Per-replica records, one row per replica index."""

    index: np.ndarray
    coeffs: np.ndarray  # (M, K+1) s_k(X_N)
    linstats: np.ndarray  # (M, len(degrees)) sum_j T_m(lambda_j)
    grid_values: np.ndarray  # (M, len(grid)) X_N at grid points
    deviations: np.ndarray  # (M, len(profile)) lambda_j - gamma_j

    @classmethod
    def merge(cls, batches):
        batches = list(batches)
        index = np.concatenate([b.index for b in batches])
        order = np.argsort(index, kind="stable")
        if np.any(np.diff(index[order]) == 0):
            raise ValueError("duplicate replica indices in merge")

        def cat(name):
            return np.concatenate([getattr(b, name) for b in batches])[order]

        return cls(index[order], cat("coeffs"), cat("linstats"), cat("grid_values"), cat("deviations"))

    def subset(self, mask_or_idx):
        return ReplicaBatch(*(a[mask_or_idx] for a in (self.index, self.coeffs, self.linstats,
                                                         self.grid_values, self.deviations)))

    def __len__(self):
        return self.index.size


def simulate_batch(cfg, start, stop):
    n = cfg.n
    part = build_partition(n)
    idx = np.arange(start, stop)
    lam = gue.sample_many(n, cfg.seed, stop - start, cfg.sampler, start=start)
    coeffs = batch_field_coeffs(lam, part, cfg.kmax)
    linstats = np.stack([cheb_power_sums(lam, m) for m in cfg.degrees], axis=1) if cfg.degrees else np.empty((len(idx), 0))
    vals = field_values(lam, part)
    gidx = part.cell_index(np.asarray(cfg.grid)) if cfg.grid else np.empty(0, dtype=int)
    prof = np.asarray(profile_indices(n)) - 1
    dev = lam[:, prof] - part.gamma[prof + 1]
    return ReplicaBatch(idx, coeffs, linstats, vals[:, gidx], dev)


def _chunks(m, parts):
    edges = np.linspace(0, m, parts + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def simulate(cfg):
    workers = max(1, int(cfg.threads))
    if workers == 1:
        return simulate_batch(cfg, 0, cfg.replicas)
    chunks = _chunks(cfg.replicas, workers * 4)
    with ProcessPoolExecutor(max_workers=workers) as ex:
        parts = list(ex.map(simulate_batch, [cfg] * len(chunks), *zip(*chunks)))
    return ReplicaBatch.merge(parts)


def cov_with_se(a, b):
    """Sample covariance (ddof=1) and the standard error of the mean product."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    m = a.size
    ca, cb = a - a.mean(), b - b.mean()
    prod = ca * cb
    return float(prod.sum() / (m - 1)), float(prod.std(ddof=1) / math.sqrt(m))


def summarize(batch, cfg, runtime=None):
    m = len(batch)
    k = np.arange(cfg.kmax + 1)
    ps = np.pi * batch.coeffs
    mean = ps.mean(axis=0)
    var = ps.var(axis=0, ddof=1)
    cov = np.cov(ps, rowvar=False, ddof=1).reshape(cfg.kmax + 1, cfg.kmax + 1)
    sd = np.sqrt(np.diag(cov))
    corr = cov / np.outer(sd, sd)
    z = ps * np.sqrt(k + 1)  # theoretical standardization: mean 0, variance 1
    ks = [stats.kstest(z[:, i], "norm") for i in range(cfg.kmax + 1)]

    lin = []
    for col, deg in enumerate(cfg.degrees):
        centered = batch.linstats[:, col] - linear_statistic_mean(deg, cfg.n)
        second = float(np.mean(centered**2))
        lin.append({
            "degree": deg,
            "exact_mean": linear_statistic_mean(deg, cfg.n),
            "empirical_var": second,
            "sample_var": float(np.var(batch.linstats[:, col], ddof=1)),
            "se": float(np.std(centered**2, ddof=1) / math.sqrt(m)),
            "theory_var": deg / 4.0,
        })

    kern = []
    gi = {x: i for i, x in enumerate(cfg.grid)}
    for x, y in grid_pairs(cfg.grid, cfg.min_pair_gap):
        c, se = cov_with_se(np.pi * batch.grid_values[:, gi[x]], np.pi * batch.grid_values[:, gi[y]])
        th = kernel_closed(x, y)
        kern.append({"x": x, "y": y, "empirical_cov": c, "se": se, "theory_cov": th, "ratio": c / th})

    prof = [{"j": j, "var": float(np.var(batch.deviations[:, i], ddof=1)),
             "mean": float(np.mean(batch.deviations[:, i]))}
            for i, j in enumerate(profile_indices(cfg.n))]

    return {
        "count": m,
        "coeff_mean": mean.tolist(),
        "coeff_var": var.tolist(),
        "coeff_var_ratio": (var * (k + 1)).tolist(),
        "coeff_var_se": (var * math.sqrt(2.0 / (m - 1))).tolist(),
        "coeff_cov": cov.tolist(),
        "coeff_corr": corr.tolist(),
        "ks_statistic": [float(r.statistic) for r in ks],
        "ks_pvalue": [float(r.pvalue) for r in ks],
        "linear_statistics": lin,
        "kernel_table": kern,
        "variance_profile": prof,
        "runtime_seconds": runtime,
    }


@dataclass
class EnsembleSummary:
    config: dict
    stats: dict
    batch: ReplicaBatch

    def to_json(self, suites=None):
        payload = {
            "schema_version": SCHEMA_VERSION,
            "master_seed": self.config["seed"],
            "config": self.config,
            "stats": {k: v for k, v in self.stats.items() if k != "runtime_seconds"},
        }
        if suites is not None:
            payload["suites"] = suites
            payload["all_pass"] = all(s["pass"] for s in suites.values())
        return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"


def run_ensemble(cfg):
    t0 = time.perf_counter()
    batch = simulate(cfg)
    return EnsembleSummary(cfg.to_dict(), summarize(batch, cfg, time.perf_counter() - t0), batch)


def johansson_check(cfg, m, summary=None):
    """Variance of sum_j T_m(lambda_j) centered by its exact finite-n mean."""
    if m < 1:
        raise ValueError("degree must be >= 1")
    if summary is None or m not in cfg.degrees:
        cfg = ExperimentConfig.from_dict({**cfg.to_dict(), "degrees": (m,), "grid": ()})
        summary = run_ensemble(cfg)
    rec = next(r for r in summary.stats["linear_statistics"] if r["degree"] == m)
    return {"empirical_var": rec["empirical_var"], "theory_var": m / 4.0, "se": rec["se"]}


def trace_variance(n, seed, replicas, sampler="tridiag"):
    """Empirical variance of sum_j lambda_j (exactly 1/4 in law) and its standard error."""
    lam = gue.sample_many(n, seed, replicas, sampler)
    s = lam.sum(axis=1)
    sq = s**2  # exact mean is 0
    return float(sq.mean()), float(sq.std(ddof=1) / math.sqrt(replicas))


def rigidity_profile(cfg):
    """Bulk and edge eigenvalue variance across cfg.ladder, and the bulk log-log slope."""
    ladder = cfg.ladder
    if len(ladder) < 4:
        raise ValueError("rigidity profile needs at least 4 sizes")
    rows = []
    for n in ladder:
        part = build_partition(n)
        jb, je = n // 2, max(1, math.isqrt(n))
        sel = np.array([jb - 1, je - 1])
        vals = np.stack([gue.sample_selected(n, cfg.seed, sel, replica=r) for r in range(cfg.ladder_replicas)])
        dev = vals - part.gamma[sel + 1]
        rows.append({
            "n": n,
            "bulk_index": jb,
            "bulk_var": float(np.var(dev[:, 0], ddof=1)),
            "edge_index": je,
            "edge_var": float(np.var(dev[:, 1], ddof=1)),
        })
    logn = np.log([r["n"] for r in rows])
    logv = np.log([r["bulk_var"] for r in rows])
    slope, intercept = np.polyfit(logn, logv, 1)
    c0 = rows[0]["bulk_var"] * rows[0]["n"] ** 2 / math.log(rows[0]["n"])
    return {"rows": rows, "slope": float(slope), "intercept": float(intercept), "log_bound_constant": c0}


def kernel_comparison(cfg, pairs=None):
    """Cov(pi X_N(x), pi X_N(y)) against kernel_closed(x, y) on grid pairs.

    Only the eigenvalues of the cells containing the grid points are needed,
    so they are computed by bisection on the tridiagonal model.
    """
    if cfg.sampler != "tridiag":
        raise ValueError("kernel_comparison uses the tridiagonal sampler")
    pairs = grid_pairs(cfg.grid, cfg.min_pair_gap) if pairs is None else [tuple(p) for p in pairs]
    if any(abs(x - y) < cfg.min_pair_gap for x, y in pairs):
        raise ValueError("grid pairs must be at least min_pair_gap apart")
    part = build_partition(cfg.n)
    pts = sorted({v for p in pairs for v in p})
    cells = part.cell_index(np.asarray(pts))
    lam = np.stack([gue.sample_selected(cfg.n, cfg.seed, cells, replica=r) for r in range(cfg.replicas)])
    vals = np.pi * cfg.n * part.cell_density[cells] * (lam - part.cell_mean[cells])
    col = {x: i for i, x in enumerate(pts)}
    out = []
    for x, y in pairs:
        c, se = cov_with_se(vals[:, col[x]], vals[:, col[y]])
        th = kernel_closed(x, y)
        out.append({"x": x, "y": y, "empirical_cov": c, "se": se, "theory_cov": th, "ratio": c / th})
    return out


def proximity_distances(n, seed, replicas, kmax=16, alpha=-4.0, centering="control_variate", sampler="tridiag"):
    """Per-replica Sobolev distance between pi s(X_N) and -pi s(counting field).

    The fluctuation field moves opposite to the centered count: pushing
    lambda_j to the right raises X_N on cell j but lowers #{lambda < x} there,
    so X_N is close to minus the counting field. The counting field is centered
    by its ensemble mean (see ``counting_center_coeffs``).
    """
    lam = gue.sample_many(n, seed, replicas, sampler)
    sx = np.pi * batch_field_coeffs(lam, build_partition(n), kmax)
    sc = np.pi * counting_coeffs(lam, kmax, method=centering)
    return sobolev_distance(sx, -sc, alpha)


def _in(v, band):
    return band[0] <= v <= band[1]


def evaluate_suites(summary, cfg, rigidity=None, kernel_rows=None):
    """Pass/fail for each statistical suite, using the bands in ``cfg``."""
    s = summary.stats
    b = cfg.bands
    k1 = cfg.kmax + 1
    suites = {}
    ratios = s["coeff_var_ratio"]
    suites["coefficient_variance"] = {
        "pass": all(_in(r, b["coeff_var_ratio"]) for r in ratios),
        "values": ratios, "band": b["coeff_var_ratio"]}
    corr = np.asarray(s["coeff_corr"])
    off = np.abs(corr[~np.eye(k1, dtype=bool)]) if k1 > 1 else np.zeros(0)
    suites["coefficient_correlation"] = {
        "pass": bool(np.all(off < b["coeff_corr_max"])),
        "max_abs": float(off.max()) if off.size else 0.0, "limit": b["coeff_corr_max"]}
    level = b["ks_level"] / k1  # Bonferroni
    suites["coefficient_normality"] = {
        "pass": all(p > level for p in s["ks_pvalue"]),
        "pvalues": s["ks_pvalue"], "level": level}
    for rec in s["linear_statistics"]:
        rel = abs(rec["empirical_var"] / rec["theory_var"] - 1.0)
        suites[f"johansson_T{rec['degree']}"] = {
            "pass": rel <= b["johansson_rel"], "relative_error": rel,
            "empirical_var": rec["empirical_var"], "theory_var": rec["theory_var"]}
    rows = kernel_rows if kernel_rows is not None else s["kernel_table"]
    if rows:
        suites["kernel_comparison"] = {
            "pass": all(_in(r["ratio"], b["kernel_ratio"]) for r in rows),
            "ratios": [r["ratio"] for r in rows], "band": b["kernel_ratio"]}
    if rigidity is not None:
        suites["rigidity_slope"] = {
            "pass": _in(rigidity["slope"], b["rigidity_slope"]),
            "slope": rigidity["slope"], "band": b["rigidity_slope"]}
    return suites


def verify(cfg):
    """Run every suite the config enables; returns (summary, suites)."""
    summary = run_ensemble(cfg)
    rig = rigidity_profile(cfg) if cfg.ladder else None
    if rig is not None:
        summary.stats["rigidity"] = rig
    return summary, evaluate_suites(summary, cfg, rigidity=rig)
