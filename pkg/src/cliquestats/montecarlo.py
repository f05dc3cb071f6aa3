"""Seeded Monte Carlo for the standardized count vectors, empirical
covariance, degenerate-safe multivariate normal sampling, and discrepancy
estimation against the matched normal.

Replicate r of a run draws from the counter-based stream keyed by
(master_seed, replicate_offset + r), so half-runs merge into a full run and
reruns are bit-identical.
"""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from math import comb

import numpy as np

from .bounds import BoundReport
from . import moments
from .graphs import Graph, clique_count, gnp_generator
from .morse import critical_counts_formula

KINDS = ("critical", "link", "clique")


@dataclass(frozen=True)
class MCConfig:
    kind: str
    n: int
    p: float
    d: int
    replicates: int
    master_seed: int
    t: tuple = ()
    standardization: str = "analytic"
    replicate_offset: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError("kind must be one of %s" % (KINDS,))
        if self.replicates < 2:
            raise ValueError("need at least 2 replicates")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0,1]")
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.kind == "link":
            if not self.t:
                raise ValueError("kind=link needs a nonempty fixed subset t")
            if len(set(self.t)) != len(self.t) or not all(1 <= v <= self.n for v in self.t):
                raise ValueError("t must be distinct vertices in 1..n")
            if self.d > self.n - len(self.t):
                raise ValueError("d exceeds the room left by t")
        elif self.d + 1 > self.n:
            raise ValueError("need d+1 <= n")
        if self.standardization not in ("analytic", "empirical"):
            raise ValueError("standardization must be analytic or empirical")


def analytic_mean_sd(cfg: MCConfig):
    """Per-component mean and standard deviation from the closed forms."""
    if cfg.kind == "clique":
        mean = [moments.clique_mean(cfg.n, i + 1, cfg.p) for i in range(1, cfg.d + 1)]
        var = [moments.clique_cov(cfg.n, i, i, cfg.p) for i in range(1, cfg.d + 1)]
    elif cfg.kind == "link":
        ts = len(cfg.t)
        mean = [moments.link_mean(cfg.n, ts, i, cfg.p) for i in range(cfg.d)]
        var = [moments.link_cov(cfg.n, ts, i, i, cfg.p) for i in range(cfg.d)]
    else:
        mean = [moments.crit_mean(cfg.n, k, cfg.p) for k in range(1, cfg.d + 1)]
        var = [moments.crit_variance(cfg.n, k, cfg.p) for k in range(1, cfg.d + 1)]
    sd = [math.sqrt(v) for v in var]
    if any(s == 0.0 for s in sd):
        raise ValueError("a component has zero analytic variance; cannot standardize")
    return np.array(mean), np.array(sd)


@lru_cache(maxsize=1 << 16)
def _small_graph_counts(kind: str, n: int, mask: int, d: int, t: tuple) -> tuple:
    g = Graph(n, mask)
    if kind == "critical":
        return critical_counts_formula(g, d).counts
    return tuple(clique_count(g, size) for size in range(2, d + 2))


def _pair_bits_to_mask(bits: np.ndarray) -> int:
    mask = 0
    for b in np.flatnonzero(bits):
        mask |= 1 << int(b)
    return mask


def _raw_clique_counts(cfg: MCConfig, rng) -> list:
    n = cfg.n
    u = rng.random(comb(n, 2))
    bits = u < cfg.p
    if n <= 6:
        return list(_small_graph_counts("clique", n, _pair_bits_to_mask(bits), cfg.d, ()))
    A = np.zeros((n, n), dtype=np.float32)
    iu = np.triu_indices(n, 1)
    A[iu] = bits
    A += A.T
    out = [float(bits.sum())]
    if cfg.d >= 2:
        out.append(float(np.einsum("ij,ij->", A @ A, A)) / 6.0)
    if cfg.d >= 3:
        g = Graph(n, _pair_bits_to_mask(bits))
        out.extend(clique_count(g, size) for size in range(4, cfg.d + 2))
    return out


def _raw_critical_counts(cfg: MCConfig, rng) -> list:
    n = cfg.n
    u = rng.random(comb(n, 2))
    mask = _pair_bits_to_mask(u < cfg.p)
    if n <= 6:
        return list(_small_graph_counts("critical", n, mask, cfg.d, ()))
    return list(critical_counts_formula(Graph(n, mask), cfg.d).counts)


def _raw_link_counts(cfg: MCConfig, rng) -> list:
    # Vertex u outside t is a common neighbour iff all |t| cross edges are
    # present, an event of probability p^|t| independent across u; the count
    # formula never reads any other edge outside the common neighbourhood,
    # so sampling the collapsed bundles is distribution-identical to
    # evaluating the formula on a full G(n,p) draw.
    ts = len(cfg.t)
    m = int(np.count_nonzero(rng.random(cfg.n - ts) < cfg.p ** ts))
    out = [m]
    if cfg.d == 1:
        return out
    if m == 0:
        return out + [0] * (cfg.d - 1)
    u = rng.random(comb(m, 2))
    inner = Graph(m, _pair_bits_to_mask(u < cfg.p))
    out.extend(clique_count(inner, size) for size in range(2, cfg.d + 1))
    return out


_RAW = {"clique": _raw_clique_counts, "critical": _raw_critical_counts,
        "link": _raw_link_counts}


def _raw_chunk(cfg: MCConfig) -> np.ndarray:
    raw = _RAW[cfg.kind]
    rows = np.empty((cfg.replicates, cfg.d))
    for r in range(cfg.replicates):
        rng = gnp_generator(cfg.master_seed, cfg.replicate_offset + r)
        rows[r] = raw(cfg, rng)
    return rows


def simulate_raw(cfg: MCConfig, threads: int = 1) -> np.ndarray:
    """Raw count vectors, one row per replicate.

    Replicates are keyed by (master_seed, offset + index), so splitting the
    range across workers and stacking in index order reproduces the serial
    result bit for bit.
    """
    if threads <= 1 or cfg.replicates < 4 * threads:
        return _raw_chunk(cfg)
    edges = np.linspace(0, cfg.replicates, threads + 1, dtype=int)
    chunks = [replace(cfg, replicates=int(hi - lo),
                      replicate_offset=cfg.replicate_offset + int(lo))
              for lo, hi in zip(edges, edges[1:]) if hi > lo]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(_raw_chunk, chunks))
    return np.vstack(parts)


def simulate_vectors(cfg: MCConfig) -> np.ndarray:
    """Standardized count vectors (replicates x d)."""
    rows = simulate_raw(cfg)
    if cfg.standardization == "analytic":
        mean, sd = analytic_mean_sd(cfg)
    else:
        mean = rows.mean(axis=0)
        sd = rows.std(axis=0, ddof=1)
        if np.any(sd == 0.0):
            raise ValueError("degenerate sample; empirical standardization impossible")
    return (rows - mean) / sd


def empirical_cov(samples: np.ndarray) -> np.ndarray:
    """Unbiased sample covariance, exactly symmetric."""
    samples = np.asarray(samples, dtype=float)
    if samples.ndim == 1:
        samples = samples[:, None]
    if samples.shape[0] < 2:
        raise ValueError("need at least 2 rows")
    c = np.atleast_2d(np.cov(samples, rowvar=False, ddof=1))
    return (c + c.T) / 2.0


def psd_sqrt(cov: np.ndarray, tol_scale: float = 1e-9) -> np.ndarray:
    """Symmetric PSD square root by eigendecomposition.

    Eigenvalues in [-tol_scale*trace, 0) clamp to 0, so rank-deficient
    covariances are supported; anything more negative is an error.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValueError("covariance must be square")
    if not np.allclose(cov, cov.T, atol=1e-12 * max(1.0, float(np.abs(cov).max()))):
        raise ValueError("covariance must be symmetric")
    w, v = np.linalg.eigh((cov + cov.T) / 2.0)
    tol = tol_scale * max(float(np.trace(cov)), 0.0)
    if np.any(w < -tol):
        raise ValueError("covariance is not PSD within tolerance "
                         "(min eigenvalue %g, tol %g)" % (float(w.min()), -tol))
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.T


def mvn_samples(cov: np.ndarray, replicates: int, seed: int) -> np.ndarray:
    """Rows are S @ Z with S the PSD square root of cov; degenerate cov allowed."""
    root = psd_sqrt(cov)
    rng = gnp_generator(seed, 0)
    z = rng.standard_normal((replicates, root.shape[0]))
    return z @ root.T


# ---------------------------------------------------------------------------
# discrepancy estimation


@dataclass
class DiscrepancyReport:
    estimate: float
    stderr: float
    family: str
    bound_used: BoundReport | None = None

    def to_json(self) -> str:
        out = {"estimate": self.estimate, "stderr": self.stderr, "family": self.family}
        if self.bound_used is not None:
            out["bound_used"] = json.loads(self.bound_used.to_json())
        return json.dumps(out, indent=2)


def smooth_family(d: int) -> list:
    """Logistic ridge functions h(x) = g(<a,x> + c).

    Coefficient grids keep the infinity norm of a at 1, so all third partials
    are bounded by max|g'''| = 1/8 <= 1.
    """
    a_list = []
    for i in range(d):
        e = np.zeros(d)
        e[i] = 1.0
        a_list += [e, -e]
    for i in range(d):
        for j in range(i + 1, d):
            e = np.zeros(d)
            e[i] = e[j] = 0.5
            a_list += [e, -e]
    return [(a, c) for a in a_list for c in (-1.0, 0.0, 1.0)]


def _logistic(u: np.ndarray) -> np.ndarray:
    out = np.empty_like(u)
    pos = u >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-u[pos]))
    eu = np.exp(u[~pos])
    out[~pos] = eu / (1.0 + eu)
    return out


def smooth_discrepancy(w_samples, z_samples, family=None,
                       bound: BoundReport | None = None) -> DiscrepancyReport:
    """Max over the test-function family of |mean h(W) - mean h(Z)| with the
    pooled standard error of the argmax function."""
    w = np.asarray(w_samples, dtype=float)
    z = np.asarray(z_samples, dtype=float)
    if w.ndim == 1:
        w = w[:, None]
    if z.ndim == 1:
        z = z[:, None]
    if w.shape[1] != z.shape[1]:
        raise ValueError("sample sets have different dimensions")
    if family is None:
        family = smooth_family(w.shape[1])
    if not family:
        raise ValueError("empty test-function family")
    best = (-1.0, 0.0)
    for a, c in family:
        hw = _logistic(w @ a + c)
        hz = _logistic(z @ a + c)
        est = abs(float(hw.mean() - hz.mean()))
        if est > best[0]:
            se = math.sqrt(float(hw.var(ddof=1)) / len(hw)
                           + float(hz.var(ddof=1)) / len(hz))
            best = (est, se)
    return DiscrepancyReport(best[0], best[1],
                             "logistic ridges, %d functions" % len(family), bound)


@dataclass
class ConvexFamily:
    """Axis-aligned rectangles on a quantile grid plus seeded halfspaces."""

    grid: list  # per-dimension sorted cut points
    halfspaces: list  # (direction, threshold) pairs

    @property
    def description(self) -> str:
        rects = 1
        for g in self.grid:
            m = len(g) + 2
            rects *= m * (m - 1) // 2
        return "%d rectangles + %d halfspaces" % (rects, len(self.halfspaces))


def convex_family(w: np.ndarray, z: np.ndarray, seed: int = 0,
                  quantiles: int = 9, n_halfspaces: int = 16) -> ConvexFamily:
    pooled = np.vstack([w, z])
    qs = np.linspace(0.0, 1.0, quantiles + 2)[1:-1]
    grid = [np.quantile(pooled[:, i], qs) for i in range(pooled.shape[1])]
    rng = gnp_generator(seed, 2 ** 32)
    halfspaces = []
    for _ in range(n_halfspaces):
        u = rng.standard_normal(pooled.shape[1])
        u /= np.linalg.norm(u)
        proj = pooled @ u
        for c in np.quantile(proj, qs):
            halfspaces.append((u, float(c)))
    return ConvexFamily([np.asarray(g) for g in grid], halfspaces)


def _rect_probs(samples: np.ndarray, grid) -> np.ndarray:
    """Probability of every grid rectangle, via the cumulative cell histogram.

    Returns an array indexed by (lo_1, hi_1, ..., lo_d, hi_d) with lo < hi
    over grid levels 0..len(grid_i)+1 meaning (-inf, cuts..., +inf)."""
    d = samples.shape[1]
    shape = tuple(len(g) + 1 for g in grid)
    idx = tuple(np.searchsorted(grid[i], samples[:, i], side="right")
                for i in range(d))
    hist = np.zeros(shape)
    np.add.at(hist, idx, 1.0)
    hist /= len(samples)
    cum = hist
    for axis in range(d):
        cum = np.cumsum(cum, axis=axis)
    # pad with a zero layer in front of each axis: cumpad[levels] = P(X_i <= cut_level)
    pad = np.zeros(tuple(s + 1 for s in shape))
    pad[tuple(slice(1, None) for _ in range(d))] = cum
    return pad


def _all_rectangles(shape):
    ranges = [list(itertools.combinations(range(s), 2)) for s in shape]
    return itertools.product(*ranges)


def convex_discrepancy(w_samples, z_samples, family: ConvexFamily | None = None,
                       bound: BoundReport | None = None,
                       seed: int = 0) -> DiscrepancyReport:
    """Max over the convex family of |P(W in A) - P(Z in A)| with the binomial
    standard error of the argmax set."""
    w = np.asarray(w_samples, dtype=float)
    z = np.asarray(z_samples, dtype=float)
    if w.ndim == 1:
        w = w[:, None]
    if z.ndim == 1:
        z = z[:, None]
    if w.shape[1] != z.shape[1]:
        raise ValueError("sample sets have different dimensions")
    if family is None:
        family = convex_family(w, z, seed=seed)
    if not family.halfspaces and not family.grid:
        raise ValueError("empty convex family")
    d = w.shape[1]
    cw = _rect_probs(w, family.grid)
    cz = _rect_probs(z, family.grid)
    nw, nz = len(w), len(z)
    best = (-1.0, 0.0)

    def consider(pw, pz):
        nonlocal best
        est = abs(pw - pz)
        if est > best[0]:
            se = math.sqrt(pw * (1.0 - pw) / nw + pz * (1.0 - pz) / nz)
            best = (est, se)

    for rect in _all_rectangles(tuple(len(g) + 2 for g in family.grid)):
        pw = pz = 0.0
        for corner in itertools.product(*[(lo, hi) for lo, hi in rect]):
            sign = (-1) ** sum(c == rect[i][0] for i, c in enumerate(corner))
            pw += sign * cw[corner]
            pz += sign * cz[corner]
        consider(pw, pz)
    for u, c in family.halfspaces:
        consider(float(np.mean(w @ u <= c)), float(np.mean(z @ u <= c)))
    return DiscrepancyReport(best[0], best[1], family.description, bound)


def bound_check(report: DiscrepancyReport, bound: BoundReport) -> str:
    """PASS / VACUOUS-PASS / FAIL verdict for an estimate against a bound."""
    if bound.vacuous:
        return "VACUOUS-PASS"
    return "PASS" if report.estimate <= bound.value + 3.0 * report.stderr else "FAIL"
