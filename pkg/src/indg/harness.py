"""Monte Carlo harness: seeded experiments, histograms, reports.

Every experiment is deterministic given (name, master_seed, n_samples): the
work is split over sample indices, each index gets its own RNG stream spawned
as SeedSequence(master_seed, spawn_key=(index,)), and the merge step reduces
per-index results in index order.  The worker count (flag, else INDG_THREADS,
else cpu count) therefore changes only the wall time, never the numbers; the
canonical report payload excludes wall time so byte identity across worker
counts can be asserted directly.
"""

import csv
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import complex_ensemble as cx
from . import real_ensemble as re1
from .channels import predicted_ring, quadratised_spectrum, random_complementary_map
from .linalg import eigenvalues
from .sampling import EnsembleParams, sample_induced_polar, sample_induced_quadratise

__all__ = [
    "RadialHistogram",
    "ExperimentReport",
    "EXPERIMENTS",
    "run_mc",
    "ks_two_sample",
    "report_payload_bytes",
    "resolve_workers",
]

DEFAULT_BINS = 64
DEFAULT_RANGE = (0.0, 1.2)  # rescaled units, |lambda| / sqrt(N+L)


@dataclass
class RadialHistogram:
    """Binned |eigenvalue| counts for one ensemble, in rescaled units.

    counts[j] is the number of eigenvalues with edges[j] <= r < edges[j+1];
    out_of_range collects the rest, so that counts.sum() + out_of_range is
    exactly the number of binned eigenvalues (n_samples * N when every
    eigenvalue is binned here; real eigenvalues may be binned separately).
    """

    edges: np.ndarray
    counts: np.ndarray
    out_of_range: int
    n_samples: int
    N: int
    L: float
    beta: int

    @classmethod
    def empty(cls, params, edges=None):
        if edges is None:
            edges = np.linspace(*DEFAULT_RANGE, DEFAULT_BINS + 1)
        edges = np.asarray(edges, dtype=float)
        if edges.ndim != 1 or len(edges) < 2 or np.any(np.diff(edges) <= 0):
            raise ValueError("edges must be an ascending 1-D boundary array")
        return cls(edges=edges, counts=np.zeros(len(edges) - 1, dtype=np.int64),
                   out_of_range=0, n_samples=0,
                   N=params.N, L=params.L, beta=params.beta)

    def add(self, values, n_new_samples=1):
        """Bin one sample's worth of radii (already rescaled)."""
        values = np.asarray(values, dtype=float)
        hist, _ = np.histogram(values, bins=self.edges)
        self.counts += hist
        self.out_of_range += int(values.size - hist.sum())
        self.n_samples += n_new_samples

    def total_binned(self):
        return int(self.counts.sum()) + self.out_of_range

    def centers(self):
        return 0.5 * (self.edges[:-1] + self.edges[1:])


@dataclass
class ExperimentReport:
    """One pass/fail comparison of an empirical statistic with its analytic value."""

    experiment: str
    params: dict
    statistic: str
    empirical: float
    analytic: float
    tolerance: float
    passed: bool
    seed: int
    wall_time: float = 0.0

    @classmethod
    def build(cls, experiment, params, statistic, empirical, analytic, tolerance, seed):
        passed = bool(abs(empirical - analytic) <= tolerance)
        return cls(experiment=experiment, params=dict(params), statistic=statistic,
                   empirical=float(empirical), analytic=float(analytic),
                   tolerance=float(tolerance), passed=passed, seed=int(seed))

    def payload(self):
        """Deterministic content: everything except wall time."""
        return {
            "experiment": self.experiment,
            "params": self.params,
            "statistic": self.statistic,
            "empirical": self.empirical,
            "analytic": self.analytic,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "seed": self.seed,
        }

    def to_dict(self):
        out = self.payload()
        out["wall_time"] = self.wall_time
        return out


def report_payload_bytes(reports):
    """Canonical bytes of a report list (wall time excluded) for reproducibility checks."""
    doc = [r.payload() for r in reports]
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()


def resolve_workers(workers=None):
    """Explicit flag wins; else cpu count capped by the INDG_THREADS env var."""
    if workers is not None:
        return max(1, int(workers))
    n = os.cpu_count() or 1
    cap = os.environ.get("INDG_THREADS")
    if cap:
        n = min(n, max(1, int(cap)))
    return n


def _index_rng(master_seed, index):
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(index,)))


def _map_indices(fn, n, workers, master_seed):
    """Run fn(0..n-1), any worker count, results in index order."""

    def guarded(i):
        try:
            return fn(i)
        except Exception as exc:
            raise RuntimeError(
                f"worker failed at sample index {i} "
                f"(seed spawn ({master_seed}, ({i},))): {exc}") from exc

    if workers <= 1:
        return [guarded(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(guarded, range(n)))


def ks_two_sample(a, b):
    """Two-sample Kolmogorov-Smirnov: sup CDF distance and asymptotic p bound.

    Inputs must be nonempty ascending samples.  The bound is the one-term
    Smirnov tail 2 exp(-2 t^2 mn/(m+n)), clipped to 1; it overestimates the
    true p, so rejections are conservative.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("ks_two_sample needs nonempty samples")
    if np.any(np.diff(a) < 0) or np.any(np.diff(b) < 0):
        raise ValueError("ks_two_sample expects sorted samples")
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    t = float(np.max(np.abs(fa - fb)))
    m, n = a.size, b.size
    p = min(1.0, 2.0 * math.exp(-2.0 * t * t * m * n / (m + n)))
    return t, p


# --------------------------------------------------------------------------
# analytic bin expectations


def _gauss_on(lo, hi, order=12):
    x, w = np.polynomial.legendre.leggauss(order)
    mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
    return mid + half * x, half * w


def _expected_radial_complex(edges, params, n_samples):
    """E[# eigenvalues per rescaled modulus bin] for the beta=2 ensemble."""
    s = math.sqrt(params.N + params.L)
    out = np.zeros(len(edges) - 1)
    for j in range(len(out)):
        r, w = _gauss_on(edges[j], edges[j + 1])
        out[j] = np.sum(w * 2.0 * np.pi * r * s * s * cx.density(s * r, params))
    return n_samples * out


def _expected_radial_real(edges, params, n_samples):
    """E[# eigenvalues per rescaled modulus bin], beta=1, reals included."""
    s = math.sqrt(params.N + params.L)
    out = np.zeros(len(edges) - 1)
    tnodes, tweights = np.polynomial.legendre.leggauss(16)
    theta = 0.5 * np.pi * (tnodes + 1.0)
    tw = 0.5 * np.pi * tweights
    for j in range(len(out)):
        r, w = _gauss_on(edges[j], edges[j + 1])
        rr = s * r
        z = rr[:, None] * np.exp(1j * theta)[None, :]
        dens = re1.density_complex(z, params)
        ang = np.sum(dens * tw[None, :], axis=1)
        # both members of each conjugate pair land in the modulus bin
        pair_part = np.sum(w * 2.0 * rr * s * ang)
        real_part = np.sum(w * s * (re1.density_real(rr, params)
                                    + re1.density_real(-rr, params)))
        out[j] = pair_part + real_part
    return n_samples * out


def _expected_line_real(edges, params, n_samples):
    """E[# real eigenvalues per rescaled bin] on the real axis."""
    s = math.sqrt(params.N + params.L)
    out = np.zeros(len(edges) - 1)
    for j in range(len(out)):
        x, w = _gauss_on(edges[j], edges[j + 1])
        out[j] = np.sum(w * s * re1.density_real(s * x, params))
    return n_samples * out


def _bins_within_3sigma(counts, expected):
    sigma = np.sqrt(np.maximum(expected, 1.0))
    return int(np.sum(np.abs(counts - expected) <= 3.0 * sigma))


# --------------------------------------------------------------------------
# experiments


def _exp_radial_density(master_seed, n_samples, workers):
    params = EnsembleParams(N=128, L=32, beta=2)
    scale = 1.0 / math.sqrt(params.N + params.L)

    def one(i):
        rng = _index_rng(master_seed, i)
        G = sample_induced_quadratise(params, rng)
        return np.abs(eigenvalues(G, beta=2).values()) * scale

    radii = _map_indices(one, n_samples, workers, master_seed)
    hist = RadialHistogram.empty(params)
    for r in radii:
        hist.add(r)
    expected = _expected_radial_complex(hist.edges, params, n_samples)
    ok = _bins_within_3sigma(hist.counts, expected)
    meta = {"N": params.N, "L": params.L, "beta": 2, "n_samples": n_samples,
            "bins": len(hist.counts)}
    report = ExperimentReport.build(
        "radial-density", meta, "bins_within_3sigma", ok, len(hist.counts),
        4.0, master_seed)
    table = [("r_lo", "r_hi", "count", "expected")] + [
        (hist.edges[j], hist.edges[j + 1], int(hist.counts[j]), expected[j])
        for j in range(len(hist.counts))]
    return [report], {"radial_histogram": table, "_hist": hist}


def _real_count_run(params, master_seed, n_samples, workers, salt):
    def one(i):
        rng = _index_rng(master_seed, salt + i)
        G = sample_induced_quadratise(params, rng)
        return len(eigenvalues(G, beta=1).real_eigs)

    counts = np.array(_map_indices(one, n_samples, workers, master_seed), dtype=float)
    return float(counts.mean()), float(counts.std(ddof=1) / math.sqrt(len(counts))), counts


def _exp_real_count(master_seed, n_samples, workers):
    reports, artifacts = [], {}
    for params, salt in ((EnsembleParams(N=128, L=32, beta=1), 0),
                         (EnsembleParams(N=128, L=0, beta=1), 10 ** 6)):
        mean, se, counts = _real_count_run(params, master_seed, n_samples, workers, salt)
        meta = {"N": params.N, "L": params.L, "beta": 1, "n_samples": n_samples,
                "se": se}
        quad = re1.expected_real_count(params)
        asym = re1.real_count_leading_order(params.N, params.L)
        reports.append(ExperimentReport.build(
            "real-count", meta, "mean_vs_quadrature", mean, quad, 3.0 * se, master_seed))
        reports.append(ExperimentReport.build(
            "real-count", meta, "mean_vs_leading_order", mean, asym, 3.0 * se, master_seed))
        values, freq = np.unique(counts.astype(int), return_counts=True)
        artifacts[f"real_count_hist_L{int(params.L)}"] = (
            [("n_real", "frequency")] + list(zip(values.tolist(), freq.tolist())))
    return reports, artifacts


def _exp_hole_prob(master_seed, n_samples, workers):
    params = EnsembleParams(N=20, L=2, beta=2)
    radii = (0.5, 1.0, 1.5)

    def one(i):
        rng = _index_rng(master_seed, i)
        G = sample_induced_quadratise(params, rng)
        rmin = float(np.min(np.abs(eigenvalues(G, beta=2).values())))
        return tuple(rmin > s for s in radii)

    flags = np.array(_map_indices(one, n_samples, workers, master_seed), dtype=float)
    reports = []
    table = [("s", "analytic", "empirical")]
    for j, s in enumerate(radii):
        frac = float(flags[:, j].mean())
        a = cx.hole_probability(s, params)
        tol = 3.0 * math.sqrt(a * (1.0 - a) / n_samples)
        meta = {"N": params.N, "L": params.L, "beta": 2, "n_samples": n_samples, "s": s}
        reports.append(ExperimentReport.build(
            "hole-prob", meta, "empty_disk_fraction", frac, a, tol, master_seed))
        table.append((s, a, frac))
    return reports, {"hole_prob": table}


def _exp_sampler_equiv(master_seed, n_samples, workers):
    reports = {}
    artifacts = {}
    for beta, salt in ((1, 0), (2, 10 ** 6)):
        params = EnsembleParams(N=50, L=10, beta=beta)

        def one(i, params=params, salt=salt):
            rng = _index_rng(master_seed, salt + i)
            a = np.abs(eigenvalues(sample_induced_polar(params, rng), beta=beta).values())
            b = np.abs(eigenvalues(sample_induced_quadratise(params, rng), beta=beta).values())
            return a, b

        drawn = _map_indices(one, n_samples, workers, master_seed)
        polar = np.sort(np.concatenate([d[0] for d in drawn]))
        quad = np.sort(np.concatenate([d[1] for d in drawn]))
        t, p = ks_two_sample(polar, quad)
        meta = {"N": params.N, "L": params.L, "beta": beta, "n_samples": n_samples,
                "ks_statistic": t}
        reports[beta] = ExperimentReport.build(
            "sampler-equiv", meta, "ks_p_bound", p, 1.0, 0.999, master_seed)
    return [reports[1], reports[2]], artifacts


def _exp_channel_ring(master_seed, n_samples, workers):
    geometries = ((14, 10), (14, 14), (14, 18))
    reports, artifacts = [], {}
    for g, (d, k) in enumerate(geometries):
        r_in, r_out = predicted_ring(d, k)

        def one(i, d=d, k=k, g=g):
            rng = _index_rng(master_seed, g * 10 ** 6 + i)
            phi = random_complementary_map(d, k, rng)
            lam = quadratised_spectrum(phi).values()
            trace = float(np.sum(np.abs(phi.matrix) ** 2))
            return lam, trace

        drawn = _map_indices(one, n_samples, workers, master_seed)
        inside = total = 0
        rows = [("realization", "re", "im")]
        for i, (lam, _) in enumerate(drawn):
            mod = np.abs(lam)
            keep = np.delete(np.arange(mod.size), int(np.argmax(mod)))
            inside += int(np.sum((mod[keep] >= r_in - 0.05) & (mod[keep] <= r_out + 0.05)))
            total += keep.size
            rows.extend((i, float(z.real), float(z.imag)) for z in lam)
        traces = np.array([t for _, t in drawn])
        meta = {"d": d, "k": k, "n_samples": n_samples,
                "r_in": r_in, "r_out": r_out, "delta": 0.05}
        reports.append(ExperimentReport.build(
            "channel-ring", meta, "annulus_containment", inside / total, 1.0, 0.1,
            master_seed))
        want = d * (k + 1) / k
        reports.append(ExperimentReport.build(
            "channel-ring", meta, "mean_trace_norm", float(traces.mean()), want,
            0.10 * want, master_seed))
        artifacts[f"channel_spectra_d{d}_k{k}"] = rows
    return reports, artifacts


def _exp_edge_profile(master_seed, n_samples, workers):
    # analytic-only check: finite-N density across both ring edges vs the
    # erfc profile; n_samples plays no role
    params = EnsembleParams(N=1000, L=500, beta=2)
    r_out = math.sqrt(params.N + params.L)
    r_in = math.sqrt(params.L)
    xis = (-1.0, -0.5, 0.0, 0.5, 1.0)
    rows = [("xi", "profile", "density_outer", "density_inner")]
    dev = 0.0
    for xi in xis:
        want = cx.density_edge_profile(xi)
        outer = cx.density(r_out + xi, params)
        inner = cx.density(r_in - xi, params)
        dev = max(dev, abs(outer - want), abs(inner - want))
        rows.append((xi, want, outer, inner))
    meta = {"N": params.N, "L": params.L, "beta": 2, "xi_grid": list(xis)}
    report = ExperimentReport.build(
        "edge-profile", meta, "max_profile_deviation", dev, 0.0, 0.01 / math.pi,
        master_seed)
    return [report], {"edge_profile": rows}


def _exp_real_density(master_seed, n_samples, workers):
    params = EnsembleParams(N=16, L=4, beta=1)
    scale = 1.0 / math.sqrt(params.N + params.L)

    def one(i):
        rng = _index_rng(master_seed, i)
        spec = eigenvalues(sample_induced_quadratise(params, rng), beta=1)
        return np.abs(spec.values()) * scale, spec.real_eigs * scale

    drawn = _map_indices(one, n_samples, workers, master_seed)
    radial = RadialHistogram.empty(params)
    line = RadialHistogram.empty(params, edges=np.linspace(-1.2, 1.2, DEFAULT_BINS + 1))
    for mods, reals in drawn:
        radial.add(mods)
        line.add(reals)
    exp_radial = _expected_radial_real(radial.edges, params, n_samples)
    exp_line = _expected_line_real(line.edges, params, n_samples)
    meta = {"N": params.N, "L": params.L, "beta": 1, "n_samples": n_samples,
            "bins": len(radial.counts)}
    reports = [
        ExperimentReport.build("real-density", meta, "radial_bins_within_3sigma",
                               _bins_within_3sigma(radial.counts, exp_radial),
                               len(radial.counts), 4.0, master_seed),
        ExperimentReport.build("real-density", meta, "real_axis_bins_within_3sigma",
                               _bins_within_3sigma(line.counts, exp_line),
                               len(line.counts), 4.0, master_seed),
    ]
    artifacts = {
        "real_density_radial": [("r_lo", "r_hi", "count", "expected")] + [
            (radial.edges[j], radial.edges[j + 1], int(radial.counts[j]), exp_radial[j])
            for j in range(len(radial.counts))],
        "real_density_axis": [("x_lo", "x_hi", "count", "expected")] + [
            (line.edges[j], line.edges[j + 1], int(line.counts[j]), exp_line[j])
            for j in range(len(line.counts))],
        "_hist": radial,
        "_line": line,
    }
    return reports, artifacts


EXPERIMENTS = {
    "radial-density": _exp_radial_density,
    "real-count": _exp_real_count,
    "hole-prob": _exp_hole_prob,
    "sampler-equiv": _exp_sampler_equiv,
    "channel-ring": _exp_channel_ring,
    "edge-profile": _exp_edge_profile,
    "real-density": _exp_real_density,
}


def run_mc(experiment, master_seed, n_samples, workers=None, out_dir=None):
    """Run one named experiment; returns its ExperimentReport list.

    Deterministic given (experiment, master_seed, n_samples) for any worker
    count.  With out_dir set, writes <experiment>_report.json plus one CSV per
    histogram/table artifact, every file carrying the parameter set and seed.
    """
    if experiment not in EXPERIMENTS:
        raise ValueError(
            f"unknown experiment {experiment!r}; choose from {sorted(EXPERIMENTS)}")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    nworkers = resolve_workers(workers)
    t0 = time.perf_counter()
    reports, artifacts = EXPERIMENTS[experiment](int(master_seed), int(n_samples), nworkers)
    elapsed = time.perf_counter() - t0
    for r in reports:
        r.wall_time = elapsed
    if out_dir is not None:
        _write_outputs(experiment, reports, artifacts, out_dir, master_seed)
    return reports


def _write_outputs(experiment, reports, artifacts, out_dir, master_seed):
    os.makedirs(out_dir, exist_ok=True)
    doc = {"experiment": experiment, "reports": [r.to_dict() for r in reports]}
    path = os.path.join(out_dir, f"{experiment}_report.json")
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    provenance = json.dumps({"experiment": experiment, "seed": int(master_seed),
                             **reports[0].params}, sort_keys=True)
    for name, table in artifacts.items():
        if name.startswith("_"):
            continue
        with open(os.path.join(out_dir, f"{experiment}_{name}.csv"), "w", newline="") as fh:
            fh.write(f"# {provenance}\n")
            writer = csv.writer(fh)
            writer.writerows(table)
