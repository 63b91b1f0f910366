"""Command line: sampling, spectra, analytic tables, seeded experiments.

Exit codes: 0 success (and verify pass), 1 verify failure, 2 usage error,
3 numeric failure (ill-conditioned quadratisation, non-convergence, ...).
"""

import csv
import json
import math
import sys

import click
import numpy as np

from . import complex_ensemble as cx
from . import real_ensemble as re1
from .channels import predicted_ring, quadratised_spectrum, random_complementary_map
from .harness import run_mc
from .linalg import EigenConvergenceError, eigenvalues
from .sampling import EnsembleParams, QuadratisationError, sample_induced_quadratise

_NUMERIC_ERRORS = (QuadratisationError, EigenConvergenceError,
                   np.linalg.LinAlgError, FloatingPointError, RuntimeError)


def _exit_numeric(exc):
    click.echo(f"numeric failure: {exc}", err=True)
    sys.exit(3)


def _params(beta, n, l):
    try:
        return EnsembleParams(N=n, L=l, beta=beta)
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _parse_grid(spec):
    """Parse start:stop:count into an inclusive linspace."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise click.UsageError(f"--grid wants start:stop:count, got {spec!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise click.UsageError(f"--grid wants numeric start:stop:count, got {spec!r}")
    if count < 1 or stop < start:
        raise click.UsageError("--grid needs stop >= start and count >= 1")
    return np.linspace(start, stop, count)


@click.group()
def main():
    """Induced non-Hermitian ensembles: samplers, exact spectral laws, experiments."""


@main.command()
@click.option("--beta", type=click.Choice(["1", "2"]), required=True)
@click.option("--n", "n", type=int, required=True, help="matrix dimension N")
@click.option("--l", "l", type=int, required=True, help="rectangularity index L = M - N")
@click.option("--count", type=int, default=1, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True,
              help="npz archive: matrices stacked [count, N, N] plus metadata")
def sample(beta, n, l, count, seed, out):
    """Draw matrices by quadratising (N+L) x N Gaussians."""
    params = _params(int(beta), n, l)
    if count < 1:
        raise click.UsageError("--count must be >= 1")
    rng = np.random.default_rng(seed)
    try:
        mats = np.stack([sample_induced_quadratise(params, rng) for _ in range(count)])
    except _NUMERIC_ERRORS as exc:
        _exit_numeric(exc)
    np.savez(out, matrices=mats,
             N=params.N, L=params.L, beta=params.beta, seed=seed)
    click.echo(f"wrote {count} matrices ({params.N}x{params.N}, beta={params.beta}) to {out}")


@main.command()
@click.option("--in", "infile", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--rescale", is_flag=True,
              help="divide eigenvalues by sqrt(N+L) (default: raw matrix units)")
def spectrum(infile, out, rescale):
    """Eigenvalues of stored matrices: CSV sample_idx, re, im, is_real."""
    try:
        with np.load(infile) as archive:
            try:
                mats, beta = archive["matrices"], int(archive["beta"])
                n_dim, l_idx = int(archive["N"]), float(archive["L"])
            except KeyError as exc:
                raise click.UsageError(
                    f"{infile} is not a sample archive (missing {exc})")
    except ValueError as exc:
        raise click.UsageError(f"{infile} is not a sample archive: {exc}")
    scale = 1.0 / math.sqrt(n_dim + l_idx) if rescale else 1.0
    rows = []
    try:
        for idx, G in enumerate(mats):
            spec = eigenvalues(G, beta=beta)
            for x in spec.real_eigs:
                rows.append((idx, scale * x, 0.0, 1))
            z = spec.complex_pairs
            for x, y in z:
                rows.append((idx, scale * x, scale * y, 0))
            if beta == 1:
                for x, y in z:
                    rows.append((idx, scale * x, -scale * y, 0))
    except _NUMERIC_ERRORS as exc:
        _exit_numeric(exc)
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("sample_idx", "re", "im", "is_real"))
        writer.writerows(rows)
    click.echo(f"wrote {len(rows)} eigenvalues to {out}")


@main.command()
@click.option("--beta", type=click.Choice(["1", "2"]), required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--l", "l", type=float, required=True)
@click.option("--grid", required=True, help="radial grid start:stop:count (matrix units)")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def density(beta, n, l, grid, out):
    """Analytic mean density on a radial grid.

    beta=2: columns r, rho with rho the density at |z| = r.  beta=1: adds
    rho_real (real-axis density at x = r); rho is then the azimuthal average
    of the complex-pair density, so 2 pi r rho integrates to the expected
    number of complex eigenvalues.
    """
    params = _params(int(beta), n, l)
    r = _parse_grid(grid)
    rows = [("r", "rho", "rho_real")] if params.beta == 1 else [("r", "rho")]
    try:
        if params.beta == 2:
            rho = cx.density(r, params)
            rows.extend(zip(r.tolist(), np.atleast_1d(rho).tolist()))
        else:
            theta = np.linspace(0.0, np.pi, 129)[1:-1]
            for rv in r:
                if rv == 0.0:
                    avg = 0.0
                else:
                    vals = re1.density_complex(rv * np.exp(1j * theta), params)
                    full = np.concatenate([[0.0], vals, [0.0]])
                    avg = float(np.trapezoid(full, dx=np.pi / 128) / np.pi)
                rows.append((float(rv), avg, float(re1.density_real(rv, params))))
    except _NUMERIC_ERRORS as exc:
        _exit_numeric(exc)
    with open(out, "w", newline="") as fh:
        csv.writer(fh).writerows(rows)
    click.echo(f"wrote {len(rows) - 1} density rows to {out}")


@main.command()
@click.option("--beta", type=click.Choice(["1"]), required=True,
              help="kernel entries exist for the real ensemble only")
@click.option("--n", "n", type=int, required=True)
@click.option("--l", "l", type=float, required=True)
@click.option("--points", type=click.Path(exists=True, dir_okay=False), required=True,
              help="CSV of points, one 're,im' row each ('#' comments allowed)")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--variant", type=click.Choice(["theorem", "appendix"]),
              default="theorem", show_default=True,
              help="normalization variant of the finite-rank correction term")
def kernel(beta, n, l, points, out, variant):
    """Matrix-kernel entries DS, S, IS (+ ordering term) for every point pair."""
    params = _params(int(beta), n, l)
    try:
        pts_arr = np.loadtxt(points, delimiter=",", comments="#", ndmin=2)
    except ValueError as exc:
        raise click.UsageError(f"--points file is not numeric CSV: {exc}")
    if pts_arr.shape[1] != 2:
        raise click.UsageError("--points file needs exactly two columns: re, im")
    zs = [complex(a, b) for a, b in pts_arr]
    rows = [("i", "j", "ds_re", "ds_im", "s_re", "s_im", "is_re", "is_im", "eps")]
    try:
        for i, a in enumerate(zs):
            for j, b in enumerate(zs):
                e = re1.kernel_entries(a, b, params, variant=variant)
                rows.append((i, j,
                             complex(e.DS).real, complex(e.DS).imag,
                             complex(e.S).real, complex(e.S).imag,
                             complex(e.IS).real, complex(e.IS).imag, e.eps))
    except _NUMERIC_ERRORS as exc:
        _exit_numeric(exc)
    with open(out, "w", newline="") as fh:
        csv.writer(fh).writerows(rows)
    click.echo(f"wrote {len(zs) ** 2} kernel entries to {out}")


@main.command()
@click.option("--n", "n", type=int, required=True)
@click.option("--l", "l", type=float, required=True)
@click.option("--smax", type=float, required=True)
@click.option("--steps", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="CSV destination (default: stdout)")
def holeprob(n, l, smax, steps, out):
    """Hole probability A(s) of the complex ensemble on s = 0 .. smax."""
    params = _params(2, n, l)
    if smax <= 0 or steps < 1:
        raise click.UsageError("need --smax > 0 and --steps >= 1")
    rows = [("s", "A")]
    try:
        for s in np.linspace(0.0, smax, steps):
            rows.append((float(s), cx.hole_probability(float(s), params)))
    except _NUMERIC_ERRORS as exc:
        _exit_numeric(exc)
    if out is None:
        for row in rows:
            click.echo(",".join(str(v) for v in row))
    else:
        with open(out, "w", newline="") as fh:
            csv.writer(fh).writerows(rows)
        click.echo(f"wrote {steps} rows to {out}")


@main.command()
@click.option("--experiment", required=True)
@click.option("--seed", type=int, required=True)
@click.option("--samples", type=int, required=True)
@click.option("--workers", type=int, default=None,
              help="thread count (default: cpu count, capped by INDG_THREADS)")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
              help="directory for the JSON report and histogram CSVs")
def verify(experiment, seed, samples, workers, out_dir):
    """Run a named Monte Carlo experiment; exit 0 iff every check passes."""
    try:
        reports = run_mc(experiment, seed, samples, workers=workers, out_dir=out_dir)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    except _NUMERIC_ERRORS as exc:
        _exit_numeric(exc)
    doc = {"experiment": experiment,
           "passed": all(r.passed for r in reports),
           "reports": [r.to_dict() for r in reports]}
    click.echo(json.dumps(doc, indent=2, sort_keys=True))
    sys.exit(0 if doc["passed"] else 1)


@main.command()
@click.option("--d", "d", type=int, required=True, help="input dimension")
@click.option("--k", "k", type=int, required=True, help="environment/output dimension")
@click.option("--realizations", type=int, default=8, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def channel(d, k, realizations, seed, out):
    """Quadratised spectra of random complementary maps, with predicted radii."""
    if realizations < 1:
        raise click.UsageError("--realizations must be >= 1")
    try:
        r_in, r_out = predicted_ring(d, k)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    rng = np.random.default_rng(seed)
    runs = []
    try:
        for _ in range(realizations):
            phi = random_complementary_map(d, k, rng)
            lam = quadratised_spectrum(phi).values()
            runs.append({
                "trace_norm": float(np.sum(np.abs(phi.matrix) ** 2)),
                "eigenvalues": [[float(z.real), float(z.imag)] for z in lam],
            })
    except _NUMERIC_ERRORS as exc:
        _exit_numeric(exc)
    doc = {"d": d, "k": k, "seed": seed, "r_in": r_in, "r_out": r_out,
           "realizations": runs}
    with open(out, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    click.echo(f"wrote {realizations} realizations (d={d}, k={k}) to {out}")


if __name__ == "__main__":
    main()
