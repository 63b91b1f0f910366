"""Exact finite-N and limiting spectral statistics of the complex (beta=2)
induced ensemble.

Everything here is determinantal: the kernel

    K_N(z, w) = (1/pi) e^{-(|z|^2+|w|^2)/2} sum_{j=0}^{N-1} (z w~)^{j+L} / Gamma(j+L+1)

(w~ = conjugate of w) generates the n-point correlations as det[K_N(z_k, z_l)].
The diagonal collapses to a difference of regularized incomplete gammas,

    rho_N(z) = (1/pi) [P(L, |z|^2) - P(L+N, |z|^2)],

with P(0, .) taken identically equal to 1 so that L=0 reproduces the plain
Ginibre partial sum.  Kernel sums run term-wise in log-magnitude/phase form;
a naive power series overflows once N + L goes past ~150.

Real L >= 0 is supported throughout; only the samplers need integer L.
"""

import numpy as np
from scipy import special as _sp

from .special import lower_reg_gamma, upper_reg_gamma, erfc, log_gamma
from .sampling import EnsembleParams

__all__ = [
    "THETA_AT_EDGE",
    "kernel_KN",
    "density",
    "correlations_Rn",
    "hole_probability",
    "density_ring_limit",
    "density_edge_profile",
    "origin_kernel",
    "bulk_edge_limit_kernels",
    "log_jpdf_complex",
    "integrate_radial",
    "default_rmax",
]

# Value assigned to the Heaviside step exactly on the ring edges.
THETA_AT_EDGE = 0.5


def _require_beta2(params):
    if params.beta != 2:
        raise ValueError("complex-ensemble formulas need beta=2 params")


def _reg_p(a, x):
    """P(a, x), with the a=0 limit taken identically as 1."""
    if a == 0:
        x = np.asarray(x, dtype=float)
        return np.ones_like(x) if x.ndim else 1.0
    return lower_reg_gamma(a, x)


def kernel_KN(z, w, params):
    """Finite-N correlation kernel K_N(z, w).  Vectorized over z, w.

    Hermitian in its arguments; the diagonal K_N(z, z) is real >= 0 and
    equals the mean density.
    """
    _require_beta2(params)
    N, L = params.N, params.L
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    zeta, front = np.broadcast_arrays(z * np.conj(w),
                                      -0.5 * (np.abs(z) ** 2 + np.abs(w) ** 2))
    scalar = zeta.ndim == 0
    zeta_f = np.atleast_1d(zeta).ravel()
    front_f = np.atleast_1d(front).ravel().real
    out = np.zeros(zeta_f.shape, dtype=complex)

    zero = zeta_f == 0
    if L == 0:
        out[zero] = np.exp(front_f[zero]) / np.pi

    if np.any(~zero):
        zv = zeta_f[~zero]
        fv = front_f[~zero]
        orders = np.arange(N, dtype=float) + L
        logmag = (orders[:, None] * np.log(np.abs(zv))[None, :]
                  - log_gamma(orders + 1.0)[:, None])
        phase = orders[:, None] * np.angle(zv)[None, :]
        peak = logmag.max(axis=0)
        series = np.sum(np.exp(logmag - peak[None, :] + 1j * phase), axis=0)
        out[~zero] = series * np.exp(fv + peak) / np.pi

    if scalar:
        return complex(out[0])
    return out.reshape(zeta.shape)


def density(z, params):
    """Mean eigenvalue density rho_N(z); depends on |z| only."""
    _require_beta2(params)
    N, L = params.N, params.L
    u = np.abs(np.asarray(z)) ** 2
    val = (_reg_p(L, u) - lower_reg_gamma(L + N, u)) / np.pi
    return val if np.ndim(z) else float(val)


def correlations_Rn(points, params):
    """n-point correlation R_n = det[K_N(z_k, z_l)] at the given points."""
    _require_beta2(params)
    pts = np.asarray([complex(p) for p in points])
    if pts.size > params.N:
        raise ValueError("no more correlation points than eigenvalues (n <= N)")
    K = kernel_KN(pts[:, None], pts[None, :], params)
    return float(np.linalg.det(K).real)


def hole_probability(s, params):
    """Probability A(s) that the disk |z| < s holds no eigenvalue.

    A(s) = prod_{j=1}^{N} Q(j+L, s^2); equals 1 at s=0 and decreases to 0.
    """
    _require_beta2(params)
    if not np.isfinite(s) or s < 0:
        raise ValueError("hole radius must be a finite real >= 0")
    j = np.arange(1, params.N + 1, dtype=float)
    return float(np.prod(upper_reg_gamma(j + params.L, s * s)))


def _heaviside(x):
    return np.where(x > 0, 1.0, np.where(x < 0, 0.0, THETA_AT_EDGE))


def density_ring_limit(zeta, alpha):
    """Large-N density at rescaled point zeta = lambda/sqrt(N): the uniform ring.

    (1/pi) on sqrt(alpha) < |zeta| < sqrt(alpha+1), zero outside, with the
    Heaviside step taking THETA_AT_EDGE exactly on either edge.  At alpha=0
    the inner edge degenerates to the origin and the support is the full
    disk, so only the outer step remains.
    """
    if not np.isfinite(alpha) or alpha < 0:
        raise ValueError("alpha must be a finite real >= 0")
    r = np.abs(np.asarray(zeta))
    val = _heaviside(np.sqrt(alpha + 1.0) - r)
    if alpha > 0:
        val = val - _heaviside(np.sqrt(alpha) - r)
    val = val / np.pi
    return val if np.ndim(zeta) else float(val)


def density_edge_profile(xi):
    """Density profile across either ring edge, in units of the local scale.

    (1/2pi) erfc(sqrt(2) xi); xi > 0 lies outside the support.
    """
    xi = np.asarray(xi, dtype=float)
    val = erfc(np.sqrt(2.0) * xi) / (2.0 * np.pi)
    return val if xi.ndim else float(val)


def origin_kernel(z, w, L):
    """Limiting kernel near the origin in the almost-square regime (fixed L >= 1).

    (1/pi) e^{-(|z|^2+|w|^2)/2} sum_{j>=0} (z w~)^{j+L} / Gamma(L+j+1),
    the pointwise large-N limit of the finite-N kernel; the series is
    truncated once the remaining tail is below 1e-14 relative.  Equals
    (1/pi) gamma(L, z w~)/Gamma(L) times e^{-(|z|^2+|w|^2)/2 + z w~}; the
    Gaussian dressing is 1 on the diagonal but is required off it for the
    determinants of this kernel to reproduce the limiting correlations
    (without it the two-point function would not decay at large
    separation).
    """
    if L < 1:
        raise ValueError("origin regime requires fixed L >= 1")
    zeta = complex(z) * np.conj(complex(w))
    if zeta == 0:
        return 0j
    term = np.exp(L * np.log(zeta) - log_gamma(float(L) + 1.0))
    total = term
    j = 0
    while True:
        j += 1
        term = term * zeta / (L + j)
        total += term
        ratio = abs(zeta) / (L + j + 1.0)
        if ratio < 1.0 and abs(term) * ratio / (1.0 - ratio) <= 1e-14 * abs(total):
            break
        if j > 200000:  # pragma: no cover - series always converges
            raise RuntimeError("origin kernel series did not converge")
    weight = np.exp(-0.5 * (abs(complex(z)) ** 2 + abs(complex(w)) ** 2))
    return complex(weight * total / np.pi)


def bulk_edge_limit_kernels(points, u, regime, alpha):
    """Limiting n-point correlation around reference direction u.

    points are local (O(1)) complex offsets; the regime fixes both the
    admissible u and the kernel:

      bulk: sqrt(alpha) < |u| < sqrt(alpha+1), entries
            (1/pi) exp(-|z_j|^2/2 - |z_k|^2/2 + z_j z_k~);
      edge: |u| = 1, the bulk entry times (1/2) erfc((z_j u~ + z_k~ u)/sqrt(2)).

    Returns det of the kernel matrix.  Raises when u violates the regime.
    """
    if not np.isfinite(alpha) or alpha < 0:
        raise ValueError("alpha must be a finite real >= 0")
    u = complex(u)
    pts = np.asarray([complex(p) for p in points])
    if regime == "bulk":
        lo, hi = np.sqrt(alpha), np.sqrt(alpha + 1.0)
        if not lo < abs(u) < hi:
            raise ValueError(
                f"|u|={abs(u):.6g} is outside the open bulk annulus ({lo:.6g}, {hi:.6g})")
    elif regime == "edge":
        if abs(abs(u) - 1.0) > 1e-9:
            raise ValueError(f"edge regime needs |u| = 1, got |u|={abs(u):.6g}")
    else:
        raise ValueError("regime must be 'bulk' or 'edge'")

    zj = pts[:, None]
    zk = pts[None, :]
    M = np.exp(-0.5 * np.abs(zj) ** 2 - 0.5 * np.abs(zk) ** 2 + zj * np.conj(zk)) / np.pi
    if regime == "edge":
        # complex-argument erfc: the offsets enter through z_j u~ + z_k~ u
        M = M * 0.5 * _sp.erfc((zj * np.conj(u) + np.conj(zk) * u) / np.sqrt(2.0))
    return float(np.linalg.det(M).real)


def log_jpdf_complex(values, params):
    """log of the symmetrised joint eigenvalue density at the given N points.

    log of (1/(N! pi^N)) prod_j 1/Gamma(j+L) * prod_{j<k}|l_k - l_j|^2
    * prod_j |l_j|^{2L} e^{-sum |l_j|^2}.  Returns -inf on a zero of the
    density (coincident points, or a zero eigenvalue when L > 0).
    """
    _require_beta2(params)
    N, L = params.N, params.L
    lam = np.asarray([complex(v) for v in values])
    if lam.shape != (N,):
        raise ValueError(f"need exactly N={N} eigenvalues, got {lam.shape}")
    absl = np.abs(lam)
    if L > 0 and np.any(absl == 0):
        return -np.inf
    j = np.arange(1, N + 1, dtype=float)
    out = (-log_gamma(float(N) + 1.0) - N * np.log(np.pi)
           - float(np.sum(log_gamma(j + L))))
    if N > 1:
        iu = np.triu_indices(N, k=1)
        gaps = np.abs((lam[:, None] - lam[None, :])[iu])
        if np.any(gaps == 0):
            return -np.inf
        out += 2.0 * float(np.sum(np.log(gaps)))
    if L > 0:
        out += 2.0 * L * float(np.sum(np.log(absl)))
    out -= float(np.sum(absl ** 2))
    return float(out)


def default_rmax(params):
    """Radial cutoff past which the density is Gaussian-small."""
    return float(np.sqrt(params.N + params.L) + 8.0)


def integrate_radial(f, rmax, points_per_unit=24):
    """integral_0^rmax f(r) 2 pi r dr by composite Gauss-Legendre panels.

    f must be vectorized in r.  Unit-width panels keep the rule accurate
    however large the ring is.
    """
    if rmax <= 0:
        raise ValueError("rmax must be > 0")
    n_panels = int(np.ceil(rmax))
    edges = np.linspace(0.0, rmax, n_panels + 1)
    x, w = np.polynomial.legendre.leggauss(points_per_unit)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * np.diff(edges)
    r = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wts = (half[:, None] * w[None, :]).ravel()
    return float(np.sum(wts * 2.0 * np.pi * r * np.asarray(f(r), dtype=float)))
