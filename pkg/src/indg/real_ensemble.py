"""Exact finite-N statistics of the real (beta=1) induced ensemble.

Every k-point eigenvalue correlation of the real ensemble is the Pfaffian of
an antisymmetric matrix built from 2x2 blocks, whose scalar entries (DS, S,
IS, plus a sign term eps for real/real blocks) come in distinct flavours
depending on whether each argument is real or strictly complex.  All nine
flavours reduce to combinations of three helper functions (s_N, r_N, t) and,
for the real/real IS entry, an exact finite sum over one-dimensional
incomplete-gamma antiderivatives.

The module also provides the closed-form real/complex densities, the partial
joint eigenvalue density, skew-orthogonal polynomial utilities with a
quadrature inner product, and the large-N limit kernels and limit densities
(ring bulks, circular edges, the near-axis crossover and the fixed-L origin
profiles).

Conventions
-----------
* N must be even (the Pfaffian pairing needs it); odd N raises ValueError.
* Complex eigenvalue arguments are represented in the open upper half-plane.
  kernel_entries folds a lower-half input onto its conjugate representative;
  the correlation routines insist on Im > 0.
* Everything runs in log space, so N of several hundred stays finite.
* The t helper ships with the Gamma(L)-denominator normalisation
  (variant="theorem").  The printed sources disagree on this constant; the
  shipped default is the one that reproduces the known square-case real
  eigenvalue counts (sqrt(2) at N=2, 11*sqrt(2)/8 at N=4) and Monte Carlo
  histograms.  The alternative Gamma(L+1) form stays available behind
  variant="appendix" for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.special as sp

from .linalg import pfaffian
from .sampling import EnsembleParams
from .special import erfcx, log_gamma, lower_reg_gamma, upper_reg_gamma

__all__ = [
    "RealKernelEntries",
    "helper_psi",
    "helper_sN",
    "helper_t",
    "helper_rN",
    "kernel_entries",
    "density_complex",
    "density_real",
    "correlations_pfaffian",
    "log_jpdf_real_partial",
    "skew_poly",
    "skew_poly_norm",
    "skew_inner",
    "limit_kernel_entries",
    "limit_kernels",
    "limit_densities",
    "density_real_ring_limit",
    "density_complex_ring_limit",
    "density_real_edge_profile",
    "density_complex_edge_profile",
    "density_crossover_profile",
    "density_real_origin_limit",
    "density_complex_origin_limit",
    "expected_real_count",
    "real_count_leading_order",
]

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG2 = math.log(2.0)


def _require_real_even(params: EnsembleParams):
    if params.beta != 1:
        raise ValueError("real-ensemble statistics need beta=1 parameters")
    if params.N % 2 != 0:
        raise ValueError(
            f"kernel machinery is restricted to even matrix dimension, got N={params.N}"
        )


def _reg_p(a, x):
    """Regularized lower incomplete gamma with the a=0 limit P(0, x) = 1."""
    if a == 0:
        return np.ones_like(np.asarray(x, dtype=float))
    return lower_reg_gamma(a, x)


def _log_reg_p(a, x):
    with np.errstate(divide="ignore"):
        return np.log(lower_reg_gamma(a, x))


def _log_reg_q(a, x):
    with np.errstate(divide="ignore"):
        return np.log(upper_reg_gamma(a, x))


def helper_psi(z):
    """Gaussian weight with the half-plane erfc dressing.

    psi(z) = exp(-z^2/2) * sqrt(erfc(sqrt(2)*|Im z|)).  Real for real z
    (where it reduces to exp(-x^2/2)), complex otherwise.
    """
    z = np.asarray(z)
    y = np.abs(z.imag) if np.iscomplexobj(z) else np.zeros_like(z, dtype=float)
    val = np.exp(-0.5 * z * z) * np.sqrt(sp.erfc(math.sqrt(2.0) * y))
    if val.ndim == 0:
        return val.item()
    return val


def _log_psi(z: complex) -> complex:
    """log of helper_psi, stable for large |Im z| (erfcx form)."""
    y = abs(z.imag)
    if y == 0.0:
        return -0.5 * z * z
    # log erfc(sqrt(2) y) = log erfcx(sqrt(2) y) - 2 y^2
    return -0.5 * z * z + 0.5 * (math.log(erfcx(math.sqrt(2.0) * y)) - 2.0 * y * y)


def _log_dress(z: complex, L: float) -> complex:
    """log of the per-point dressing D(z) = psi(z) * z^L.

    For real z the correct weight is exp(-x^2/2) |x|^L (no sign), which is
    what the real inner product and parity demand; for strictly complex z the
    principal power applies.  Returns -inf for z=0 with L>0.
    """
    if z.imag == 0.0:
        x = z.real
        if x == 0.0:
            return 0.0 if L == 0 else -math.inf
        return complex(-0.5 * x * x + L * math.log(abs(x)))
    out = _log_psi(z)
    if L != 0:
        out = out + L * complex(math.log(abs(z)), math.atan2(z.imag, z.real))
    return out


def _is_real_input(w) -> bool:
    return complex(w).imag == 0.0


def helper_sN(z, w, params: EnsembleParams):
    """Truncated exponential-series kernel helper s_N(z, w).

    s_N(z, w) = (2*pi)^{-1/2} D(z) D(w) * sum_{j=0}^{N-2} (z w)^j / Gamma(L+j+1)
    with D the per-point dressing of _log_dress.  Symmetric in (z, w).
    Returns a float when both arguments are real, complex otherwise.
    """
    _require_real_even(params)
    N, L = params.N, params.L
    a, b = complex(z), complex(w)
    real_io = a.imag == 0.0 and b.imag == 0.0

    ld = _log_dress(a, L) + _log_dress(b, L) - _HALF_LOG_2PI
    if not np.isfinite(ld.real):
        return 0.0 if real_io else 0.0j

    zeta = a * b
    if zeta == 0.0:
        val = np.exp(ld - log_gamma(L + 1.0))
    else:
        j = np.arange(N - 1)
        log_zeta = complex(math.log(abs(zeta)), math.atan2(zeta.imag, zeta.real))
        terms = j * log_zeta - sp.gammaln(L + j + 1.0)
        peak = terms.real.max()
        series = np.sum(np.exp(terms - peak))
        val = series * np.exp(ld + peak)
    return float(val.real) if real_io else complex(val)


def helper_t(x, z, params: EnsembleParams, variant: str = "theorem"):
    """Upper-incomplete-gamma correction term t(x, z).

    t(x, z) = (2*pi)^{-1/2} * D(z) * 2^{L/2-1} * Gamma(L/2, x^2/2) / Gamma(L)
    with the gamma function evaluated at the (real) first argument and the
    dressing D at the second.  variant="appendix" swaps the denominator for
    Gamma(L+1); see the module docstring for why "theorem" is the default.
    At L=0 the default variant vanishes identically (the 1/Gamma(L) limit),
    while "appendix" degenerates to the exponential-integral form.
    """
    _require_real_even(params)
    if variant not in ("theorem", "appendix"):
        raise ValueError(f"unknown t variant {variant!r}")
    x = float(x)
    L = params.L
    b = complex(z)
    real_io = b.imag == 0.0

    if L == 0:
        if variant == "theorem":
            return 0.0 if real_io else 0.0j
        val = np.exp(_log_dress(b, 0.0) - _HALF_LOG_2PI) * 0.5 * sp.exp1(0.5 * x * x)
        return float(val.real) if real_io else complex(val)

    log_q = _log_reg_q(0.5 * L, 0.5 * x * x)
    if not np.isfinite(log_q):
        return 0.0 if real_io else 0.0j
    denom = log_gamma(L) if variant == "theorem" else log_gamma(L + 1.0)
    ld = _log_dress(b, L)
    if not np.isfinite(ld.real):
        return 0.0 if real_io else 0.0j
    log_amp = (0.5 * L - 1.0) * _LOG2 + log_gamma(0.5 * L) + log_q - denom - _HALF_LOG_2PI
    val = np.exp(ld + log_amp)
    return float(val.real) if real_io else complex(val)


def helper_rN(x, z, params: EnsembleParams):
    """Lower-incomplete-gamma correction term r_N(x, z).

    r_N(x, z) = (2*pi)^{-1/2} * sgn(x) * 2^{(N+L-3)/2}
                * gamma((N+L-1)/2, x^2/2) / Gamma(N+L-1) * dress(z)
    where dress(z) = psi(z) z^{N+L-1} for strictly complex z and
    exp(-z^2/2) |z|^L z^{N-1} for real z (the |z|^L keeps the even parity
    that the real weight function demands).  Odd in the real first argument.
    """
    _require_real_even(params)
    N, L = params.N, params.L
    x = float(x)
    b = complex(z)
    real_io = b.imag == 0.0

    if x == 0.0:
        return 0.0 if real_io else 0.0j
    s = 0.5 * (N + L - 1.0)
    log_p = _log_reg_p(s, 0.5 * x * x)
    if not np.isfinite(log_p):
        return 0.0 if real_io else 0.0j
    log_amp = (
        0.5 * (N + L - 3.0) * _LOG2
        + log_gamma(s)
        + log_p
        - log_gamma(N + L - 1.0)
        - _HALF_LOG_2PI
    )

    sign = 1.0 if x > 0 else -1.0
    if real_io:
        t = b.real
        if t == 0.0:
            return 0.0
        # exp(-t^2/2) |t|^L t^{N-1}; N even makes t^{N-1} carry sgn(t).
        if t < 0:
            sign = -sign
        ld = -0.5 * t * t + (N + L - 1.0) * math.log(abs(t))
        return sign * math.exp(log_amp + ld)
    ld = _log_psi(b) + (N + L - 1.0) * complex(math.log(abs(b)), math.atan2(b.imag, b.real))
    return sign * complex(np.exp(ld + log_amp))


# ---------------------------------------------------------------------------
# real/real IS entry: exact finite sum over antiderivative pairs
# ---------------------------------------------------------------------------


def _tau_even_logmag(j: int, x: float, L: float):
    """(sign, log|.|) of the antiderivative paired with the even polynomial.

    tau_{2j}(x) = -sgn(x) 2^{(m-1)/2} Gamma((m+1)/2) P((m+1)/2, x^2/2),
    m = 2j+L.  Odd in x.
    """
    if x == 0.0:
        return 0.0, -math.inf
    m = 2.0 * j + L
    a = 0.5 * (m + 1.0)
    lp = _log_reg_p(a, 0.5 * x * x)
    return (-1.0 if x > 0 else 1.0), 0.5 * (m - 1.0) * _LOG2 + log_gamma(a) + lp


def _tau_odd_logmag(j: int, x: float, L: float):
    """(sign, log|.|) of the antiderivative paired with the odd polynomial.

    tau_1(x) = 2^{L/2} Gamma(L/2+1) Q(L/2+1, x^2/2); for j >= 1 the telescoping
    of the two monomials collapses to tau_{2j+1}(x) = exp(-x^2/2)|x|^L x^{2j}.
    Even in x.
    """
    if j == 0:
        lq = _log_reg_q(0.5 * L + 1.0, 0.5 * x * x)
        return 1.0, 0.5 * L * _LOG2 + log_gamma(0.5 * L + 1.0) + lq
    if x == 0.0:
        return 1.0, -math.inf
    return 1.0, -0.5 * x * x + (L + 2.0 * j) * math.log(abs(x))


def _is_real_real(x: float, y: float, params: EnsembleParams) -> float:
    """IS entry for two real arguments, via the exact antiderivative sum."""
    N, L = params.N, params.L
    signs = []
    logs = []
    for j in range(N // 2):
        lr = -_HALF_LOG_2PI - log_gamma(L + 2.0 * j + 1.0)
        se_x, le_x = _tau_even_logmag(j, x, L)
        so_y, lo_y = _tau_odd_logmag(j, y, L)
        so_x, lo_x = _tau_odd_logmag(j, x, L)
        se_y, le_y = _tau_even_logmag(j, y, L)
        signs.append(se_x * so_y)
        logs.append(le_x + lo_y + lr)
        signs.append(-so_x * se_y)
        logs.append(lo_x + le_y + lr)
    logs = np.asarray(logs)
    signs = np.asarray(signs)
    peak = logs.max()
    if not np.isfinite(peak):
        return 0.0
    return float(np.sum(signs * np.exp(logs - peak)) * math.exp(peak))


@dataclass(frozen=True)
class RealKernelEntries:
    """Scalar entries of one 2x2 kernel block.

    eps is the sign term that accompanies IS when both arguments are real;
    it is identically zero otherwise.
    """

    DS: complex
    S: complex
    IS: complex
    eps: float


def kernel_entries(a, b, params: EnsembleParams, variant: str = "theorem") -> RealKernelEntries:
    """Kernel block entries for an ordered argument pair (a, b).

    Arguments may be real or complex; a complex argument with Im < 0 is
    folded onto its upper-half-plane conjugate representative.  DS and IS
    are antisymmetric under (a, b) swap; for two real arguments all entries
    are real-valued.
    """
    _require_real_even(params)
    a, b = complex(a), complex(b)
    if a.imag < 0.0:
        a = a.conjugate()
    if b.imag < 0.0:
        b = b.conjugate()
    a_real = a.imag == 0.0
    b_real = b.imag == 0.0

    DS = (b - a) * helper_sN(a, b, params)
    eps = 0.0
    if a_real and b_real:
        x, y = a.real, b.real
        S = (
            helper_sN(x, y, params)
            + helper_rN(y, x, params)
            + helper_t(y, x, params, variant)
        )
        IS = _is_real_real(x, y, params)
        eps = 0.5 * math.copysign(1.0, x - y) if x != y else 0.0
    elif a_real and not b_real:
        x, wbar = a.real, b.conjugate()
        S = 1j * (wbar - x) * helper_sN(x, wbar, params)
        IS = -1j * (
            helper_sN(x, wbar, params)
            + helper_rN(x, wbar, params)
            + helper_t(x, wbar, params, variant)
        )
    elif b_real and not a_real:
        y, zbar = b.real, a.conjugate()
        S = (
            helper_sN(y, a, params)
            + helper_rN(y, a, params)
            + helper_t(y, a, params, variant)
        )
        IS = 1j * (
            helper_sN(y, zbar, params)
            + helper_rN(y, zbar, params)
            + helper_t(y, zbar, params, variant)
        )
    else:
        S = 1j * (b.conjugate() - a) * helper_sN(a, b.conjugate(), params)
        IS = (a.conjugate() - b.conjugate()) * helper_sN(a.conjugate(), b.conjugate(), params)
    return RealKernelEntries(DS=complex(DS), S=complex(S), IS=complex(IS), eps=eps)


# ---------------------------------------------------------------------------
# densities
# ---------------------------------------------------------------------------


def density_complex(z, params: EnsembleParams):
    """Mean density of strictly complex eigenvalues at z (Im z > 0).

    rho_C(x+iy) = sqrt(2/pi) * y * erfcx(sqrt(2) y)
                  * [P(L, x^2+y^2) - P(L+N-1, x^2+y^2)]
    which equals the coincident kernel entry S(z, z).  Vectorized in z.
    """
    _require_real_even(params)
    N, L = params.N, params.L
    z = np.asarray(z, dtype=complex)
    if np.any(z.imag <= 0.0):
        raise ValueError("density_complex needs strictly upper-half-plane points")
    y = z.imag
    u = z.real**2 + y**2
    bulk = _reg_p(L, u) - lower_reg_gamma(L + N - 1.0, u)
    val = math.sqrt(2.0 / math.pi) * y * erfcx(math.sqrt(2.0) * y) * bulk
    return float(val) if val.ndim == 0 else val


def _t_diag(x, N, L, variant="theorem"):
    """Vectorized t(x, x) on the real axis."""
    x = np.asarray(x, dtype=float)
    if L == 0:
        if variant == "theorem":
            return np.zeros_like(x)
        return np.exp(-0.5 * x * x) * 0.5 * sp.exp1(0.5 * x * x) / math.sqrt(2.0 * math.pi)
    denom = log_gamma(L) if variant == "theorem" else log_gamma(L + 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        lx = np.where(x == 0.0, -np.inf, np.log(np.abs(x)))
        out = np.exp(
            -0.5 * x * x
            + L * lx
            + (0.5 * L - 1.0) * _LOG2
            + log_gamma(0.5 * L)
            + _log_reg_q(0.5 * L, 0.5 * x * x)
            - denom
            - _HALF_LOG_2PI
        )
    return np.where(np.isfinite(out), out, 0.0)


def _r_diag(x, N, L):
    """Vectorized r_N(x, x) on the real axis (even, nonnegative)."""
    x = np.asarray(x, dtype=float)
    s = 0.5 * (N + L - 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        lx = np.where(x == 0.0, -np.inf, np.log(np.abs(x)))
        out = np.exp(
            -0.5 * x * x
            + (N + L - 1.0) * lx
            + 0.5 * (N + L - 3.0) * _LOG2
            + log_gamma(s)
            + _log_reg_p(s, 0.5 * x * x)
            - log_gamma(N + L - 1.0)
            - _HALF_LOG_2PI
        )
    return np.where(np.isfinite(out), out, 0.0)


def density_real(x, params: EnsembleParams, variant: str = "theorem"):
    """Mean density of real eigenvalues at x.

    rho_R(x) = (2*pi)^{-1/2} [P(L, x^2) - P(L+N-1, x^2)] + t(x, x) + r_N(x, x),
    even in x and equal to the coincident real/real S entry.  Vectorized.
    """
    _require_real_even(params)
    N, L = params.N, params.L
    x = np.asarray(x, dtype=float)
    u = x * x
    bulk = (_reg_p(L, u) - lower_reg_gamma(L + N - 1.0, u)) / math.sqrt(2.0 * math.pi)
    val = bulk + _t_diag(x, N, L, variant) + _r_diag(x, N, L)
    return float(val) if val.ndim == 0 else val


# ---------------------------------------------------------------------------
# Pfaffian correlations
# ---------------------------------------------------------------------------


def _assemble_blocks(points, entry_fn):
    """2x2-block antisymmetric matrix from an entry function.

    Block (i, j) is [[DS(w_i, w_j), S(w_i, w_j)], [-S(w_j, w_i), IS + eps]].
    """
    m = len(points)
    ent = [[entry_fn(points[i], points[j]) for j in range(m)] for i in range(m)]
    A = np.zeros((2 * m, 2 * m), dtype=complex)
    for i in range(m):
        for j in range(m):
            e = ent[i][j]
            A[2 * i, 2 * j] = e.DS
            A[2 * i, 2 * j + 1] = e.S
            A[2 * i + 1, 2 * j] = -ent[j][i].S
            A[2 * i + 1, 2 * j + 1] = e.IS + e.eps
    return A


def _pfaffian_of_blocks(A):
    scale = max(1.0, float(np.abs(A).max()))
    asym = float(np.abs(A + A.T).max())
    if asym > 1e-8 * scale:
        raise RuntimeError(
            f"kernel block matrix lost antisymmetry (residual {asym:.3e}, scale {scale:.3e})"
        )
    A = 0.5 * (A - A.T)
    return float(np.real(pfaffian(A)))


def correlations_pfaffian(reals, complexes, params: EnsembleParams) -> float:
    """k-point correlation R_{K',L'} at K' real and L' upper-half points.

    Assembles the 2(K'+L') x 2(K'+L') antisymmetric kernel matrix and takes
    its Pfaffian.  R_{1,0} is density_real, R_{0,1} is density_complex.
    """
    _require_real_even(params)
    reals = np.atleast_1d(np.asarray(reals, dtype=float))
    complexes = np.atleast_1d(np.asarray(complexes, dtype=complex))
    if np.any(complexes.imag <= 0.0):
        raise ValueError("complex correlation points must satisfy Im z > 0")
    if len(reals) + len(complexes) > params.N:
        raise ValueError("more correlation points than eigenvalues")
    pts = list(reals) + list(complexes)
    if not pts:
        return 1.0
    A = _assemble_blocks(pts, lambda a, b: kernel_entries(a, b, params))
    return _pfaffian_of_blocks(A)


# ---------------------------------------------------------------------------
# partial joint eigenvalue density
# ---------------------------------------------------------------------------


def log_jpdf_real_partial(reals, complexes, params: EnsembleParams) -> float:
    """log of the partial jpdf P_{N,k,l} at k real values and l complex pairs.

    The complex entries carry one upper-half representative per conjugate
    pair.  Normalisation convention: summing integrals of P_{N,k,l} over the
    unordered configurations, with weight 1/(k! l!), over all (k, l) with
    k + 2l = N gives 1.  The Vandermonde runs over the full multiset of N
    eigenvalues (reals plus both members of every conjugate pair).
    """
    _require_real_even(params)
    N, L = params.N, params.L
    reals = np.atleast_1d(np.asarray(reals, dtype=float))
    complexes = np.atleast_1d(np.asarray(complexes, dtype=complex))
    k, l = len(reals), len(complexes)
    if k % 2 != 0:
        raise ValueError("the number of real eigenvalues must be even")
    if k + 2 * l != N:
        raise ValueError(f"need k + 2l = N, got k={k}, l={l}, N={params.N}")
    if l and np.any(complexes.imag <= 0.0):
        raise ValueError("complex eigenvalue representatives must satisfy Im z > 0")

    j = np.arange(1, N + 1, dtype=float)
    out = (l - N * (N + 1) / 4.0 - N * L / 2.0) * _LOG2 - float(
        np.sum(sp.gammaln(0.5 * (L + j)))
    )

    lam = np.concatenate([reals.astype(complex), complexes, complexes.conj()])
    ii, jj = np.triu_indices(N, k=1)
    diffs = np.abs(lam[ii] - lam[jj])
    if np.any(diffs == 0.0):
        return -math.inf
    out += float(np.sum(np.log(diffs)))

    if k:
        ax = np.abs(reals)
        if np.any(ax == 0.0) and L > 0:
            return -math.inf
        with np.errstate(divide="ignore"):
            out += float(np.sum(L * np.log(ax) - 0.5 * reals**2))
    if l:
        xs, ys = complexes.real, complexes.imag
        mod2 = xs**2 + ys**2
        if np.any(mod2 == 0.0) and L > 0:
            return -math.inf
        with np.errstate(divide="ignore"):
            out += float(
                np.sum(
                    np.log(sp.erfc(math.sqrt(2.0) * ys))
                    + ys**2
                    - xs**2
                    + L * np.log(mod2)
                )
            )
    return out


# ---------------------------------------------------------------------------
# skew-orthogonal polynomials and the quadrature inner product
# ---------------------------------------------------------------------------


def skew_poly(j: int, L: float) -> np.ndarray:
    """Ascending coefficient array of the j-th skew-orthogonal polynomial.

    q_{2j}(w) = w^{2j};  q_1(w) = w;  q_{2j+1}(w) = w^{2j+1} - (2j+L) w^{2j-1}.
    """
    if j < 0:
        raise ValueError("polynomial index must be nonnegative")
    c = np.zeros(j + 1)
    c[j] = 1.0
    if j % 2 == 1 and j >= 3:
        c[j - 2] = -(j - 1.0 + L)
    return c


def skew_poly_norm(j: int, L: float) -> float:
    """Pair norm r_j = (q_{2j}, q_{2j+1}) = 2 sqrt(2 pi) Gamma(L+2j+1)."""
    if j < 0:
        raise ValueError("pair index must be nonnegative")
    return 2.0 * math.sqrt(2.0 * math.pi) * math.exp(log_gamma(L + 2.0 * j + 1.0))


def _gl_panels(lo: float, hi: float, width: float = 0.5, order: int = 24):
    """Gauss-Legendre nodes/weights tiled over [lo, hi] in fixed-width panels."""
    base_x, base_w = np.polynomial.legendre.leggauss(order)
    n = max(1, int(math.ceil((hi - lo) / width)))
    edges = np.linspace(lo, hi, n + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    x = (mid[:, None] + half[:, None] * base_x[None, :]).ravel()
    w = (half[:, None] * base_w[None, :]).ravel()
    return x, w


def _weighted_tail(m: float, x: float) -> float:
    """integral_x^inf exp(-y^2/2) |y|^L y^b dy for m = L + b, b the monomial degree.

    Only used with integer b; the |y|^L y^b piece is passed in through m and
    the parity of b (handled by the caller for x < 0).
    """
    a = 0.5 * (m + 1.0)
    return 2.0 ** (0.5 * (m - 1.0)) * math.exp(log_gamma(a)) * float(
        upper_reg_gamma(a, 0.5 * x * x)
    )


def skew_inner(f, g, L: float, *, half_width: float = 13.0, order: int = 24) -> float:
    """Numeric skew-symmetric inner product (f, g) = (f, g)_R + (f, g)_C.

    f and g are ascending coefficient arrays of real-coefficient polynomials.
    The real-real part integrates sgn(y-x) against the weight
    exp(-(x^2+y^2)/2) |xy|^L with the inner integral done in closed form
    (incomplete gammas per monomial); the complex part is a tensor quadrature
    of 2i * e^{y^2-x^2} erfc(sqrt(2) y) (x^2+y^2)^L [f(z)g(zbar) - g(z)f(zbar)]
    over the upper half-plane, evaluated in the stable erfcx form.
    """
    f = np.atleast_1d(np.asarray(f, dtype=float))
    g = np.atleast_1d(np.asarray(g, dtype=float))

    # total weighted moments T_b = integral over R of w(y) y^b dy
    def moment(b: int) -> float:
        if b % 2 == 1:
            return 0.0
        m = L + b
        return 2.0 ** (0.5 * (m + 1.0)) * math.exp(log_gamma(0.5 * (m + 1.0)))

    def upper_part(b: int, x: np.ndarray) -> np.ndarray:
        """integral_x^inf w(y) y^b dy, elementwise in x."""
        m = L + b
        out = np.empty_like(x)
        pos = x >= 0.0
        out[pos] = [_weighted_tail(m, t) for t in x[pos]]
        neg = ~pos
        tb = moment(b)
        mirt = np.array([_weighted_tail(m, -t) for t in x[neg]])
        out[neg] = tb - ((-1.0) ** b) * mirt
        return out

    xs, ws = _gl_panels(-half_width, half_width, order=order)
    wx = np.exp(-0.5 * xs * xs) * np.abs(xs) ** L
    fx = np.polynomial.polynomial.polyval(xs, f)
    g_tail = np.zeros_like(xs)
    for b, gb in enumerate(g):
        if gb != 0.0:
            g_tail += gb * upper_part(b, xs)
    t_g = sum(gb * moment(b) for b, gb in enumerate(g))
    real_part = float(np.sum(ws * wx * fx * (2.0 * g_tail - t_g)))

    ys, wy = _gl_panels(1e-12, half_width, order=order)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    WXY = np.outer(ws, wy)
    Z = X + 1j * Y
    weight = (
        np.exp(-X * X - Y * Y)
        * erfcx(math.sqrt(2.0) * Y)
        * (X * X + Y * Y) ** L
    )
    fz = np.polynomial.polynomial.polyval(Z, f)
    gz = np.polynomial.polynomial.polyval(Z, g)
    integrand = 2j * (fz * np.conj(gz) - gz * np.conj(fz))
    cplx_part = float(np.sum(WXY * weight * integrand).real)

    return real_part + cplx_part


# ---------------------------------------------------------------------------
# limit kernels (bulk on the real axis, bulk off the axis, circular edge)
# ---------------------------------------------------------------------------


def _limit_g(a: complex, b: complex) -> complex:
    """Limit of s_N at unit local scale: Gaussian times half-plane dressings."""
    out = -0.5 * (a - b) * (a - b) - _HALF_LOG_2PI
    for p in (a, b):
        y = abs(p.imag)
        if y != 0.0:
            out = out + 0.5 * (math.log(erfcx(math.sqrt(2.0) * y)) - 2.0 * y * y)
    return complex(np.exp(out))


def limit_kernel_entries(a, b, u: float | None = None) -> RealKernelEntries:
    """Large-N bulk kernel entries at local offsets a, b.

    With u=None these are the bulk forms (valid for a real center strictly
    inside the ring).  Passing u = +1 or -1 multiplies each entry by the
    circular-edge factor erfc(u (p+q)/sqrt(2))/2 evaluated on that entry's
    Gaussian argument pair; the edge forms apply to strictly complex offsets.
    """
    a, b = complex(a), complex(b)
    if a.imag < 0.0:
        a = a.conjugate()
    if b.imag < 0.0:
        b = b.conjugate()
    a_real = a.imag == 0.0
    b_real = b.imag == 0.0
    if u is not None and (a_real or b_real):
        raise ValueError("edge limit kernels are restricted to complex offsets")

    def edge(p: complex, q: complex) -> complex:
        if u is None:
            return 1.0
        return 0.5 * sp.erfc(u * (p + q) / math.sqrt(2.0))

    DS = (b - a) * _limit_g(a, b) * edge(a, b)
    eps = 0.0
    if a_real and b_real:
        d = a.real - b.real
        S = _limit_g(a, b)
        IS = -0.5 * math.erf(d / math.sqrt(2.0))
        eps = 0.5 * math.copysign(1.0, d) if d != 0.0 else 0.0
    elif a_real and not b_real:
        S = 1j * (b.conjugate() - a) * _limit_g(a, b.conjugate()) * edge(a, b.conjugate())
        IS = -1j * _limit_g(a, b.conjugate()) * edge(a, b.conjugate())
    elif b_real and not a_real:
        S = _limit_g(a, b) * edge(a, b)
        IS = 1j * _limit_g(a.conjugate(), b) * edge(a.conjugate(), b)
    else:
        S = 1j * (b.conjugate() - a) * _limit_g(a, b.conjugate()) * edge(a, b.conjugate())
        IS = (
            (a.conjugate() - b.conjugate())
            * _limit_g(a.conjugate(), b.conjugate())
            * edge(a.conjugate(), b.conjugate())
        )
    return RealKernelEntries(DS=complex(DS), S=complex(S), IS=complex(IS), eps=eps)


def limit_kernels(points, u, regime: str, alpha: float) -> float:
    """Limiting correlation at local offsets `points` around center u.

    regime="real-bulk": u real with sqrt(alpha) < |u| < sqrt(alpha+1); points
    may mix real and upper-half offsets; returns the Pfaffian of the bulk
    kernel blocks.  regime="complex-bulk": u anywhere in the closed ring
    (genuinely complex u allowed); returns the determinantal form
    det[exp(-|s_j|^2/2 - |s_k|^2/2 + s_j conj(s_k))] / pi^m, which is the
    correct limit whenever the window sits away from the real axis.
    regime="edge": u = +1 or -1 exactly; strictly complex offsets; bulk
    entries dressed by the erfc edge factor.
    """
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    pts = [complex(p) for p in np.atleast_1d(np.asarray(points, dtype=complex))]
    uc = complex(u)

    if regime == "real-bulk":
        if uc.imag != 0.0:
            raise ValueError("real-bulk needs a real center")
        r = abs(uc.real)
        if not (math.sqrt(alpha) < r < math.sqrt(alpha + 1.0)):
            raise ValueError("real-bulk center must sit strictly inside the ring")
        A = _assemble_blocks(pts, lambda a, b: limit_kernel_entries(a, b))
        return _pfaffian_of_blocks(A)

    if regime == "complex-bulk":
        r = abs(uc)
        if not (math.sqrt(alpha) - 1e-12 <= r <= math.sqrt(alpha + 1.0) + 1e-12):
            raise ValueError("complex-bulk center must sit in the closed ring")
        s = np.asarray(pts, dtype=complex)
        M = np.exp(
            -0.5 * np.abs(s[:, None]) ** 2
            - 0.5 * np.abs(s[None, :]) ** 2
            + s[:, None] * np.conj(s[None, :])
        ) / math.pi
        return float(np.linalg.det(M).real)

    if regime == "edge":
        if abs(uc.imag) > 1e-12 or abs(abs(uc.real) - 1.0) > 1e-9:
            raise ValueError("edge regime needs u = +1 or -1")
        if any(p.imag == 0.0 for p in pts):
            raise ValueError("edge limit kernels are restricted to complex offsets")
        uu = 1.0 if uc.real > 0 else -1.0
        A = _assemble_blocks(pts, lambda a, b: limit_kernel_entries(a, b, u=uu))
        return _pfaffian_of_blocks(A)

    raise ValueError(f"unknown regime {regime!r}")


# ---------------------------------------------------------------------------
# limit densities
# ---------------------------------------------------------------------------


def _ring_indicator(r, alpha: float):
    from .complex_ensemble import THETA_AT_EDGE

    r = np.asarray(r, dtype=float)
    lo, hi = math.sqrt(alpha), math.sqrt(alpha + 1.0)

    def theta(t):
        return np.where(t > 0.0, 1.0, np.where(t == 0.0, THETA_AT_EDGE, 0.0))

    return theta(hi - r) - theta(lo - r)


def density_real_ring_limit(x, alpha: float):
    """Flat two-segment limit of the real-axis density: indicator / sqrt(2 pi)."""
    val = _ring_indicator(np.abs(np.asarray(x, dtype=float)), alpha) / math.sqrt(
        2.0 * math.pi
    )
    return float(val) if val.ndim == 0 else val


def density_complex_ring_limit(z, alpha: float):
    """Flat ring limit of the off-axis density: indicator / pi."""
    val = _ring_indicator(np.abs(np.asarray(z, dtype=complex)), alpha) / math.pi
    return float(val) if val.ndim == 0 else val


def density_complex_edge_profile(xi):
    """Off-axis circular-edge profile erfc(sqrt(2) xi) / (2 pi).

    xi is the signed distance into the forbidden region (positive outside
    the outer edge / inside the inner hole).
    """
    val = sp.erfc(math.sqrt(2.0) * np.asarray(xi, dtype=float)) / (2.0 * math.pi)
    return float(val) if val.ndim == 0 else val


def density_real_edge_profile(xi):
    """Real-axis circular-edge profile.

    (2 pi)^{-1/2} [erfc(sqrt(2) xi)/2 + exp(-xi^2) erfc(-xi) / (2 sqrt(2))].
    The first coefficient is pinned by matching the 1/sqrt(2 pi) plateau deep
    inside the support (xi -> -inf); the printed sources carry a factor-2
    misprint there, which finite-N evaluation confirms.  xi is the signed
    distance into the forbidden region.
    """
    xi = np.asarray(xi, dtype=float)
    val = (
        0.5 * sp.erfc(math.sqrt(2.0) * xi)
        + np.exp(-xi * xi) * sp.erfc(-xi) / (2.0 * math.sqrt(2.0))
    ) / math.sqrt(2.0 * math.pi)
    return float(val) if val.ndim == 0 else val


def density_crossover_profile(v):
    """Off-axis density at fixed distance |v| from the real axis, deep in the bulk.

    sqrt(2/pi) * |v| * erfcx(sqrt(2) |v|): vanishes linearly at the axis and
    saturates at the flat bulk value 1/pi as |v| grows.
    """
    av = np.abs(np.asarray(v, dtype=float))
    val = math.sqrt(2.0 / math.pi) * av * erfcx(math.sqrt(2.0) * av)
    return float(val) if val.ndim == 0 else val


def density_real_origin_limit(x, L: float):
    """Fixed-L large-N real density near the origin.

    (2 pi)^{-1/2} P(L, x^2) plus the t-type correction; reduces to the
    constant 1/sqrt(2 pi) at L=0.
    """
    x = np.asarray(x, dtype=float)
    if L == 0:
        val = np.full_like(x, 1.0 / math.sqrt(2.0 * math.pi))
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            lx = np.where(x == 0.0, -np.inf, np.log(np.abs(x)))
            t_term = np.exp(
                -0.5 * x * x
                + L * lx
                + (0.5 * L - 1.0) * _LOG2
                + log_gamma(0.5 * L)
                + _log_reg_q(0.5 * L, 0.5 * x * x)
                - log_gamma(L)
            )
        t_term = np.where(np.isfinite(t_term), t_term, 0.0)
        val = (lower_reg_gamma(L, x * x) + t_term) / math.sqrt(2.0 * math.pi)
    return float(val) if val.ndim == 0 else val


def density_complex_origin_limit(z, L: float):
    """Fixed-L large-N off-axis density near the origin.

    sqrt(2/pi) * y * erfcx(sqrt(2) y) * P(L, x^2+y^2); the L=0 case is the
    flat near-axis crossover profile.
    """
    z = np.asarray(z, dtype=complex)
    y = z.imag
    if np.any(y <= 0.0):
        raise ValueError("origin profile needs strictly upper-half-plane points")
    u = z.real**2 + y**2
    val = math.sqrt(2.0 / math.pi) * y * erfcx(math.sqrt(2.0) * y) * _reg_p(L, u)
    return float(val) if val.ndim == 0 else val


def expected_real_count(params: EnsembleParams, variant: str = "theorem") -> float:
    """Mean number of real eigenvalues: integral of density_real over the line."""
    _require_real_even(params)
    rmax = math.sqrt(params.N + params.L) + 10.0
    x, w = _gl_panels(0.0, rmax, width=1.0, order=24)
    return 2.0 * float(np.sum(w * density_real(x, params, variant)))


def real_count_leading_order(N: int, L: float) -> float:
    """Leading-order mean real-eigenvalue count sqrt(2/pi) (sqrt(N+L) - sqrt(L))."""
    return math.sqrt(2.0 / math.pi) * (math.sqrt(N + L) - math.sqrt(L))


_LIMIT_DISPATCH = {
    "real-ring": density_real_ring_limit,
    "complex-ring": density_complex_ring_limit,
    "complex-edge": density_complex_edge_profile,
    "real-edge": density_real_edge_profile,
    "crossover": density_crossover_profile,
    "origin-real": density_real_origin_limit,
    "origin-complex": density_complex_origin_limit,
    "count-leading": real_count_leading_order,
}


def limit_densities(kind: str, *args, **kwargs):
    """Dispatch to the closed-form limit densities by name.

    kinds: real-ring(x, alpha), complex-ring(z, alpha), complex-edge(xi),
    real-edge(xi), crossover(v), origin-real(x, L), origin-complex(z, L),
    count-leading(N, L).
    """
    try:
        fn = _LIMIT_DISPATCH[kind]
    except KeyError:
        raise ValueError(f"unknown limit density {kind!r}") from None
    return fn(*args, **kwargs)
