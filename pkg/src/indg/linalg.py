"""Matrix primitives: Gaussian/Haar sampling, eigenvalue extraction with
real/complex classification, PSD square root, and Pfaffians of antisymmetric
matrices.

Eigenvalue classification for real matrices goes through the real Schur block
structure (1x1 block -> real eigenvalue, standardized 2x2 block -> conjugate
pair), never through an imaginary-part threshold.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

__all__ = [
    "Spectrum",
    "EigenConvergenceError",
    "sample_gaussian",
    "sample_haar_unitary",
    "eigenvalues",
    "psd_sqrt",
    "pfaffian",
    "pfaffian_sign_logmag",
]


class EigenConvergenceError(RuntimeError):
    """Eigenvalue iteration failed to converge; carries matrix context."""


@dataclass
class Spectrum:
    """Eigenvalues of one sample, split into reals and conjugate-pair reps.

    For beta=1 the split is structural (from the real Schur form): real_eigs
    holds the 1x1 blocks, complex_pairs holds one (x, y) row per conjugate
    pair x +- iy with y > 0.  For beta=2 there is no conjugate symmetry: each
    eigenvalue is stored individually as an (x, y) row with free sign of y and
    real_eigs stays empty.
    """

    real_eigs: np.ndarray
    complex_pairs: np.ndarray  # shape (m, 2), columns (x, y)
    source_dim: int
    beta: int = 1

    def __post_init__(self):
        self.real_eigs = np.atleast_1d(np.asarray(self.real_eigs, dtype=float))
        self.complex_pairs = np.asarray(self.complex_pairs, dtype=float).reshape(-1, 2)
        self.validate()

    def validate(self):
        if self.beta == 1:
            if len(self.real_eigs) + 2 * len(self.complex_pairs) != self.source_dim:
                raise ValueError(
                    "beta=1 spectrum must satisfy n_real + 2*n_pairs = N "
                    f"(got {len(self.real_eigs)} + 2*{len(self.complex_pairs)} "
                    f"!= {self.source_dim})"
                )
            if len(self.complex_pairs) and not np.all(self.complex_pairs[:, 1] > 0):
                raise ValueError("beta=1 conjugate-pair representatives need y > 0")
        elif self.beta == 2:
            if len(self.real_eigs) != 0:
                raise ValueError("beta=2 spectra store all eigenvalues in complex_pairs")
            if len(self.complex_pairs) != self.source_dim:
                raise ValueError("beta=2 spectrum must store N individual eigenvalues")
        else:
            raise ValueError(f"beta must be 1 or 2, got {self.beta}")

    def values(self):
        """All eigenvalues as one complex array (pairs expanded for beta=1)."""
        z = self.complex_pairs[:, 0] + 1j * self.complex_pairs[:, 1]
        if self.beta == 1:
            return np.concatenate([self.real_eigs.astype(complex), z, np.conj(z)])
        return z

    def eig_sum(self):
        """Sum of all eigenvalues; equals the trace of the source matrix."""
        if self.beta == 1:
            return self.real_eigs.sum() + 2.0 * self.complex_pairs[:, 0].sum()
        return complex(self.values().sum())


def sample_gaussian(rows, cols, beta, rng):
    """i.i.d. Gaussian matrix with density ∝ exp(−(β/2) Tr X†X).

    beta=1: standard normal entries.  beta=2: independent N(0, 1/2) real and
    imaginary parts, so E|x_ij|² = 1.
    """
    if rows < 1 or cols < 1:
        raise ValueError("matrix dimensions must be >= 1")
    if beta == 1:
        return rng.standard_normal((rows, cols))
    if beta == 2:
        return (rng.standard_normal((rows, cols))
                + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)
    raise ValueError(f"beta must be 1 or 2, got {beta}")


def sample_haar_unitary(n, beta, rng):
    """Haar orthogonal (beta=1) or unitary (beta=2) matrix of size n.

    QR of a Gaussian matrix with the R-diagonal phase correction folded into
    Q; without the correction the distribution is not Haar.
    """
    z = sample_gaussian(n, n, beta, rng)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    ph = np.where(d == 0, 1.0, d / np.abs(d))
    return q * ph


def eigenvalues(G, beta):
    """Spectrum of a square matrix with structural real/complex split.

    beta=1 requires a real matrix and uses the real Schur form: 1x1 diagonal
    blocks are real eigenvalues; standardized 2x2 blocks [[a, b], [c, a]] with
    bc < 0 are the pairs a ± i sqrt(−bc).  beta=2 reports every eigenvalue
    individually (see Spectrum).
    """
    G = np.asarray(G)
    n = G.shape[0]
    if G.shape != (n, n):
        raise ValueError("eigenvalues needs a square matrix")
    if not np.all(np.isfinite(G.real)) or not np.all(np.isfinite(G.imag)):
        raise ValueError("matrix entries must be finite")

    if beta == 2:
        try:
            ev = np.linalg.eigvals(G.astype(complex))
        except np.linalg.LinAlgError as exc:
            raise EigenConvergenceError(f"eigvals failed on {n}x{n} matrix: {exc}") from exc
        return Spectrum(np.empty(0), np.column_stack([ev.real, ev.imag]), n, beta=2)

    if beta != 1:
        raise ValueError(f"beta must be 1 or 2, got {beta}")
    if np.iscomplexobj(G):
        if np.max(np.abs(G.imag)) != 0.0:
            raise ValueError("beta=1 eigenvalue extraction needs a real matrix")
        G = G.real
    try:
        T, _ = sla.schur(np.ascontiguousarray(G, dtype=float), output="real")
    except Exception as exc:  # sla.schur raises LinAlgError on non-convergence
        raise EigenConvergenceError(f"real Schur failed on {n}x{n} matrix: {exc}") from exc

    reals = []
    pairs = []
    k = 0
    while k < n:
        if k == n - 1 or T[k + 1, k] == 0.0:
            reals.append(T[k, k])
            k += 1
        else:
            # standardized 2x2 block: equal diagonal a, off-diagonals b*c < 0
            x = 0.5 * (T[k, k] + T[k + 1, k + 1])
            y = np.sqrt(np.abs(T[k + 1, k] * T[k, k + 1]))
            pairs.append((x, y))
            k += 2
    reals = np.sort(np.asarray(reals, dtype=float))
    pairs = np.asarray(pairs, dtype=float).reshape(-1, 2)
    if len(pairs):
        pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
    return Spectrum(reals, pairs, n, beta=1)


def psd_sqrt(S):
    """Hermitian square root of a Hermitian PSD matrix via eigendecomposition.

    Eigenvalues slightly below zero (roundoff) are clamped; a genuinely
    negative eigenvalue (< −1e-8·‖S‖) is an error, as is a non-Hermitian input.
    """
    S = np.asarray(S)
    n = S.shape[0]
    if S.shape != (n, n):
        raise ValueError("psd_sqrt needs a square matrix")
    scale = max(1.0, float(np.max(np.abs(S))))
    if np.max(np.abs(S - S.conj().T)) > 1e-12 * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    w, V = np.linalg.eigh(S)
    norm = float(np.max(np.abs(w))) if n else 0.0
    if np.any(w < -1e-8 * max(norm, 1.0)):
        raise ValueError(f"matrix has negative eigenvalue {w.min():.3e}; not PSD")
    w = np.clip(w, 0.0, None)
    R = (V * np.sqrt(w)) @ V.conj().T
    if not np.iscomplexobj(S):
        R = R.real
    else:
        # keep exact Hermiticity against roundoff
        R = 0.5 * (R + R.conj().T)
    return R


def _check_antisymmetric(A):
    A = np.asarray(A)
    n = A.shape[0]
    if A.ndim != 2 or A.shape != (n, n):
        raise ValueError("pfaffian needs a square matrix")
    if n % 2:
        raise ValueError("pfaffian needs even dimension")
    scale = max(1.0, float(np.max(np.abs(A))) if n else 0.0)
    if n and np.max(np.abs(A + A.T)) > 1e-10 * scale:
        raise ValueError("matrix is not antisymmetric within tolerance")
    return A, n


def pfaffian_sign_logmag(A):
    """Pfaffian of an antisymmetric matrix as (sign, log|Pf|).

    Parlett–Reid tridiagonalization with partial pivoting; the factored return
    survives kernels whose Pfaffian over/underflows as a plain float.  sign is
    ±1 (or 0) for real input, a unit-modulus complex for complex input.
    log-magnitude is −inf for a singular matrix.
    """
    A, n = _check_antisymmetric(A)
    if n == 0:
        return 1.0, 0.0
    A = A.astype(complex if np.iscomplexobj(A) else float).copy()
    sign = 1.0 + 0j if np.iscomplexobj(A) else 1.0
    logmag = 0.0
    for k in range(0, n - 1, 2):
        # pivot: move the largest entry of column k into position (k+1, k)
        kp = k + 1 + int(np.argmax(np.abs(A[k + 1:, k])))
        if kp != k + 1:
            A[[k + 1, kp], k:] = A[[kp, k + 1], k:]
            A[k:, [k + 1, kp]] = A[k:, [kp, k + 1]]
            sign = -sign
        piv = A[k, k + 1]
        if piv == 0.0:
            return 0.0 * sign, -np.inf
        logmag += float(np.log(np.abs(piv)))
        sign = sign * (piv / np.abs(piv))
        if k + 2 < n:
            tau = A[k, k + 2:] / piv
            col = A[k + 2:, k + 1]
            A[k + 2:, k + 2:] += np.outer(tau, col)
            A[k + 2:, k + 2:] -= np.outer(col, tau)
    if not np.iscomplexobj(A):
        sign = float(np.real(sign))
    return sign, logmag


def pfaffian(A):
    """Pfaffian with the sign convention Pf([[0, a], [−a, 0]]) = a."""
    sign, logmag = pfaffian_sign_logmag(A)
    if logmag == -np.inf:
        return 0.0 if not np.iscomplexobj(np.asarray(A)) else 0.0 + 0j
    return sign * np.exp(logmag)
