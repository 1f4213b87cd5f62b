"""Brute-force oracles built from block-circulant matrices alone.

Everything here is computed by dense linear algebra on ``bcirc``
embeddings, with explicit DFT sums where a spectrum is needed; the
frequency-domain fast paths in :mod:`tubal_spectra.tproduct` and
:mod:`tubal_spectra.spectral` are never called, so agreement between the
two routes is evidence, not tautology.

``oracle_quadform_matrices`` turns the T-quadratic form into ``p`` ordinary
symmetric matrices by polarization: component ``r`` of ``F_A(X)`` equals
``x^T M_r x`` for ``x = unfold_mat(X)``.  ``oracle_psd_exact`` then answers
elementwise positive-semidefiniteness exactly (up to an eigenvalue
tolerance) and produces a re-verified witness when the answer is negative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError, TooLarge, TubalError
from .tensor3 import (as_matslice, as_tensor3, bcirc, fold, fold_mat,
                      require_square, shift_columns, transpose, unfold,
                      unfold_mat)
from .tubal import tube_action

ELEMENTWISE_PSD = "ELEMENTWISE_PSD"
NOT_ELEMENTWISE_PSD = "NOT_ELEMENTWISE_PSD"


@dataclass
class CheckResult:
    """One verification outcome.

    ``threshold is None`` marks an informational entry whose ``passed`` is
    also ``None``; such entries never gate a report.
    """

    check: str
    residual: float
    threshold: float | None
    passed: bool | None
    note: str = ""

    def as_dict(self):
        return {"check": self.check, "residual": self.residual,
                "threshold": self.threshold, "pass": self.passed,
                "note": self.note}


@dataclass
class ExactPsdResult:
    """Exact elementwise PSD answer from the polarization matrices.

    ``component`` is the 1-based tube component whose matrix attains the
    most negative eigenvalue; ``witness`` (when present) is a matrix slice
    with ``F_A(witness)[component] == witness_value < -tol``.
    """

    label: str
    min_eigenvalue: float
    component: int
    witness: np.ndarray | None = None
    witness_value: float | None = None


def oracle_tprod(A, B):
    """T-product by the defining dense route ``fold(bcirc(A) @ unfold(B))``."""
    A, B = as_tensor3(A), as_tensor3(B)
    if A.shape[1] != B.shape[0] or A.shape[2] != B.shape[2]:
        raise ShapeError(f"incompatible shapes: {A.shape} * {B.shape}")
    return fold(bcirc(A) @ unfold(B), A.shape[2])


def _quadform_dense(bcA, X, p):
    """Dense T-quadratic form: both products through ``bcirc``."""
    x = unfold_mat(X)
    Y = fold_mat(bcA @ x, p)
    lhs = bcirc(transpose(np.ascontiguousarray(X[:, None, :])))
    return fold(lhs @ unfold(Y[:, None, :]), p)[0, 0, :]


def oracle_quadform_dense(A, X):
    """T-quadratic form of ``A`` at ``X`` by the dense route."""
    A = require_square(A)
    X = as_matslice(X)
    if X.shape != (A.shape[0], A.shape[2]):
        raise ShapeError(
            f"matrix slice of shape {X.shape} does not match tensor of "
            f"shape {A.shape}")
    return _quadform_dense(bcirc(A), X, A.shape[2])


def oracle_quadform_matrices(A):
    """Polarization matrices of the T-quadratic form.

    Returns a ``(p, n*p, n*p)`` array ``M`` with
    ``F_A(X)[r] == unfold_mat(X) @ M[r] @ unfold_mat(X)`` for every ``X``;
    each ``M[r]`` is symmetric.
    """
    A = require_square(A)
    n, _, p = A.shape
    N = n * p
    bcA = bcirc(A)
    basis_vals = np.empty((N, p))
    for i in range(N):
        e = np.zeros(N)
        e[i] = 1.0
        basis_vals[i] = _quadform_dense(bcA, fold_mat(e, p), p)
    M = np.empty((p, N, N))
    for i in range(N):
        M[:, i, i] = basis_vals[i]
    for i in range(N):
        ei = np.zeros(N)
        ei[i] = 1.0
        for j in range(i + 1, N):
            ej = np.zeros(N)
            ej[j] = 1.0
            fij = _quadform_dense(bcA, fold_mat(ei + ej, p), p)
            cross = 0.5 * (fij - basis_vals[i] - basis_vals[j])
            M[:, i, j] = cross
            M[:, j, i] = cross
    return M


def oracle_psd_exact(A, tol=1e-10, max_np=64):
    """Exact elementwise PSD classification of the T-quadratic form.

    Eigendecomposes every polarization matrix; the form is elementwise PSD
    iff all of them are PSD.  When some eigenvalue falls below ``-tol`` the
    minimizing eigenvector is folded into a witness matrix slice and
    re-verified through the dense form before being returned.  Guarding the
    ``O((n p)^3)`` cost, inputs with ``n * p > max_np`` raise
    :class:`TooLarge`.
    """
    A = require_square(A)
    n, _, p = A.shape
    if n * p > max_np:
        raise TooLarge(
            f"exact PSD oracle is limited to n*p <= {max_np}, got {n * p}")
    M = oracle_quadform_matrices(A)
    min_eig = np.inf
    arg = (0, None)
    for r in range(p):
        w, V = np.linalg.eigh(M[r])
        if float(w[0]) < min_eig:
            min_eig = float(w[0])
            arg = (r, V[:, 0].copy())
    r, vec = arg
    if min_eig >= -tol:
        return ExactPsdResult(label=ELEMENTWISE_PSD, min_eigenvalue=min_eig,
                              component=r + 1)
    witness = fold_mat(vec, p)
    value = float(_quadform_dense(bcirc(A), witness, p)[r])
    if value >= -tol:
        raise TubalError(
            "internal inconsistency: PSD witness failed re-evaluation")
    return ExactPsdResult(label=NOT_ELEMENTWISE_PSD, min_eigenvalue=min_eig,
                          component=r + 1, witness=witness,
                          witness_value=value)


def _dense_freq_diagonals(D):
    """Diagonals of the frequency slices of an f-diagonal tensor, by
    explicit DFT sums (no FFT library)."""
    n, _, p = D.shape
    diag_tubes = np.vstack([D[j, j, :] for j in range(n)])
    k = np.arange(p)
    W = np.exp(-2j * np.pi * np.outer(k, k) / p)
    return diag_tubes @ W.T  # (n, p) complex


def oracle_ted_check(A, result, tol=1e-10):
    """Recompute every eigendecomposition invariant with dense arithmetic.

    Returns a list of :class:`CheckResult`: reconstruction and
    orthogonality of the ``bcirc`` embeddings, f-diagonality and
    T-symmetry of the diagonal factor, all shifted eigenpair residuals, and
    both ordering invariants (per-frequency and first-component).
    """
    A = require_square(A)
    n, _, p = A.shape
    U, D = result.u, result.d
    bcA, bcU, bcD = bcirc(A), bcirc(U), bcirc(D)

    checks = []
    scale = max(1.0, float(np.linalg.norm(bcA)))
    recon = float(np.linalg.norm(bcA - bcU @ bcD @ bcU.T)) / scale
    checks.append(CheckResult("reconstruction", recon, tol, recon <= tol))

    orth = float(np.linalg.norm(bcU.T @ bcU - np.eye(n * p)))
    checks.append(CheckResult("orthogonality", orth, tol, orth <= tol))

    off = ~np.eye(n, dtype=bool)
    fdiag = float(np.max(np.abs(D[off, :]), initial=0.0))
    checks.append(CheckResult("d_f_diagonal", fdiag, tol, fdiag <= tol))

    tsym = float(np.max(np.abs(bcD - bcD.T)))
    checks.append(CheckResult("d_t_symmetric", tsym, tol, tsym <= tol))

    worst = 0.0
    for j in range(n):
        d = result.eigentuples[j]
        for k in range(p):
            X = shift_columns(U[:, j, :], k)
            resid = float(np.linalg.norm(
                fold_mat(bcA @ unfold_mat(X), p) - tube_action(d, X)))
            worst = max(worst, resid)
    checks.append(CheckResult("eigenpair_residuals", worst, 1e-9,
                              worst <= 1e-9))

    diags = _dense_freq_diagonals(D)  # entry (j, k): eigenvalue j of slice k
    imag = float(np.max(np.abs(diags.imag)))
    lam = diags.real
    drop = float(np.max(lam[1:, :] - lam[:-1, :], initial=0.0))
    freq_viol = max(imag, drop)
    checks.append(CheckResult("frequency_ordering", freq_viol, 1e-10,
                              freq_viol <= 1e-10))

    firsts = result.eigentuples[:, 0]
    first_viol = float(np.max(firsts[1:] - firsts[:-1], initial=0.0))
    checks.append(CheckResult("first_component_ordering", first_viol, 1e-12,
                              first_viol <= 1e-12))
    return checks
