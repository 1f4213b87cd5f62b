"""T-eigendecomposition of T-symmetric tensors and PSD certification.

``ted`` factors a T-symmetric ``A`` as ``U * D * U^T`` with ``U``
orthogonal and ``D`` f-diagonal, by solving a Hermitian eigenproblem on
each frequency slice ``k <= p // 2`` and mirroring.  The canonical form is
fixed by three choices: eigenvalues sorted descending within every slice,
each eigenvector's largest-magnitude entry made real and positive, and
conjugate bins mirrored exactly.  Eigentuple ``j`` is the index reversal of
the ``j``-th diagonal tube of ``D``, so that
``A * U_j^[k] = d_j act U_j^[k]`` for every cyclic column shift ``k``.

The first component of an eigentuple is the mean of its per-slice
eigenvalues, so first components always inherit the per-slice descending
order; the full elementwise order between consecutive eigentuples may hold,
fail, or be incomparable, and ``TedResult`` reports which.

``psd_spectral`` classifies the T-quadratic form of ``A`` from the spatial
entries of its eigentuples (positive / nonnegative within ``tol``).  This
criterion is one-sided: quadratic forms take values in tubes, where the
elementwise order is partial, and entrywise-nonnegative eigentuples are not
necessary for entrywise-nonnegative form values, nor sufficient in the
strict sense.  The verdict therefore also records the smallest frequency
eigenvalue, which certifies classical PSD-ness of the first form component,
and the exact elementwise answer is available separately from
:func:`tubal_spectra.oracle.oracle_psd_exact`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotTSymmetric, ShapeError, ZeroMatrix
from .tensor3 import (as_matslice, identity, is_t_symmetric, require_square,
                      shift_columns, transpose)
from .transform import freq_from_half, from_freq, hermitize_check, to_freq
from .tproduct import tprod, tprod_mat
from .tubal import INCOMPARABLE, tube_action, tube_le, tube_transpose

SPECTRAL_PD = "PD"
SPECTRAL_PSD = "PSD"
SPECTRAL_NOT_PSD = "NOT_PSD_BY_CRITERION"


@dataclass
class TedDiagnostics:
    """Residuals certifying one decomposition.

    ``eigenpair[j, k]`` is ``||A * U_j^[k] - d_j act U_j^[k]||_F`` for the
    ``j``-th eigentuple and ``k``-th column shift (unit-norm eigenmatrices,
    so the values are absolute).
    """

    reconstruction: float
    orthogonality: float
    eigenpair: np.ndarray
    eigenpair_max: float


@dataclass
class TedResult:
    """Canonical T-eigendecomposition ``A = u * d * u^T``.

    ``eigentuples`` holds the ``n`` eigentuples as rows (index-reversed
    diagonal tubes of ``d``); ``frequency_eigenvalues[:, k]`` are the
    descending eigenvalues of frequency slice ``k``.
    ``first_components_sorted`` is computed with roundoff slack;
    ``elementwise_chain`` is ``True``/``False``/``"incomparable"``.
    """

    u: np.ndarray
    d: np.ndarray
    eigentuples: np.ndarray
    frequency_eigenvalues: np.ndarray
    residuals: TedDiagnostics
    first_components_sorted: bool
    elementwise_chain: object


@dataclass
class PsdVerdict:
    """Outcome of the spectral PSD criterion, plus optional exact data.

    ``spectral_class`` is ``PD``, ``PSD`` or ``NOT_PSD_BY_CRITERION`` from
    the spatial eigentuple entries at tolerance ``tol``.
    ``min_frequency_eigenvalue`` certifies the classical (first form
    component) side.  ``exact_class`` and ``witness`` are filled in only
    when the elementwise oracle is consulted.
    """

    spectral_class: str
    smallest_eigentuple: np.ndarray
    min_entry: float
    min_frequency_eigenvalue: float
    tol: float
    exact_class: str | None = None
    witness: np.ndarray | None = None


def _canonical_phase(V):
    """Rotate each column so its largest-magnitude entry is real positive."""
    for j in range(V.shape[1]):
        i = int(np.argmax(np.abs(V[:, j])))
        z = V[i, j]
        mag = abs(z)
        if mag > 0.0:
            V[:, j] = V[:, j] * (np.conj(z) / mag)
    return V


def ted(A, tol=None):
    """T-eigendecomposition of a T-symmetric tensor, in canonical form.

    ``tol`` is the symmetry tolerance (``None`` means relative to
    ``max|A|``); it is validated both spatially and on the frequency
    slices, which must be Hermitian.
    """
    A = require_square(A)
    n, _, p = A.shape
    if not is_t_symmetric(A, tol):
        raise NotTSymmetric("tensor is not T-symmetric within tolerance")
    F = to_freq(A)
    htol = 1e-10 * max(1.0, float(np.max(np.abs(F.slices))))
    if not hermitize_check(F, htol):
        raise NotTSymmetric("frequency slices are not Hermitian")

    h = p // 2 + 1
    uh = np.empty((n, n, h), dtype=np.complex128)
    dh = np.zeros((n, n, h), dtype=np.complex128)
    freq_eigs = np.empty((n, p))
    for k in range(h):
        M = F.slice(k)
        if k == 0 or (p % 2 == 0 and k == p // 2):
            H = 0.5 * (M.real + M.real.T)
        else:
            H = 0.5 * (M + M.conj().T)
        w, V = np.linalg.eigh(H)
        w, V = w[::-1], np.ascontiguousarray(V[:, ::-1])
        V = _canonical_phase(V.astype(np.complex128))
        uh[:, :, k] = V
        dh[:, :, k] = np.diag(w.astype(np.complex128))
        freq_eigs[:, k] = w
        if 0 < k < p - k:
            freq_eigs[:, p - k] = w
    U = from_freq(freq_from_half(uh, p))
    D = from_freq(freq_from_half(dh, p))

    eigentuples = np.vstack([tube_transpose(D[j, j, :]) for j in range(n)])

    recon = float(np.linalg.norm(A - tprod(tprod(U, D), transpose(U))))
    normA = float(np.linalg.norm(A))
    if normA > 0.0:
        recon /= normA
    orth = float(np.linalg.norm(tprod(transpose(U), U) - identity(n, p)))
    pair = np.empty((n, p))
    for j in range(n):
        for k in range(p):
            pair[j, k] = verify_eigenpair(
                A, eigentuples[j], shift_columns(U[:, j, :], k))

    slack = 1e-12 * max(1.0, float(np.max(np.abs(eigentuples))))
    firsts = eigentuples[:, 0]
    sorted_ok = bool(np.all(firsts[1:] <= firsts[:-1] + slack))
    verdicts = [tube_le(eigentuples[j + 1], eigentuples[j])
                for j in range(n - 1)]
    if all(v is True for v in verdicts):
        chain = True
    elif any(v == INCOMPARABLE for v in verdicts):
        chain = INCOMPARABLE
    else:
        chain = False

    return TedResult(
        u=U, d=D, eigentuples=eigentuples, frequency_eigenvalues=freq_eigs,
        residuals=TedDiagnostics(recon, orth, pair, float(pair.max())),
        first_components_sorted=sorted_ok, elementwise_chain=chain)


def eigenmatrices(result, j):
    """All ``p`` eigenmatrices of eigentuple ``j`` (1-based): the cyclic
    column shifts of lateral slice ``j`` of ``u``."""
    n, _, p = result.u.shape
    if int(j) != j or not 1 <= j <= n:
        raise IndexError(f"eigentuple index must be in 1..{n}, got {j!r}")
    Uj = result.u[:, int(j) - 1, :]
    return [shift_columns(Uj, k) for k in range(p)]


def verify_eigenpair(A, d, X):
    """Residual ``||A * X - d act X||_F / ||X||_F`` for a candidate pair."""
    A = require_square(A)
    X = as_matslice(X)
    norm = float(np.linalg.norm(X))
    if norm == 0.0:
        raise ZeroMatrix("eigenpair residual is undefined for a zero matrix")
    return float(np.linalg.norm(tprod_mat(A, X) - tube_action(d, X))) / norm


def extremal_eigentuples(result):
    """The first (largest) and last (smallest) eigentuples of a ``TedResult``."""
    return result.eigentuples[0].copy(), result.eigentuples[-1].copy()


def quadform(A, X):
    """T-quadratic form ``F_A(X) = X^T * A * X`` as a tube.

    ``X`` is an ``(n, p)`` matrix slice embedded as an ``n x 1 x p`` tensor.
    """
    A = require_square(A)
    X = as_matslice(X)
    if X.shape != (A.shape[0], A.shape[2]):
        raise ShapeError(
            f"matrix slice of shape {X.shape} does not match tensor of "
            f"shape {A.shape}")
    Xt = X[:, None, :]
    return tprod(tprod(transpose(Xt), A), Xt)[0, 0, :]


def symmetrize(A):
    """``A + A^T``, which is exactly T-symmetric.

    Its quadratic form is ``F_A + reverse(F_A)`` (the tensor transpose of a
    ``1 x 1 x p`` tensor reverses the tube), so the *first* form component
    doubles, matching the classical identity ``x^T (A + A^T) x = 2 x^T A x``;
    the other components symmetrize rather than double.
    """
    A = require_square(A)
    return A + transpose(A)


def expand_in_eigenbasis(result, X):
    """Coefficients of ``X`` in the orthonormal eigenmatrix basis.

    Returns ``alpha`` with ``alpha[j, k] = <U_j^[k], X>_F``; summing
    ``alpha[j, k] * U_j^[k]`` reconstructs ``X`` and
    ``sum(alpha ** 2) == ||X||_F ** 2``.
    """
    X = as_matslice(X)
    n, _, p = result.u.shape
    if X.shape != (n, p):
        raise ShapeError(
            f"matrix slice of shape {X.shape} does not match factors of "
            f"shape {result.u.shape}")
    alpha = np.empty((n, p))
    for j in range(n):
        Uj = result.u[:, j, :]
        for k in range(p):
            alpha[j, k] = float(np.sum(shift_columns(Uj, k) * X))
    return alpha


def psd_spectral(A, tol=1e-10, auto_symmetrize=False, symmetry_tol=None):
    """Classify the T-quadratic form of ``A`` by the spectral criterion.

    ``PD`` when every entry of every eigentuple exceeds ``tol``, ``PSD``
    when every entry is at least ``-tol``, else ``NOT_PSD_BY_CRITERION``.
    Non-T-symmetric input raises :class:`NotTSymmetric` unless
    ``auto_symmetrize`` is set, in which case ``(A + A^T) / 2`` is
    classified instead; that tensor shares the first form component
    (the classical quadratic form) with ``A``.
    """
    A = require_square(A)
    if not is_t_symmetric(A, symmetry_tol):
        if not auto_symmetrize:
            raise NotTSymmetric(
                "tensor is not T-symmetric; pass auto_symmetrize=True to "
                "classify (A + A^T) / 2 instead")
        A = 0.5 * symmetrize(A)
    result = ted(A, symmetry_tol)
    min_entry = float(result.eigentuples.min())
    if min_entry > tol:
        cls = SPECTRAL_PD
    elif min_entry >= -tol:
        cls = SPECTRAL_PSD
    else:
        cls = SPECTRAL_NOT_PSD
    return PsdVerdict(
        spectral_class=cls,
        smallest_eigentuple=result.eigentuples[-1].copy(),
        min_entry=min_entry,
        min_frequency_eigenvalue=float(result.frequency_eigenvalues.min()),
        tol=tol)
