"""The tubal-scalar ring and its circulant-matrix representation.

A *tube* is a length-``p`` vector.  Tubes form a commutative ring under
entrywise addition and the product ``a (*) b = circ(a) @ b``, which is
circular convolution; the multiplicative unity is ``e = (1, 0, ..., 0)``.
``circ(a)`` is the ``p x p`` circulant matrix whose first column is ``a``,
so ``circ`` is a ring homomorphism onto circulant matrices and the DFT
diagonalizes every product.

The DFT convention is numpy's: unnormalized forward transform, inverse
scaled by ``1/p``.  The eigenvalues of ``circ(a)`` are exactly
``np.fft.fft(a)``.

Tubes also act on matrices: ``tube_action(a, X) = X @ circ(a)`` treats each
row of ``X`` as a tube and convolves it with ``a``.
"""

from __future__ import annotations

from itertools import product as _iter_product
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NotCirculant

#: Sentinel returned by :func:`tube_le` when two tubes are not elementwise
#: comparable in either direction.
INCOMPARABLE = "incomparable"


def as_tube(a):
    """Coerce ``a`` to a 1-D tube array (float64, or complex128 if complex)."""
    a = np.asarray(a)
    if a.ndim != 1 or a.size == 0:
        raise DimensionMismatch(
            f"a tube must be a nonempty 1-D array, got shape {a.shape}")
    if np.iscomplexobj(a):
        return a.astype(np.complex128, copy=False)
    return a.astype(np.float64, copy=False)


def unit_tube(p):
    """The ring unity ``e = (1, 0, ..., 0)`` of length ``p``."""
    e = np.zeros(p)
    e[0] = 1.0
    return e


def circ(a):
    """Circulant matrix of ``a``: entry ``(i, j)`` is ``a[(i - j) % p]``."""
    a = as_tube(a)
    p = a.shape[0]
    idx = (np.arange(p)[:, None] - np.arange(p)[None, :]) % p
    return a[idx]


def circ_inv(M, tol=1e-10):
    """Recover the defining tube from a circulant matrix.

    Raises :class:`NotCirculant` if ``M`` is not square or deviates from the
    circulant rebuilt from its first column by more than ``tol`` (max-abs).
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise NotCirculant(f"expected a square matrix, got shape {M.shape}")
    a = M[:, 0].copy()
    residual = float(np.max(np.abs(M - circ(a))))
    if residual > tol:
        raise NotCirculant(
            f"matrix deviates from circulant structure by {residual:.3e} "
            f"(tol {tol:.3e})")
    return a


def _check_same_length(a, b):
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(
            f"tube lengths differ: {a.shape[0]} vs {b.shape[0]}")


def tube_add(a, b):
    """Ring addition (entrywise)."""
    a, b = as_tube(a), as_tube(b)
    _check_same_length(a, b)
    return a + b


def tube_mul(a, b):
    """Ring product ``circ(a) @ b`` (circular convolution, commutative)."""
    a, b = as_tube(a), as_tube(b)
    _check_same_length(a, b)
    return circ(a) @ b


def tube_action(a, X):
    """Act on the rows of ``X``: returns ``X @ circ(a)``.

    ``X`` must be 2-D with ``X.shape[1] == len(a)``.
    """
    a = as_tube(a)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {X.shape}")
    if X.shape[1] != a.shape[0]:
        raise DimensionMismatch(
            f"matrix has {X.shape[1]} columns but the tube has length "
            f"{a.shape[0]}")
    return X @ circ(a)


def tube_abs(a):
    """Entrywise absolute value."""
    return np.abs(as_tube(a))


def tube_transpose(a):
    """Index reversal ``(a_1, a_p, a_{p-1}, ..., a_2)``.

    Satisfies ``circ(tube_transpose(a)) == circ(a).T``.
    """
    a = as_tube(a)
    return np.concatenate([a[:1], a[1:][::-1]])


def tube_le(a, b, tol=0.0):
    """Three-valued elementwise comparison.

    Returns ``True`` if ``a <= b`` elementwise (within ``tol``), ``False``
    if ``b <= a`` elementwise, and :data:`INCOMPARABLE` otherwise.  Equal
    tubes compare ``True``.
    """
    a, b = as_tube(a), as_tube(b)
    _check_same_length(a, b)
    le = bool(np.all(a <= b + tol))
    ge = bool(np.all(b <= a + tol))
    if le:
        return True
    if ge:
        return False
    return INCOMPARABLE


def tube_dft(a):
    """Forward DFT of a tube (the eigenvalues of ``circ(a)``)."""
    return np.fft.fft(as_tube(a))


def tube_idft(ah):
    """Inverse DFT (``1/p``-scaled)."""
    ah = np.asarray(ah, dtype=np.complex128)
    if ah.ndim != 1 or ah.size == 0:
        raise DimensionMismatch(
            f"a tube spectrum must be a nonempty 1-D array, got shape "
            f"{ah.shape}")
    return np.fft.ifft(ah)


class SqrtRoot(NamedTuple):
    """One tubal square root, with a flag for elementwise nonnegativity."""

    tube: np.ndarray
    nonnegative: bool


def tubal_sqrt_all(b, tol=1e-10):
    """Enumerate all real tubal square roots of a real tube ``b``.

    Every root is a conjugate-symmetric choice of branch for the DFT values
    ``sqrt(fft(b))`` (principal square root or its negation, per bin), so
    at most ``2 ** (p // 2 + 1)`` sign patterns are tried.  Candidates whose
    inverse transform is not real, or whose defining residual
    ``max|a (*) a - b|`` exceeds ``tol``, are discarded; exact duplicates
    (which arise from zero bins) are removed.  The ``nonnegative`` flag is
    ``True`` when every entry is ``>= -tol``.
    """
    b = as_tube(b)
    if np.iscomplexobj(b):
        raise ValueError("tubal_sqrt_all expects a real tube")
    p = b.shape[0]
    h = p // 2 + 1
    bh = np.fft.fft(b)
    principal = np.sqrt(bh[:h].astype(np.complex128))
    roots = []
    for signs in _iter_product((1.0, -1.0), repeat=h):
        full = np.zeros(p, dtype=np.complex128)
        full[:h] = np.asarray(signs) * principal
        for k in range(1, (p - 1) // 2 + 1):
            full[p - k] = np.conj(full[k])
        a = np.fft.ifft(full)
        if np.max(np.abs(a.imag)) > max(tol, 1e-12):
            continue
        a = a.real
        if np.max(np.abs(tube_mul(a, a) - b)) > tol:
            continue
        if any(np.array_equal(a, r.tube) for r in roots):
            continue
        roots.append(SqrtRoot(a, bool(np.all(a >= -tol))))
    return roots


# --- text serialization ----------------------------------------------------

def _fmt(x):
    # 17 significant digits: float64 values round-trip exactly.
    return f"{float(x):.17g}"


def write_tube(path, a):
    """Write ``a`` in the tube text format (``TUBE 1`` header)."""
    a = as_tube(a)
    if np.iscomplexobj(a):
        raise ValueError("tube files store real tubes only")
    body = " ".join(_fmt(v) for v in a)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"TUBE 1\n{a.shape[0]}\n{body}\n")


def read_tube(path):
    """Read a tube written by :func:`write_tube`."""
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh.read().splitlines() if ln.strip()]
    if not lines or lines[0] != "TUBE 1":
        raise ValueError(f"{path}: expected 'TUBE 1' header")
    try:
        p = int(lines[1])
        values = [float(tok) for tok in " ".join(lines[2:]).split()]
    except (IndexError, ValueError) as exc:
        raise ValueError(f"{path}: malformed tube file: {exc}") from exc
    if p <= 0 or len(values) != p:
        raise ValueError(
            f"{path}: expected {p} values, found {len(values)}")
    return np.asarray(values, dtype=np.float64)
