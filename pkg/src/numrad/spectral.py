"""Hermitian eigensolver and spectral functions: operator norm ||T||,
matrix absolute value |T| = (T*T)^(1/2), largest eigenvalue.

Two eigenvalue paths exist on purpose:

* ``hermitian_eig`` is a self-contained cyclic complex Jacobi solver. It is
  the reference implementation: unconditionally accurate on Hermitian input
  at the desk-scale dimensions this package targets (n <= 64), with no
  dependency on LAPACK behaviour.
* The private ``_eigmax_batch`` / ``_eigh_fast`` kernels back the public
  spectral functions and the rotation-sweep hot loop. They use closed forms
  for n <= 3 and ``numpy.linalg`` above that. Property tests pin agreement
  between the two paths to ~1e-12 relative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NotHermitian
from .matcore import Matrix

DEFAULT_JACOBI_TOL = 1e-13
_JACOBI_SWEEP_CAP = 60
_HERMITICITY_RTOL = 1e-12


@dataclass(frozen=True)
class HermitianEigen:
    """Full eigendecomposition of a Hermitian matrix.

    values: real eigenvalues sorted ascending.
    vectors: unitary Matrix whose k-th column is the eigenvector of values[k].
    """

    values: np.ndarray
    vectors: Matrix


def _check_hermitian(arr: np.ndarray, what: str) -> np.ndarray:
    """Validate near-Hermitian input, return the symmetrized (H+H*)/2."""
    fro = np.linalg.norm(arr)
    asym = np.linalg.norm(arr - arr.conj().T)
    if asym > _HERMITICITY_RTOL * max(fro, 1e-300):
        raise NotHermitian(
            f"{what}: asymmetry {asym:.3e} exceeds {_HERMITICITY_RTOL:.0e} * ||H||_F"
        )
    return (arr + arr.conj().T) / 2.0


def hermitian_eig(h: Matrix, tol: float = DEFAULT_JACOBI_TOL) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
    rotations.

    Each rotation is a 2x2 unitary similarity annihilating one off-diagonal
    entry; sweeps repeat until the off-diagonal Frobenius mass drops below
    tol * ||H||_F (capped at 60 sweeps, then NoConvergence).
    """
    a = _check_hermitian(np.asarray(h.array), "hermitian_eig")
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    fro = np.linalg.norm(a)
    if n == 1 or fro == 0.0:
        values = np.sort(np.diag(a).real)
        return HermitianEigen(_frozen(values), Matrix(v))

    a = a.copy()
    offdiag = ~np.eye(n, dtype=bool)
    for _ in range(_JACOBI_SWEEP_CAP):
        off = np.linalg.norm(a[offdiag])
        if off <= tol * fro:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                beta = abs(b)
                if beta == 0.0:
                    continue
                # Phase out b, then a real Jacobi rotation on [[ap, |b|], [|b|, aq]].
                phase = b / beta
                tau = (a[q, q].real - a[p, p].real) / (2.0 * beta)
                t = np.sign(tau) if tau != 0.0 else 1.0
                t = -t / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                w = np.array([[c * phase, -s * phase], [s, c]], dtype=np.complex128)
                a[:, [p, q]] = a[:, [p, q]] @ w
                a[[p, q], :] = w.conj().T @ a[[p, q], :]
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, [p, q]] = v[:, [p, q]] @ w
    else:
        raise NoConvergence(f"Jacobi sweep cap {_JACOBI_SWEEP_CAP} exceeded")

    values = np.diag(a).real
    order = np.argsort(values, kind="stable")
    return HermitianEigen(_frozen(values[order]), Matrix(v[:, order]))


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=np.float64, copy=True)
    out.setflags(write=False)
    return out


# ---------------------------------------------------------------------------
# Fast kernels. Closed forms for n <= 3, LAPACK above.
# ---------------------------------------------------------------------------


def _eigmax_batch(h: np.ndarray) -> np.ndarray:
    """Largest eigenvalue of each Hermitian matrix in a (..., n, n) stack."""
    n = h.shape[-1]
    if n == 1:
        return h[..., 0, 0].real.copy()
    if n == 2:
        a = h[..., 0, 0].real
        d = h[..., 1, 1].real
        return 0.5 * (a + d) + np.hypot(0.5 * (a - d), np.abs(h[..., 0, 1]))
    if n == 3:
        return _eigmax3(h)
    return np.linalg.eigvalsh(h)[..., -1]


def _eigmax3(h: np.ndarray) -> np.ndarray:
    """Largest eigenvalue of 3x3 Hermitian matrices via the trigonometric
    (Cardano) form of the characteristic cubic.

    The extreme root q + 2p*cos(phi/3) with phi = arccos(det(B)/2) in
    [0, pi] is numerically stable for the *largest* eigenvalue.
    """
    h00 = h[..., 0, 0].real
    h11 = h[..., 1, 1].real
    h22 = h[..., 2, 2].real
    h01 = h[..., 0, 1]
    h02 = h[..., 0, 2]
    h12 = h[..., 1, 2]

    q = (h00 + h11 + h22) / 3.0
    p1 = np.abs(h01) ** 2 + np.abs(h02) ** 2 + np.abs(h12) ** 2
    d0 = h00 - q
    d1 = h11 - q
    d2 = h22 - q
    p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1
    p = np.sqrt(p2 / 6.0)
    safe = np.where(p > 0.0, p, 1.0)

    b00 = d0 / safe
    b11 = d1 / safe
    b22 = d2 / safe
    b01 = h01 / safe
    b02 = h02 / safe
    b12 = h12 / safe
    det = (
        b00 * (b11 * b22 - (b12 * np.conj(b12)).real)
        - (b01 * (np.conj(b01) * b22 - b12 * np.conj(b02))).real
        + (b02 * (np.conj(b01) * np.conj(b12) - b11 * np.conj(b02))).real
    )
    # det is real for Hermitian input up to rounding; the first term already is.
    r = np.clip(np.real(det) / 2.0, -1.0, 1.0)
    lam = q + 2.0 * p * np.cos(np.arccos(r) / 3.0)
    lam = np.where(p2 > 0.0, lam, q)
    # r -> -1 means the top two eigenvalues nearly coincide; there the trig
    # form loses ~sqrt(eps) accuracy, so hand those few off to LAPACK.
    near = (1.0 + r) < 1e-4
    if np.any(near):
        lam = np.array(lam, copy=True)
        lam[near] = np.linalg.eigvalsh(h[near])[..., -1]
    return lam


def _eigh_fast(h: np.ndarray):
    """(values, vectors) of a single Hermitian matrix; fast path."""
    return np.linalg.eigh(h)


def _opnorm_arr(arr: np.ndarray) -> float:
    """Operator norm of a raw array: sqrt(lambda_max(M* M)), clamped at 0."""
    fro2 = float(np.linalg.norm(arr) ** 2)
    if fro2 == 0.0:
        return 0.0
    mhm = arr.conj().T @ arr
    top = float(_eigmax_batch(mhm[None])[0])
    return float(np.sqrt(max(top, 0.0)))


def _absop_arr(arr: np.ndarray) -> np.ndarray:
    """(M* M)^(1/2) of a raw array; Hermitian PSD result."""
    mhm = arr.conj().T @ arr
    mhm = (mhm + mhm.conj().T) / 2.0
    w, v = _eigh_fast(mhm)
    # M*M is PSD in exact arithmetic; negative residue is rounding noise.
    root = np.sqrt(np.maximum(w, 0.0))
    out = (v * root) @ v.conj().T
    return (out + out.conj().T) / 2.0


# ---------------------------------------------------------------------------
# Public spectral functions.
# ---------------------------------------------------------------------------


def lambda_max(h: Matrix) -> float:
    """Largest eigenvalue of a Hermitian matrix.

    Agrees with max(hermitian_eig(h).values) to ~1e-12 relative; the
    Hermiticity precondition is enforced the same way.
    """
    a = _check_hermitian(np.asarray(h.array), "lambda_max")
    return float(_eigmax_batch(a[None])[0])


def operator_norm(m: Matrix) -> float:
    """sqrt of the largest eigenvalue of M* M (the largest singular value)."""
    return _opnorm_arr(np.asarray(m.array))


def abs_op(m: Matrix) -> Matrix:
    """Matrix absolute value (M* M)^(1/2).

    Result is Hermitian positive semidefinite with abs_op(m) @ abs_op(m)
    matching M* M to ~1e-9 * ||M||_F^2.
    """
    return Matrix(_absop_arr(np.asarray(m.array)))
