"""Vector-level inequality checkers: Cauchy-Schwarz, Buzano, the extended
Buzano product inequality, mixed Schwarz, and the pointwise power
inequality for |<Tx,x>|^n.

Each checker returns an IneqCheck with both sides evaluated directly; no
checker renormalizes its inputs (a near-unit vector is an error, not a fix,
so caller bugs stay visible in property tests).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidOrder,
    NotUnit,
    TooFewVectors,
)
from .matcore import Matrix, Vector
from .spectral import _absop_arr

_UNIT_TOL = 1e-12
_QUADFORM_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class IneqCheck:
    """Evaluated inequality lhs <= rhs with slack = rhs - lhs."""

    lhs: float
    rhs: float
    holds: bool
    slack: float


def _finish(lhs: float, rhs: float, tol: float) -> IneqCheck:
    slack = rhs - lhs
    return IneqCheck(lhs, rhs, slack >= -tol, slack)


def _require_unit(e: Vector, name: str) -> None:
    nrm = np.linalg.norm(e.array)
    if abs(nrm - 1.0) > _UNIT_TOL:
        raise NotUnit(f"{name} must have unit norm, got {nrm!r}")


def _require_same_dim(*vs) -> None:
    dims = {v.dim for v in vs}
    if len(dims) != 1:
        raise DimensionMismatch(f"dimensions differ: {sorted(dims)}")


def check_cauchy_schwarz(x: Vector, y: Vector, tol: float = 1e-12) -> IneqCheck:
    """|<x,y>| <= ||x|| ||y||."""
    _require_same_dim(x, y)
    lhs = abs(np.vdot(y.array, x.array))
    rhs = np.linalg.norm(x.array) * np.linalg.norm(y.array)
    return _finish(float(lhs), float(rhs), tol)


def check_buzano(x: Vector, y: Vector, e: Vector, tol: float = 1e-12) -> IneqCheck:
    """|<x,e><e,y>| <= (|<x,y>| + ||x|| ||y||) / 2 for unit e.

    Delegates to the n = 2 case of the extended product inequality so the
    two agree bit for bit.
    """
    return check_buzano_extension([x, y], e, tol)


def check_buzano_extension(xs, e: Vector, tol: float = 1e-12) -> IneqCheck:
    """|prod_k <x_k,e>| <= (|<x_1,x_2> prod_{k>=3} <x_k,e>| + prod_k ||x_k||)/2.

    Requires unit e and at least two vectors; empty products are 1.
    """
    xs = list(xs)
    if len(xs) < 2:
        raise TooFewVectors(f"need at least 2 vectors, got {len(xs)}")
    _require_same_dim(*xs, e)
    _require_unit(e, "e")

    ev = e.array
    coeffs = [complex(np.vdot(ev, x.array)) for x in xs]  # <x_k, e>
    lhs = abs(np.prod(coeffs))

    tail = np.prod(coeffs[2:]) if len(coeffs) > 2 else 1.0
    head = complex(np.vdot(xs[1].array, xs[0].array))  # <x_1, x_2>
    norms = np.prod([np.linalg.norm(x.array) for x in xs])
    rhs = 0.5 * (abs(head * tail) + norms)
    return _finish(float(lhs), float(rhs), tol)


def _real_quadform(h: np.ndarray, v: np.ndarray, what: str) -> float:
    """<H v, v> for Hermitian PSD H; asserts the imaginary residue is noise."""
    val = complex(np.vdot(v, h @ v))
    scale = max(1.0, float(np.linalg.norm(h)) * float(np.vdot(v, v).real))
    if abs(val.imag) > _QUADFORM_IMAG_TOL * scale:
        raise ArithmeticError(f"{what}: imaginary residue {val.imag!r} too large")
    return val.real


def check_mixed_schwarz(m: Matrix, x: Vector, y: Vector, tol: float = 1e-12) -> IneqCheck:
    """|<Mx,y>|^2 <= <|M|x,x> <|M*|y,y>."""
    if not (m.dim == x.dim == y.dim):
        raise DimensionMismatch(f"dims differ: {m.dim}, {x.dim}, {y.dim}")
    arr = m.array
    lhs = abs(np.vdot(y.array, arr @ x.array)) ** 2
    abs_m = _absop_arr(arr)
    abs_mstar = _absop_arr(arr.conj().T)
    qa = _real_quadform(abs_m, x.array, "<|M|x,x>")
    qb = _real_quadform(abs_mstar, y.array, "<|M*|y,y>")
    return _finish(float(lhs), float(qa * qb), tol)


def check_th7_pointwise(
    m: Matrix, x: Vector, n: int, tol: float = 1e-12
) -> IneqCheck:
    """|<Mx,x>|^n <= 2^(1-n) |<M^n x, x>| + sum_k 2^-k ||M^k x|| ||M* x||^(n-k)
    for unit x and integer n >= 2."""
    if n < 2 or n != int(n):
        raise InvalidOrder(f"n must be an integer >= 2, got {n}")
    if m.dim != x.dim:
        raise DimensionMismatch(f"dims differ: {m.dim}, {x.dim}")
    _require_unit(x, "x")

    arr = m.array
    v = x.array
    lhs = abs(np.vdot(v, arr @ v)) ** n

    powx = [v]
    for _ in range(n):
        powx.append(arr @ powx[-1])
    adj_norm = float(np.linalg.norm(arr.conj().T @ v))
    rhs = 2.0 ** (1 - n) * abs(np.vdot(v, powx[n]))
    for k in range(1, n):
        rhs += 2.0**-k * float(np.linalg.norm(powx[k])) * adj_norm ** (n - k)
    return _finish(float(lhs), float(rhs), tol)
