"""Dense complex matrix/vector kernel: construction, arithmetic, adjoints,
inner products and powers.

Values are immutable after construction and every operation is a pure
function, so everything here is safe to share across concurrent workers.

Convention: the inner product is linear in the FIRST argument and
conjugate-linear in the second, i.e. inner(x, y) = sum_i x[i] * conj(y[i]).
"""

from __future__ import annotations

from typing import Iterable, Union

import numpy as np

from .errors import DimensionMismatch, NonFiniteEntry, NotSquare


def _validate_finite(arr: np.ndarray) -> None:
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise NonFiniteEntry("matrix/vector entries must be finite (no NaN/Inf)")


class Matrix:
    """Immutable square complex matrix."""

    __slots__ = ("_a",)

    def __init__(self, entries: Union[Iterable, np.ndarray]):
        a = np.array(entries, dtype=np.complex128, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise NotSquare(f"expected a square 2-D array, got shape {a.shape}")
        _validate_finite(a)
        a.setflags(write=False)
        self._a = a

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the underlying complex128 array."""
        return self._a

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and np.array_equal(self._a, other._a)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Matrix({self._a.tolist()!r})"


class Vector:
    """Immutable complex vector."""

    __slots__ = ("_a",)

    def __init__(self, entries: Union[Iterable, np.ndarray]):
        a = np.array(entries, dtype=np.complex128, copy=True)
        if a.ndim != 1 or a.shape[0] < 1:
            raise DimensionMismatch(f"expected a 1-D array, got shape {a.shape}")
        _validate_finite(a)
        a.setflags(write=False)
        self._a = a

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    @property
    def array(self) -> np.ndarray:
        return self._a

    def __eq__(self, other) -> bool:
        return isinstance(other, Vector) and np.array_equal(self._a, other._a)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Vector({self._a.tolist()!r})"


def identity(dim: int) -> Matrix:
    return Matrix(np.eye(dim, dtype=np.complex128))


def zero(dim: int) -> Matrix:
    return Matrix(np.zeros((dim, dim), dtype=np.complex128))


def adjoint(m: Matrix) -> Matrix:
    """Conjugate transpose; an exact involution."""
    return Matrix(m.array.conj().T)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a.dim != b.dim:
        raise DimensionMismatch(f"matmul: {a.dim} != {b.dim}")
    return Matrix(a.array @ b.array)


def matpow(m: Matrix, k: int) -> Matrix:
    """m**k by repeated multiplication; m**0 is the identity."""
    if k < 0 or k != int(k):
        raise ValueError("exponent must be a nonnegative integer")
    out = np.eye(m.dim, dtype=np.complex128)
    for _ in range(int(k)):
        out = out @ m.array
    return Matrix(out)


def apply(m: Matrix, x: Vector) -> Vector:
    if m.dim != x.dim:
        raise DimensionMismatch(f"apply: {m.dim} != {x.dim}")
    return Vector(m.array @ x.array)


def inner(x: Vector, y: Vector) -> complex:
    """<x, y> = sum_i x[i] * conj(y[i]); linear in x, conjugate-linear in y."""
    if x.dim != y.dim:
        raise DimensionMismatch(f"inner: {x.dim} != {y.dim}")
    # np.vdot conjugates its first argument, so the spec convention needs
    # the arguments swapped.
    return complex(np.vdot(y.array, x.array))


def vec_norm(x: Vector) -> float:
    return float(np.sqrt(inner(x, x).real))


def scale(obj: Union[Matrix, Vector], c: complex) -> Union[Matrix, Vector]:
    if isinstance(obj, Matrix):
        return Matrix(obj.array * c)
    if isinstance(obj, Vector):
        return Vector(obj.array * c)
    raise TypeError("scale expects a Matrix or Vector")


def add(a, b):
    return _combine(a, b, np.add)


def subtract(a, b):
    return _combine(a, b, np.subtract)


def _combine(a, b, op):
    if isinstance(a, Matrix) and isinstance(b, Matrix):
        if a.dim != b.dim:
            raise DimensionMismatch(f"{a.dim} != {b.dim}")
        return Matrix(op(a.array, b.array))
    if isinstance(a, Vector) and isinstance(b, Vector):
        if a.dim != b.dim:
            raise DimensionMismatch(f"{a.dim} != {b.dim}")
        return Vector(op(a.array, b.array))
    raise TypeError("operands must both be Matrix or both Vector")


def frobenius_norm(m: Matrix) -> float:
    return float(np.linalg.norm(m.array))
