"""Named upper-bound estimators for the numerical radius, nilpotency
detection, and consolidated bound reports.

Every estimator returns a BoundEstimate carrying the value, the named
intermediate quantities it was assembled from (so the value can be audited
against the formula), and the formula itself. Estimator ids ("th1",
"cor5[n=3]", ...) are stable interface vocabulary used by report
serialization, the property-suite violation records and the sharpness CSV.

Intermediate numerical radii are computed at one tenth of the estimator's
tolerance so composed values stay within the outer tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from .errors import InvalidOrder, NormExceedsOne, NotNilpotent
from .matcore import Matrix
from .radius import SweepResult, _radius_stack_internal
from .spectral import _absop_arr, _eigmax_batch

NILPOTENCY_TOL = 1e-10
_NORM_ONE_SLACK = 1e-12


@dataclass(frozen=True)
class BoundEstimate:
    """One named upper bound on w(T) with its audit trail."""

    id: str
    value: float
    components: Mapping[str, float]
    formula: str


@dataclass(frozen=True)
class ReversePowerCheck:
    """w(T)^n <= 2^(1-n) w(T^n) + 1 - 2^(1-n), valid for ||T|| <= 1."""

    n: int
    lhs: float
    rhs: float
    holds: bool
    gap: float


@dataclass(frozen=True)
class ReportConfig:
    """Knobs for full_report: base tolerance (None -> 1e-8 * max(1, ||T||))
    and the power orders evaluated for the general power bound."""

    tol: Optional[float] = None
    orders: tuple = (2, 3, 4, 5)


@dataclass(frozen=True)
class BoundReport:
    """Exact radius next to every estimate, with soundness verdicts.

    violations lists (id, margin) with margin = estimate - exact for any
    estimate that fell below exact - tol; it stays empty unless the
    implementation is broken, since every estimator is a proved bound.
    """

    exact: SweepResult
    norm: float
    estimates: tuple
    nilpotency_index: Optional[int]
    violations: tuple
    reverse_power: Optional[tuple]


class _Workspace:
    """Shared lazy cache of powers, products, |T| factors, singular values
    and numerical radii for one input matrix."""

    def __init__(self, m: Matrix, tol: Optional[float]):
        arr = np.asarray(m.array)
        self.arr = arr
        self.dim = arr.shape[0]
        self.mats = {"T": arr}
        self.sings: dict = {}
        self.radii: dict = {}
        self.norm = self.norm_of("T")
        if tol is not None and tol <= 0.0:
            from .errors import InvalidTolerance

            raise InvalidTolerance(f"tol must be > 0, got {tol}")
        self.tol = tol if tol is not None else 1e-8 * max(1.0, self.norm)
        self._absP = None
        self._absQ = None
        self._hermsum_norm = None

    # -- matrix targets -----------------------------------------------------

    def mat(self, name: str) -> np.ndarray:
        if name not in self.mats:
            self.mats[name] = self._build(name)
        return self.mats[name]

    def _build(self, name: str) -> np.ndarray:
        a = self.arr
        ah = a.conj().T
        if name.startswith("T^") and name[2:].isdigit():
            k = int(name[2:])
            return self.mat(f"T^{k - 1}" if k > 2 else "T") @ a if k > 1 else a
        table = {
            "TT*T": lambda: a @ ah @ a,
            "T^2T*": lambda: self.mat("T^2") @ ah,
            "T*T^2": lambda: ah @ self.mat("T^2"),
            "|T|T|T*|": lambda: self.abs_t @ a @ self.abs_tstar,
            "|T*|T|T|": lambda: self.abs_tstar @ a @ self.abs_t,
            "T|T|": lambda: a @ self.abs_t,
            "T*|T*|": lambda: ah @ self.abs_tstar,
            "T|T*|": lambda: a @ self.abs_tstar,
            "T*|T|": lambda: ah @ self.abs_t,
        }
        return table[name]()

    @property
    def abs_t(self) -> np.ndarray:
        if self._absP is None:
            self._absP = _absop_arr(self.arr)
        return self._absP

    @property
    def abs_tstar(self) -> np.ndarray:
        if self._absQ is None:
            self._absQ = _absop_arr(self.arr.conj().T)
        return self._absQ

    # -- scalar quantities ----------------------------------------------------

    def sigma(self, name: str) -> np.ndarray:
        if name not in self.sings:
            self.sings[name] = np.linalg.svd(self.mat(name), compute_uv=False)
        return self.sings[name]

    def norm_of(self, name: str) -> float:
        return float(self.sigma(name)[0])

    @property
    def hermsum_norm(self) -> float:
        """||T*T + TT*||; the sum is Hermitian PSD so this is lambda_max."""
        if self._hermsum_norm is None:
            a = self.arr
            s = a.conj().T @ a + a @ a.conj().T
            self._hermsum_norm = float(_eigmax_batch(s[None])[0])
        return self._hermsum_norm

    # -- numerical radii ------------------------------------------------------

    def prefetch(self, names, exact: bool = False) -> None:
        """Compute all missing radii in one batched call.

        exact targets run at self.tol, intermediates at self.tol / 10.
        """
        missing = [n for n in names if n not in self.radii]
        if not missing:
            return
        stack = np.stack([self.mat(n) for n in missing])
        tols = [self.tol if exact and n == "T" else self.tol / 10.0 for n in missing]
        sings = [self.sigma(n) for n in missing]
        for n, res in zip(missing, _radius_stack_internal(stack, tols, sings)):
            self.radii[n] = res

    def radius(self, name: str, exact: bool = False) -> SweepResult:
        if name not in self.radii:
            self.prefetch([name], exact=exact)
        return self.radii[name]

    def w(self, name: str) -> float:
        return self.radius(name).value


def _cbrt(x: float) -> float:
    return float(np.cbrt(max(x, 0.0)))


def _root4(x: float) -> float:
    return max(x, 0.0) ** 0.25


# ---------------------------------------------------------------------------
# Individual estimators. Each has a module-level wrapper taking (M, tol) and
# a _Workspace assembler reused by full_report.
# ---------------------------------------------------------------------------


def classical_bounds(m: Matrix):
    """The sandwich (||T||/2, ||T||) enclosing w(T)."""
    ws = _Workspace(m, None)
    return 0.5 * ws.norm, ws.norm


def _est_eqv_upper(ws: _Workspace) -> BoundEstimate:
    return BoundEstimate(
        "eqv[upper]", ws.norm, {"||T||": ws.norm}, "||T||"
    )


def _est_th1(ws: _Workspace) -> BoundEstimate:
    w3 = ws.w("T^3")
    n2 = ws.norm_of("T^2")
    hs = ws.hermsum_norm
    value = _cbrt(0.25 * w3 + 0.25 * (n2 + hs) * ws.norm)
    return BoundEstimate(
        "th1",
        value,
        {"w(T^3)": w3, "||T^2||": n2, "||T*T+TT*||": hs, "||T||": ws.norm},
        "(1/4 w(T^3) + 1/4 (||T^2|| + ||T*T+TT*||) ||T||)^(1/3)",
    )


def _est_th2(ws: _Workspace) -> BoundEstimate:
    wttt = ws.w("TT*T")
    hs = ws.hermsum_norm
    value = _cbrt(0.5 * wttt + 0.25 * hs * ws.norm)
    return BoundEstimate(
        "th2",
        value,
        {"w(TT*T)": wttt, "||T*T+TT*||": hs, "||T||": ws.norm},
        "(1/2 w(TT*T) + 1/4 ||T*T+TT*|| ||T||)^(1/3)",
    )


def _est_eq5(ws: _Workspace) -> BoundEstimate:
    wv = ws.w("T*T^2")
    value = _cbrt(0.5 * wv + 0.5 * ws.norm**3)
    return BoundEstimate(
        "eq5",
        value,
        {"w(T*T^2)": wv, "||T||": ws.norm},
        "(1/2 w(T*T^2) + 1/2 ||T||^3)^(1/3)",
    )


def _est_eq6(ws: _Workspace) -> BoundEstimate:
    wv = ws.w("T^2T*")
    value = _cbrt(0.5 * wv + 0.5 * ws.norm**3)
    return BoundEstimate(
        "eq6",
        value,
        {"w(T^2T*)": wv, "||T||": ws.norm},
        "(1/2 w(T^2T*) + 1/2 ||T||^3)^(1/3)",
    )


_COR2_ORDER = ("TT*T", "T^2T*", "T*T^2")


def _est_cor2(ws: _Workspace) -> BoundEstimate:
    cands = {name: ws.w(name) for name in _COR2_ORDER}
    argmin = min(_COR2_ORDER, key=lambda name: cands[name])
    value = _cbrt(0.5 * cands[argmin] + 0.5 * ws.norm**3)
    comps = {f"w({name})": cands[name] for name in _COR2_ORDER}
    comps["min"] = cands[argmin]
    comps["argmin"] = float(_COR2_ORDER.index(argmin))
    comps["||T||"] = ws.norm
    return BoundEstimate(
        "cor2",
        value,
        comps,
        "(1/2 min(w(TT*T), w(T^2T*), w(T*T^2)) + 1/2 ||T||^3)^(1/3)",
    )


def _est_th3(ws: _Workspace) -> BoundEstimate:
    wv = ws.w("|T|T|T*|")
    n2 = ws.norm_of("T^2")
    hs = ws.hermsum_norm
    value = _cbrt(0.25 * wv + 0.25 * (n2 + hs) * ws.norm)
    return BoundEstimate(
        "th3",
        value,
        {"w(|T|T|T*|)": wv, "||T^2||": n2, "||T*T+TT*||": hs, "||T||": ws.norm},
        "(1/4 w(|T|T|T*|) + 1/4 (||T^2|| + ||T*T+TT*||) ||T||)^(1/3)",
    )


_COR3_ORDER = ("T^3", "|T|T|T*|")


def _est_cor3(ws: _Workspace) -> BoundEstimate:
    cands = {name: ws.w(name) for name in _COR3_ORDER}
    argmin = min(_COR3_ORDER, key=lambda name: cands[name])
    n2 = ws.norm_of("T^2")
    hs = ws.hermsum_norm
    value = _cbrt(0.25 * cands[argmin] + 0.25 * (n2 + hs) * ws.norm)
    comps = {f"w({name})": cands[name] for name in _COR3_ORDER}
    comps.update(
        {
            "min": cands[argmin],
            "argmin": float(_COR3_ORDER.index(argmin)),
            "||T^2||": n2,
            "||T*T+TT*||": hs,
            "||T||": ws.norm,
        }
    )
    return BoundEstimate(
        "cor3",
        value,
        comps,
        "(1/4 min(w(T^3), w(|T|T|T*|)) + 1/4 (||T^2|| + ||T*T+TT*||) ||T||)^(1/3)",
    )


def _est_eq7(ws: _Workspace) -> BoundEstimate:
    wv = ws.w("|T*|T|T|")
    hs = ws.hermsum_norm
    value = _cbrt(0.25 * wv + 0.375 * hs * ws.norm)
    return BoundEstimate(
        "eq7",
        value,
        {"w(|T*|T|T|)": wv, "||T*T+TT*||": hs, "||T||": ws.norm},
        "(1/4 w(|T*|T|T|) + 3/8 ||T*T+TT*|| ||T||)^(1/3)",
    )


def _est_th4(ws: _Workspace) -> BoundEstimate:
    wa = ws.w("T|T|")
    wb = ws.w("T*|T*|")
    hs = ws.hermsum_norm
    fa = 0.5 * wa + 0.25 * hs
    fb = 0.5 * wb + 0.25 * hs
    value = _root4(fa * fb)
    return BoundEstimate(
        "th4",
        value,
        {"w(T|T|)": wa, "w(T*|T*|)": wb, "||T*T+TT*||": hs},
        "((1/2 w(T|T|) + 1/4 ||T*T+TT*||)(1/2 w(T*|T*|) + 1/4 ||T*T+TT*||))^(1/4)",
    )


def _est_th5(ws: _Workspace) -> BoundEstimate:
    wa = ws.w("T|T*|")
    wb = ws.w("T*|T|")
    n2 = ws.norm**2
    fa = 0.5 * wa + 0.5 * n2
    fb = 0.5 * wb + 0.5 * n2
    value = _root4(fa * fb)
    return BoundEstimate(
        "th5",
        value,
        {"w(T|T*|)": wa, "w(T*|T|)": wb, "||T||": ws.norm},
        "((1/2 w(T|T*|) + 1/2 ||T||^2)(1/2 w(T*|T|) + 1/2 ||T||^2))^(1/4)",
    )


def _est_cor5(ws: _Workspace, n: int) -> BoundEstimate:
    if n < 2 or n != int(n):
        raise InvalidOrder(f"n must be an integer >= 2, got {n}")
    wn = ws.w(f"T^{n}")
    comps = {"w(T^n)": wn, "n": float(n)}
    radicand = 2.0 ** (1 - n) * wn
    for k in range(1, n):
        term = 2.0**-k * ws.norm_of(f"T^{k}") * ws.norm ** (n - k)
        comps[f"term[k={k}]"] = term
        radicand += term
    value = max(radicand, 0.0) ** (1.0 / n)
    return BoundEstimate(
        f"cor5[n={n}]",
        value,
        comps,
        "(2^(1-n) w(T^n) + sum_k 2^-k ||T^k|| ||T||^(n-k))^(1/n)",
    )


def _nilpotency_index_ws(ws: _Workspace, tol: float) -> Optional[int]:
    if ws.norm == 0.0:
        return 1
    for k in range(1, ws.dim + 1):
        if ws.norm_of(f"T^{k}" if k > 1 else "T") <= tol * ws.norm**k:
            return k
    return None


def _est_nilpotent(ws: _Workspace, idx: int):
    n = idx
    comps = {"n": float(n), "||T||": ws.norm}
    radicand = 0.0
    for k in range(1, n):
        term = 2.0**-k * ws.norm_of(f"T^{k}" if k > 1 else "T") * ws.norm ** (n - k)
        comps[f"term[k={k}]"] = term
        radicand += term
    tight = BoundEstimate(
        "nilpotent[tight]",
        max(radicand, 0.0) ** (1.0 / n),
        comps,
        "(sum_k 2^-k ||T^k|| ||T||^(n-k))^(1/n)",
    )
    relaxed = BoundEstimate(
        "nilpotent[relaxed]",
        (1.0 - 2.0 ** (1 - n)) ** (1.0 / n) * ws.norm,
        {"n": float(n), "||T||": ws.norm},
        "(1 - 2^(1-n))^(1/n) ||T||",
    )
    return tight, relaxed


def _est_haagerup(ws: _Workspace, idx: int) -> BoundEstimate:
    c = math.cos(math.pi / (idx + 1))
    return BoundEstimate(
        "haagerup",
        c * ws.norm,
        {"n": float(idx), "cos(pi/(n+1))": c, "||T||": ws.norm},
        "cos(pi/(n+1)) ||T||",
    )


def bound_th1(m: Matrix, tol: Optional[float] = None) -> BoundEstimate:
    return _est_th1(_Workspace(m, tol))


def bound_th2(m: Matrix, tol: Optional[float] = None) -> BoundEstimate:
    return _est_th2(_Workspace(m, tol))


def bound_eq5(m: Matrix, tol: Optional[float] = None) -> BoundEstimate:
    return _est_eq5(_Workspace(m, tol))


def bound_eq6(m: Matrix, tol: Optional[float] = None) -> BoundEstimate:
    return _est_eq6(_Workspace(m, tol))


def bound_cor2(m: Matrix, tol: Optional[float] = None) -> BoundEstimate:
    return _est_cor2(_Workspace(m, tol))


def bound_th3(m: Matrix, tol: Optional[float] = None) -> BoundEstimate:
    return _est_th3(_Workspace(m, tol))


def bound_cor3(m: Matrix, tol: Optional[float] = None) -> BoundEstimate:
    return _est_cor3(_Workspace(m, tol))


def bound_eq7(m: Matrix, tol: Optional[float] = None) -> BoundEstimate:
    return _est_eq7(_Workspace(m, tol))


def bound_th4(m: Matrix, tol: Optional[float] = None) -> BoundEstimate:
    return _est_th4(_Workspace(m, tol))


def bound_th5(m: Matrix, tol: Optional[float] = None) -> BoundEstimate:
    return _est_th5(_Workspace(m, tol))


def bound_cor5(m: Matrix, n: int, tol: Optional[float] = None) -> BoundEstimate:
    return _est_cor5(_Workspace(m, tol), n)


def nilpotency_index(m: Matrix, tol: float = NILPOTENCY_TOL) -> Optional[int]:
    """Least n <= dim with ||M^n|| <= tol * ||M||^n; 1 for the zero matrix,
    None when no power vanishes."""
    return _nilpotency_index_ws(_Workspace(m, None), tol)


def bound_nilpotent(m: Matrix, tol: float = NILPOTENCY_TOL):
    """(tight, relaxed) nilpotent estimates; requires nilpotency index >= 2."""
    ws = _Workspace(m, None)
    idx = _nilpotency_index_ws(ws, tol)
    if idx is None or idx < 2:
        raise NotNilpotent(f"nilpotency index is {idx}, need >= 2")
    return _est_nilpotent(ws, idx)


def bound_haagerup(m: Matrix, tol: float = NILPOTENCY_TOL) -> BoundEstimate:
    """cos(pi/(n+1)) ||T|| for nilpotency index n >= 2."""
    ws = _Workspace(m, None)
    idx = _nilpotency_index_ws(ws, tol)
    if idx is None or idx < 2:
        raise NotNilpotent(f"nilpotency index is {idx}, need >= 2")
    return _est_haagerup(ws, idx)


def check_reverse_power(
    m: Matrix, n: int, tol: Optional[float] = None
) -> ReversePowerCheck:
    """w(T)^n <= 2^(1-n) w(T^n) + 1 - 2^(1-n) for ||T|| <= 1."""
    if n < 2 or n != int(n):
        raise InvalidOrder(f"n must be an integer >= 2, got {n}")
    ws = _Workspace(m, tol if tol is not None else 1e-8)
    if ws.norm > 1.0 + _NORM_ONE_SLACK:
        raise NormExceedsOne(f"||T|| = {ws.norm!r} > 1")
    return _reverse_power_from(ws, n, ws.tol)


def _reverse_power_from(ws: _Workspace, n: int, tol: float) -> ReversePowerCheck:
    ws.prefetch(["T", f"T^{n}"])
    lhs = ws.w("T") ** n
    rhs = 2.0 ** (1 - n) * ws.w(f"T^{n}") + 1.0 - 2.0 ** (1 - n)
    return ReversePowerCheck(n, lhs, rhs, lhs <= rhs + tol, rhs - lhs)


_REPORT_TARGETS = (
    "T^3",
    "TT*T",
    "T^2T*",
    "T*T^2",
    "|T|T|T*|",
    "|T*|T|T|",
    "T|T|",
    "T*|T*|",
    "T|T*|",
    "T*|T|",
)


def full_report(m: Matrix, config: Optional[ReportConfig] = None) -> BoundReport:
    """Exact radius plus every estimator, with soundness verdicts.

    Estimates appear in a fixed document order regardless of evaluation
    order. Nilpotent estimators run only when the index n >= 2 exists; the
    reverse-power checks run only when ||T|| <= 1 + 1e-12.
    """
    config = config or ReportConfig()
    orders = tuple(dict.fromkeys(int(n) for n in config.orders))
    for n in orders:
        if n < 2:
            raise InvalidOrder(f"orders must all be >= 2, got {n}")
    ws = _Workspace(m, config.tol)

    names = ["T"] + [f"T^{n}" for n in orders] + list(_REPORT_TARGETS)
    ws.prefetch(dict.fromkeys(names), exact=True)

    exact = ws.radius("T", exact=True)
    estimates = [
        _est_eqv_upper(ws),
        _est_th1(ws),
        _est_th2(ws),
        _est_eq5(ws),
        _est_eq6(ws),
        _est_cor2(ws),
        _est_th3(ws),
        _est_cor3(ws),
        _est_eq7(ws),
        _est_th4(ws),
        _est_th5(ws),
    ]
    estimates.extend(_est_cor5(ws, n) for n in orders)

    idx = _nilpotency_index_ws(ws, NILPOTENCY_TOL)
    if idx is not None and idx >= 2:
        tight, relaxed = _est_nilpotent(ws, idx)
        estimates.extend((tight, relaxed, _est_haagerup(ws, idx)))

    violations = []
    if exact.value < 0.5 * ws.norm - ws.tol:
        violations.append(("eqv[lower]", exact.value - 0.5 * ws.norm))
    for est in estimates:
        if est.value < exact.value - ws.tol:
            violations.append((est.id, est.value - exact.value))

    reverse = None
    if ws.norm <= 1.0 + _NORM_ONE_SLACK:
        reverse = tuple(_reverse_power_from(ws, n, ws.tol) for n in orders)

    return BoundReport(
        exact=exact,
        norm=ws.norm,
        estimates=tuple(estimates),
        nilpotency_index=idx,
        violations=tuple(violations),
        reverse_power=reverse,
    )
