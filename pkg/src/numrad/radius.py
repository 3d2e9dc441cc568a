"""Numerical radius with a certified error bound, Monte-Carlo lower-bound
oracle, and the repeated-squaring spectral radius.

The numerical radius w(T) = sup{ |<Tx,x>| : ||x|| = 1 } equals the maximum
over theta of f(theta) = lambda_max((e^{i theta} T + e^{-i theta} T*) / 2).
f is the support function of the numerical range: f(theta) is a maximum of
cosine waves R*cos(theta + phi) with amplitudes R <= w(T). That structure
yields three independent rigorous upper bounds for f on a gap [a, b] with
endpoint values fa, fb, given any W >= w(T):

* tent:  (fa + fb)/2 + W*(b-a)/2                (|f'| <= w <= W)
* secant: f + W*theta^2/2 is convex, so f is below the secant of that
  convex function minus the parabola; closed form over the gap.
* cone:  a branch at height y moves along R*cos, so at distance d it is at
  most y*cos(d) + sqrt(W^2 - y^2)*sin(d) (capped at W).

The sweep keeps a sorted evaluation grid on [0, 2pi), bounds every gap by
the minimum of the three, and alternates two phases until the certificate
meets the tolerance: (1) re-certify with the improved global bound
W = best + cert, which tightens the cone bound at no evaluation cost and
is what makes flat support functions (weighted shifts) cheap; (2) bisect
the gaps that still protrude above best + tol.

Everything here is pure and deterministic given its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidTolerance, NoConvergence, ZeroVector
from .matcore import Matrix, Vector
from .spectral import _eigmax_batch, _opnorm_arr

INITIAL_GRID = 256
_LEVEL_CAP = 64
_CERTIFY_PASSES = 80
# Allowance for floating error of the eigenvalue kernel, folded into every
# reported certificate.
_EVAL_SLACK = 1e-13

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SweepResult:
    """Certified numerical-radius value.

    value is a lower estimate of w(T) (a maximum of evaluated support-
    function values) with |value - w(T)| <= certified_error guaranteed.
    theta_star is the smallest maximizing grid angle in [0, 2pi).
    """

    value: float
    theta_star: float
    certified_error: float
    evaluations: int


def _support_values(arr: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """f(theta) = lambda_max(Re(e^{i theta} arr)) for a batch of angles."""
    ph = np.exp(1j * thetas)
    h = ph[:, None, None] * (arr * 0.5)
    h += np.conj(np.swapaxes(h, -1, -2))
    return _eigmax_batch(h)


def _gap_bounds(th, fv, w_up):
    """Per-gap upper bounds for f between consecutive grid angles.

    Returns (gap widths, bounds). The grid is periodic: the last gap wraps
    from th[-1] to th[0] + 2pi.
    """
    g = np.diff(th, append=th[0] + TWO_PI)
    fa = fv
    fb = np.roll(fv, -1)
    tiny = g <= 1e-10
    gs = np.where(tiny, 1.0, g)

    u_tent = 0.5 * (fa + fb) + 0.5 * w_up * gs

    cg2 = w_up * gs * gs
    t = np.clip(0.5 + (fb - fa) / cg2, 0.0, 1.0)
    u_sec = fa + (fb - fa) * t + 0.5 * cg2 * (t - t * t)

    d = np.minimum(gs, 0.5 * math.pi)
    ra = np.sqrt(np.maximum(w_up * w_up - fa * fa, 0.0))
    rb = np.sqrt(np.maximum(w_up * w_up - fb * fb, 0.0))
    cone_a = np.where(fa >= w_up * np.cos(d), w_up, fa * np.cos(d) + ra * np.sin(d))
    cone_b = np.where(fb >= w_up * np.cos(d), w_up, fb * np.cos(d) + rb * np.sin(d))
    u_cone = np.minimum(cone_a, cone_b)

    u = np.minimum(np.minimum(u_tent, u_sec), np.minimum(u_cone, w_up))
    u = np.where(tiny, np.maximum(fa, fb) + w_up * g, u)
    return g, u


def _certify(th, fv, norm, slack):
    """Best value, certified error and gap bounds at the current grid.

    Iterates W = best + cert to a fixed point; each pass can only tighten
    the bounds, and W = ||T|| is the valid starting point.
    """
    best = float(fv.max())
    w_up = norm
    g = u = None
    cert = norm
    for _ in range(_CERTIFY_PASSES):
        g, u = _gap_bounds(th, fv, w_up)
        cert = max(float(u.max()) - best, 0.0) + slack
        new_up = min(w_up, best + cert)
        if new_up >= w_up - 0.25 * slack:
            break
        w_up = new_up
    return best, cert, g, u


def _sweep_stack(mats: np.ndarray, tols, norms=None) -> list[SweepResult]:
    """Certified sweeps for a stack of same-dimension matrices.

    Evaluations are batched across matrices level by level, which is what
    keeps bulk bound reports affordable.
    """
    mats = np.asarray(mats, dtype=np.complex128)
    m = mats.shape[0]
    tols = np.broadcast_to(np.asarray(tols, dtype=np.float64), (m,))
    if norms is None:
        norms = np.array([_opnorm_arr(mats[i]) for i in range(m)])

    results: list = [None] * m
    todo = []
    for i in range(m):
        if norms[i] == 0.0:
            results[i] = SweepResult(0.0, 0.0, 0.0, 0)
        elif tols[i] <= 0.0:
            raise InvalidTolerance(f"tol must be > 0, got {tols[i]}")
        else:
            todo.append(i)
    if not todo:
        return results

    base = np.arange(INITIAL_GRID) * (TWO_PI / INITIAL_GRID)
    th = {i: base.copy() for i in todo}
    fv = {}
    flat = _support_values(
        np.repeat(mats[todo], INITIAL_GRID, axis=0), np.tile(base, len(todo))
    )
    for k, i in enumerate(todo):
        fv[i] = flat[k * INITIAL_GRID : (k + 1) * INITIAL_GRID].copy()

    for _level in range(_LEVEL_CAP):
        pend_i: list[int] = []
        pend_th: list[np.ndarray] = []
        still = []
        for i in todo:
            slack = _EVAL_SLACK * max(1.0, norms[i])
            best, cert, g, u = _certify(th[i], fv[i], norms[i], slack)
            if cert <= tols[i]:
                j = int(np.argmax(fv[i]))
                results[i] = SweepResult(best, float(th[i][j]), cert, len(fv[i]))
                continue
            mask = u > best + tols[i] - slack
            mids = (th[i][mask] + 0.5 * g[mask]) % TWO_PI
            pos = np.searchsorted(th[i], mids)
            fresh = np.ones(len(mids), dtype=bool)
            left = np.clip(pos - 1, 0, len(th[i]) - 1)
            for cand in (np.clip(pos, 0, len(th[i]) - 1), left):
                fresh &= np.abs(th[i][cand] - mids) > 1e-14
            mids = mids[fresh]
            if len(mids) == 0:
                raise NoConvergence(
                    f"sweep stalled at certificate {cert:.3e} > tol {tols[i]:.3e}"
                )
            still.append(i)
            pend_i.append(i)
            pend_th.append(mids)
        todo = still
        if not todo:
            return results

        counts = [len(t) for t in pend_th]
        all_th = np.concatenate(pend_th)
        all_idx = np.repeat(pend_i, counts)
        vals = _support_values(mats[all_idx], all_th)
        start = 0
        for i, cnt in zip(pend_i, counts):
            mids = all_th[start : start + cnt]
            newf = vals[start : start + cnt]
            start += cnt
            pos = np.searchsorted(th[i], mids)
            th[i] = np.insert(th[i], pos, mids)
            fv[i] = np.insert(fv[i], pos, newf)
    raise NoConvergence(f"sweep level cap {_LEVEL_CAP} exceeded")


def _radius_arr(arr: np.ndarray, tol: float | None) -> SweepResult:
    norm = _opnorm_arr(arr)
    if norm == 0.0:
        return SweepResult(0.0, 0.0, 0.0, 0)
    if tol is None:
        tol = 1e-8 * max(1.0, norm)
    elif tol <= 0.0:
        raise InvalidTolerance(f"tol must be > 0, got {tol}")
    return _sweep_stack(arr[None], [tol])[0]


def _rank_one_radius(arr: np.ndarray, sing: np.ndarray, slack: float) -> SweepResult:
    """Closed-form radius for a (numerically) rank-one matrix.

    The numerical range of a rank-one matrix is an ellipse with foci 0 and
    tr(R), major semi-axis sigma_1/2, so w = (sigma_1 + |tr|)/2. Treating
    the input as rank-one perturbs w by at most ||residual|| = sigma_2,
    which is folded into the certificate.
    """
    tr = complex(np.trace(arr))
    value = 0.5 * (float(sing[0]) + abs(tr))
    theta = (-math.atan2(tr.imag, tr.real)) % TWO_PI if tr != 0 else 0.0
    resid = float(sing[1]) if len(sing) > 1 else 0.0
    return SweepResult(value, theta, resid + slack, 0)


def _radius_stack_internal(
    mats: np.ndarray, tols, sings: list[np.ndarray] | None = None
) -> list[SweepResult]:
    """Radii for a same-dimension stack, with a rank-aware shortcut.

    Rank-<=1 targets (exactly flat support functions, where a certified
    sweep would need ~sqrt(||T||/tol) grid points) resolve through the
    ellipse closed form whenever its residual certificate meets the
    tolerance; everything else goes through the shared batched sweep.
    """
    mats = np.asarray(mats, dtype=np.complex128)
    m = mats.shape[0]
    tols = np.broadcast_to(np.asarray(tols, dtype=np.float64), (m,))
    if sings is None:
        sings = [np.linalg.svd(mats[i], compute_uv=False) for i in range(m)]

    results: list = [None] * m
    sweep_idx = []
    for i in range(m):
        s = sings[i]
        norm = float(s[0])
        if norm == 0.0:
            results[i] = SweepResult(0.0, 0.0, 0.0, 0)
            continue
        slack = _EVAL_SLACK * max(1.0, norm)
        resid = float(s[1]) if len(s) > 1 else 0.0
        if resid + slack <= tols[i]:
            results[i] = _rank_one_radius(mats[i], s, slack)
        else:
            sweep_idx.append(i)
    if sweep_idx:
        swept = _sweep_stack(
            mats[sweep_idx],
            tols[sweep_idx],
            norms=np.array([float(sings[i][0]) for i in sweep_idx]),
        )
        for i, res in zip(sweep_idx, swept):
            results[i] = res
    return results


def numerical_radius(m: Matrix, tol: float | None = None) -> SweepResult:
    """Numerical radius of m with a certified absolute error bound.

    The sweep maximizes f(theta) = lambda_max(Re(e^{i theta} m)) over a
    refining grid; refinement stops once the global gap certificate drops
    to tol (default 1e-8 * max(1, ||m||)). The zero matrix short-circuits
    to an exact result.
    """
    return _radius_arr(np.asarray(m.array), tol)


def rayleigh(m: Matrix, x: Vector) -> complex:
    """<M x_hat, x_hat> for the normalized x_hat = x / ||x||."""
    if m.dim != x.dim:
        from .errors import DimensionMismatch

        raise DimensionMismatch(f"rayleigh: {m.dim} != {x.dim}")
    v = x.array
    nrm2 = np.vdot(v, v).real
    if nrm2 == 0.0:
        raise ZeroVector("rayleigh requires a nonzero vector")
    return complex(np.vdot(v, m.array @ v) / nrm2)


def numerical_radius_lower_bound(m: Matrix, trials: int, seed: int) -> float:
    """Max of |<M x, x>| over `trials` random unit vectors.

    A genuine lower bound for w(M); deterministic given the seed. Sampling
    uses numpy's PCG64 generator with standard-normal real/imaginary parts.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    arr = np.asarray(m.array)
    n = m.dim
    rng = np.random.default_rng(seed)
    best = 0.0
    remaining = trials
    while remaining > 0:
        k = min(remaining, 65536)
        remaining -= k
        x = rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n))
        num = np.abs(np.einsum("ki,ij,kj->k", x.conj(), arr, x))
        den = np.einsum("ki,ki->k", x.conj(), x).real
        best = max(best, float(np.max(num / den)))
    return best


@dataclass(frozen=True)
class GelfandEstimate:
    """Spectral radius estimate from repeated squaring.

    value = ||M^(2^k)||^(1/2^k) at the last completed squaring; converged
    reports whether the last two iterates differed by at most
    tol * max(1, value).
    """

    value: float
    converged: bool
    squarings: int


def spectral_radius_gelfand(
    m: Matrix, max_squarings: int = 40, tol: float = 1e-10
) -> GelfandEstimate:
    """Spectral radius via ||M^(2^k)||^(1/2^k), normalizing each squared
    matrix by its norm (log accumulated) so iterates never overflow.

    An exactly vanishing power (nilpotent input) returns 0 immediately.
    Non-convergence is reported through the flag, never raised.
    """
    if max_squarings < 1:
        raise ValueError("max_squarings must be >= 1")
    arr = np.asarray(m.array)
    norm = _opnorm_arr(arr)
    if norm == 0.0:
        return GelfandEstimate(0.0, True, 0)
    b = arr / norm
    log_acc = math.log(norm)
    prev = norm
    for k in range(1, max_squarings + 1):
        b = b @ b
        beta = _opnorm_arr(b)
        if beta == 0.0:
            return GelfandEstimate(0.0, True, k)
        b = b / beta
        log_acc = 2.0 * log_acc + math.log(beta)
        cur = math.exp(log_acc / (2.0**k))
        if abs(cur - prev) <= tol * max(1.0, cur):
            return GelfandEstimate(cur, True, k)
        prev = cur
    return GelfandEstimate(prev, False, max_squarings)
