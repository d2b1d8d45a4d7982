"""Maps from moment triples to GEV parameters.

For each weight family there are two routes: an exact numeric solve of the
moment system by bracketed bisection on the shape equation, and the classical
closed-form approximations.  The approximations carry hand-derived gradients,
which feed the asymptotic-variance estimator of the tests.
"""
from __future__ import annotations

import enum
import math

import numpy as np
from scipy.special import gamma as sp_gamma
from scipy.special import psi as sp_psi

from .distributions import EULER_GAMMA, DataError, FeasibilityError, GevParams
from .moments import (
    GPWM_SHAPE_HI,
    LOG2,
    LOG3,
    LOG32,
    PWM_SHAPE_HI,
    SHAPE_BRACKET_LO,
    MomentTriple,
    _as_triple_array,
    _gpwm_q,
    gpwm_solver_target,
    in_dxi,
    in_dxi_rows,
    shape_ratio_target,
)

ZETA2 = math.pi * math.pi / 6.0

# xi below which the Gumbel-limit series branches of the scale/location
# helpers (and of their derivatives) are used.
_XI_SMALL = 1e-8
_DXI_SMALL = 1e-5

# Constants of the log-weight shape approximation.
_HF_C1 = 1.442853
_HF_EXP = 0.4054651
_HF_C0 = 0.1183375


class GevMapKind(enum.Enum):
    PWM_EXACT = "pwm_exact"
    PWM_APPROX = "pwm_approx"
    GPWM_EXACT = "gpwm_exact"
    GPWM_APPROX = "gpwm_approx"


class SolveFailure(ValueError):
    """The shape equation has no root inside the search bracket."""


def _bisect(fn, lo: float, hi: float, target: float, tol: float = 1e-12) -> float:
    flo, fhi = fn(lo) - target, fn(hi) - target
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise SolveFailure("target outside the bracket image")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = fn(mid) - target
        if fmid == 0.0 or hi - lo < tol:
            return mid
        if flo * fmid < 0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


# --- scalar helpers with Gumbel-limit branches ------------------------------


def _pwm_shape_ratio(xi: float) -> float:
    """(3^xi - 1)/(2^xi - 1), extended by continuity at 0."""
    if abs(xi) < 1e-12:
        return LOG3 / LOG2
    return math.expm1(xi * LOG3) / math.expm1(xi * LOG2)


def _w(xi):
    """Scale factor xi / (Gamma(1-xi) (2^xi - 1)); w(0) = 1/log 2."""
    xi = np.asarray(xi, dtype=float)
    small = np.abs(xi) < _XI_SMALL
    safe = np.where(small, 0.5, xi)
    out = safe / (sp_gamma(1.0 - safe) * np.expm1(safe * LOG2))
    return np.where(small, 1.0 / LOG2, out)


def _v(xi):
    """Location shift (1 - Gamma(1-xi))/xi; v(0) = -EulerGamma."""
    xi = np.asarray(xi, dtype=float)
    small = np.abs(xi) < _XI_SMALL
    safe = np.where(small, 0.5, xi)
    out = (1.0 - sp_gamma(1.0 - safe)) / safe
    return np.where(small, -EULER_GAMMA, out)


def _u(xi):
    """2^(3-xi)/Gamma(2-xi), the log-weight scale factor (no singularity)."""
    xi = np.asarray(xi, dtype=float)
    return np.power(2.0, 3.0 - xi) / sp_gamma(2.0 - xi)


def _z(xi):
    """(1 - 2^xi Gamma(2-xi))/xi; z(0) = 1 - EulerGamma - log 2."""
    xi = np.asarray(xi, dtype=float)
    small = np.abs(xi) < _XI_SMALL
    safe = np.where(small, 0.5, xi)
    g = np.power(2.0, safe) * sp_gamma(2.0 - safe)
    return np.where(small, 1.0 - EULER_GAMMA - LOG2, (1.0 - g) / safe)


def _w_prime(xi):
    xi = np.asarray(xi, dtype=float)
    small = np.abs(xi) < _DXI_SMALL
    safe = np.where(small, 0.5, xi)
    e = np.expm1(safe * LOG2)
    gam = sp_gamma(1.0 - safe)
    d = gam * e
    dprime = gam * (-sp_psi(1.0 - safe) * e + np.power(2.0, safe) * LOG2)
    out = (d - safe * dprime) / (d * d)
    return np.where(small, -(EULER_GAMMA + LOG2 / 2.0) / LOG2, out)


def _v_prime(xi):
    xi = np.asarray(xi, dtype=float)
    small = np.abs(xi) < _DXI_SMALL
    safe = np.where(small, 0.5, xi)
    gam = sp_gamma(1.0 - safe)
    out = (safe * gam * sp_psi(1.0 - safe) + gam - 1.0) / (safe * safe)
    return np.where(small, -(EULER_GAMMA**2 + ZETA2) / 2.0, out)


def _u_prime(xi):
    xi = np.asarray(xi, dtype=float)
    return _u(xi) * (-LOG2 + sp_psi(2.0 - xi))


def _z_prime(xi):
    xi = np.asarray(xi, dtype=float)
    small = np.abs(xi) < _DXI_SMALL
    safe = np.where(small, 0.5, xi)
    g = np.power(2.0, safe) * sp_gamma(2.0 - safe)
    gprime = g * (LOG2 - sp_psi(2.0 - safe))
    out = (g - 1.0 - safe * gprime) / (safe * safe)
    b1 = LOG2 - 1.0 + EULER_GAMMA
    return np.where(small, -(b1 * b1 + ZETA2 - 1.0) / 2.0, out)


# --- exact solves -----------------------------------------------------------


def pwm_to_gev_exact(m) -> GevParams:
    """Solve the classical moment system by bisection on the shape equation."""
    arr = _as_triple_array(m)
    if not in_dxi(arr):
        raise FeasibilityError(f"moment triple {tuple(arr)} outside the feasibility region")
    target = shape_ratio_target(arr)
    try:
        xi = _bisect(_pwm_shape_ratio, SHAPE_BRACKET_LO, PWM_SHAPE_HI, target)
    except SolveFailure as exc:
        raise FeasibilityError(f"shape equation unsolvable in the bracket: {exc}") from exc
    m1, m2, _ = arr
    sigma = (2 * m2 - m1) * float(_w(xi))
    mu = m1 + sigma * float(_v(xi))
    return GevParams(mu, sigma, xi)


def gpwm_to_gev_exact(m) -> GevParams:
    """Solve the log-weight moment system; raises SolveFailure when the shape
    equation has no root in the bracket (that failure is what domain
    membership checks consume)."""
    arr = _as_triple_array(m)
    m1, m2, _ = arr
    denom = m1 - 2.25 * arr[2]
    if denom == 0.0:
        raise SolveFailure("degenerate shape-equation denominator")
    target = gpwm_solver_target(arr)
    xi = _bisect(_gpwm_q, SHAPE_BRACKET_LO, GPWM_SHAPE_HI, target)
    sigma = (m1 - m2) * float(_u(xi))
    if sigma <= 0.0:
        raise SolveFailure("scale equation gives a nonpositive scale")
    mu = 4.0 * m1 + sigma * float(_z(xi))
    return GevParams(mu, sigma, xi)


# --- approximations ---------------------------------------------------------


def _pwm_shape_approx(m1, m2, m3):
    x = (2 * m2 - m1) / (3 * m3 - m1) - LOG2 / LOG3
    xi = -7.8590 * x - 2.9554 * x * x
    # below the Gumbel-branch threshold the shape is indistinguishable from
    # 0, so return 0 exactly and keep the triple (mu, sigma, 0) consistent
    return np.where(np.abs(xi) < _XI_SMALL, 0.0, xi)


def _gpwm_shape_approx(m1, m2, m3):
    x = 2.0 * (m1 - m2) / (m1 - 2.25 * m3)
    xi = (_HF_C1 - np.power(-x, _HF_EXP)) / _HF_C0
    return np.where(np.abs(xi) < _XI_SMALL, 0.0, xi)


def pwm_to_gev_approx(m) -> GevParams:
    arr = _as_triple_array(m)
    if not in_dxi(arr):
        raise FeasibilityError(f"moment triple {tuple(arr)} outside the feasibility region")
    m1, m2, m3 = arr
    xi = float(_pwm_shape_approx(m1, m2, m3))
    sigma = (2 * m2 - m1) * float(_w(xi))
    mu = m1 + sigma * float(_v(xi))
    return GevParams(mu, sigma, xi)


def gpwm_to_gev_approx(m) -> GevParams:
    arr = _as_triple_array(m)
    m1, m2, m3 = arr
    x = 2.0 * (m1 - m2) / (m1 - 2.25 * m3) if m1 - 2.25 * m3 != 0.0 else math.inf
    if not (x < 0.0):
        raise FeasibilityError("log-weight shape approximation needs a negative ratio")
    xi = float(_gpwm_shape_approx(m1, m2, m3))
    sigma = (m1 - m2) * float(_u(xi))
    mu = 4.0 * m1 + sigma * float(_z(xi))
    return GevParams(mu, sigma, xi)


def approx_map_rows(family_tag: str, target: str, m: np.ndarray) -> np.ndarray:
    """Vectorized approximate map over rows of an (n, 3) array.

    Rows outside the map's domain come back as NaN; callers mask them.
    """
    m1, m2, m3 = m[:, 0], m[:, 1], m[:, 2]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if family_tag == "pwm":
            feasible = in_dxi_rows(m)
            xi = np.where(feasible, _pwm_shape_approx(m1, m2, m3), np.nan)
            if target == "xi":
                return xi
            sigma = (2 * m2 - m1) * _w(xi)
            if target == "sigma":
                return sigma
            return m1 + sigma * _v(xi)
        x = 2.0 * (m1 - m2) / (m1 - 2.25 * m3)
        x = np.where(x < 0.0, x, np.nan)
        xi = np.where(np.isnan(x), np.nan, _gpwm_shape_approx(m1, m2, m3))
        if target == "xi":
            return xi
        sigma = (m1 - m2) * _u(xi)
        if target == "sigma":
            return sigma
        return 4.0 * m1 + sigma * _z(xi)


# --- gradients of the approximations ---------------------------------------


def _pwm_grads(arr: np.ndarray):
    m1, m2, m3 = arr
    a = 2 * m2 - m1
    b = 3 * m3 - m1
    x = a / b - LOG2 / LOG3
    grad_x = np.array([(a - b) / (b * b), 2.0 / b, -3.0 * a / (b * b)])
    fprime = -7.8590 - 2.0 * 2.9554 * x
    xi = -7.8590 * x - 2.9554 * x * x
    grad_xi = fprime * grad_x
    w, wp = float(_w(xi)), float(_w_prime(xi))
    sigma = a * w
    grad_sigma = w * np.array([-1.0, 2.0, 0.0]) + a * wp * grad_xi
    v, vp = float(_v(xi)), float(_v_prime(xi))
    grad_mu = np.array([1.0, 0.0, 0.0]) + v * grad_sigma + sigma * vp * grad_xi
    return {"mu": grad_mu, "sigma": grad_sigma, "xi": grad_xi}


def _gpwm_grads(arr: np.ndarray):
    m1, m2, m3 = arr
    p = 2.0 * (m1 - m2)
    q = m1 - 2.25 * m3
    x = p / q
    if not (x < 0.0):
        raise FeasibilityError("log-weight shape approximation needs a negative ratio")
    grad_x = np.array([(2.0 * q - p) / (q * q), -2.0 / q, 2.25 * p / (q * q)])
    xi = (_HF_C1 - (-x) ** _HF_EXP) / _HF_C0
    fprime = _HF_EXP * (-x) ** (_HF_EXP - 1.0) / _HF_C0
    grad_xi = fprime * grad_x
    u, up = float(_u(xi)), float(_u_prime(xi))
    sigma = (m1 - m2) * u
    grad_sigma = u * np.array([1.0, -1.0, 0.0]) + (m1 - m2) * up * grad_xi
    z, zp = float(_z(xi)), float(_z_prime(xi))
    grad_mu = np.array([4.0, 0.0, 0.0]) + z * grad_sigma + sigma * zp * grad_xi
    return {"mu": grad_mu, "sigma": grad_sigma, "xi": grad_xi}


def jacobian(kind: GevMapKind, component: str, m) -> np.ndarray:
    """Closed-form gradient (d/dm1, d/dm2, d/dm3) of an approximate map."""
    if component not in ("mu", "sigma", "xi"):
        raise DataError(f"unknown component {component!r}")
    arr = _as_triple_array(m)
    if kind is GevMapKind.PWM_APPROX:
        if not in_dxi(arr):
            raise FeasibilityError("moment triple outside the feasibility region")
        return _pwm_grads(arr)[component]
    if kind is GevMapKind.GPWM_APPROX:
        return _gpwm_grads(arr)[component]
    raise DataError("gradients are defined for the approximate maps only")


def map_triple(kind: GevMapKind, m) -> GevParams:
    if kind is GevMapKind.PWM_EXACT:
        return pwm_to_gev_exact(m)
    if kind is GevMapKind.PWM_APPROX:
        return pwm_to_gev_approx(m)
    if kind is GevMapKind.GPWM_EXACT:
        return gpwm_to_gev_exact(m)
    return gpwm_to_gev_approx(m)
