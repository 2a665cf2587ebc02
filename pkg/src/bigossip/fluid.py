"""Deterministic mean-field approximation of the rumor process.

With ``alpha * n`` static and ``n`` mobile nodes, the informed proportions
``x`` (static) and ``y`` (mobile) approximately follow

    dx/dt = (1 / (alpha * n)) * (1 - x) * y
    dy/dt = (1 / n) * x * (1 - y)

from ``x(0) = 1/(alpha*n)``, ``y(0) = 1/n`` (one informed static node, one
freshly informed mobile node).  Time is measured in events.  The system has
a closed-form phase curve ``y(x)`` through the principal Lambert W branch,
which :func:`fluid_phase_curve` evaluates; :func:`fluid_trajectory`
integrates the system directly with fixed-step RK4 so the two routes can
be checked against each other.

Numerically the integrator tracks the complements ``(1 - x, 1 - y)``.
Runge-Kutta steps are affine-invariant, so the iterates are mathematically
the ones of the system above, but the complements survive in floating
point long after ``x`` itself would round to 1; this matters whenever
``alpha != 1`` because the slow side approaches 1 like a fractional power
of the fast side.  :func:`phase_curve_residuals` compares a trajectory
against the closed form in complement space for the same reason.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ConvergenceError, DomainError

_BRANCH_POINT = -math.exp(-1.0)
_W_DOMAIN_SLACK = 1e-12
_ABSORB_EPS = 1e-9


@dataclass(frozen=True)
class FluidParams:
    """Mean-field population: ``n_mobile`` mobile and ``alpha * n_mobile`` static nodes."""

    alpha: float
    n_mobile: int

    def __post_init__(self) -> None:
        if not self.alpha > 0.0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if self.n_mobile < 1:
            raise DomainError(f"need n_mobile >= 1, got {self.n_mobile}")
        if self.alpha * self.n_mobile < 1.0:
            raise DomainError("need at least one static node (alpha * n_mobile >= 1)")

    @property
    def n_static(self) -> float:
        return self.alpha * self.n_mobile

    @property
    def x0(self) -> float:
        return 1.0 / (self.alpha * self.n_mobile)

    @property
    def y0(self) -> float:
        return 1.0 / self.n_mobile


@dataclass(frozen=True, eq=False)
class FluidCurve:
    """Sampled integration output.

    ``one_minus_x`` / ``one_minus_y`` are the primary data; the ``x`` and
    ``y`` views are non-decreasing in ``t`` and bounded by 1.
    """

    params: FluidParams
    t: np.ndarray
    one_minus_x: np.ndarray
    one_minus_y: np.ndarray

    @property
    def x(self) -> np.ndarray:
        return 1.0 - self.one_minus_x

    @property
    def y(self) -> np.ndarray:
        return 1.0 - self.one_minus_y


def lambert_w0(z: float) -> float:
    """Principal Lambert W branch: the ``w >= -1`` solution of ``w * e**w = z``.

    Halley iteration from a piecewise initial guess (square-root series
    near the branch point ``-1/e``, log-based for large ``z``); converges
    to ``|w e**w - z| <= 1e-12 * |z|``.  Arguments within ``1e-12`` below
    the branch point are clamped onto it; anything lower is a domain error.
    """
    z = float(z)
    if math.isnan(z):
        raise DomainError("lambert_w0 is undefined for NaN")
    if z < _BRANCH_POINT - _W_DOMAIN_SLACK:
        raise DomainError(f"lambert_w0 argument {z} below branch point -1/e")
    if z <= _BRANCH_POINT:
        return -1.0
    if z == 0.0:
        return 0.0
    if z < -0.25:
        p = math.sqrt(2.0 * (math.e * z + 1.0))
        w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)))
    elif z < math.e:
        w = math.log1p(z)
    else:
        log_z = math.log(z)
        log_log = math.log(log_z)
        w = log_z - log_log + log_log / log_z
    tol = 1e-13 * abs(z)
    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - z
        if abs(f) <= tol:
            break
        wp1 = w + 1.0
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        if denom == 0.0:
            break
        step = f / denom
        w -= step
        if abs(step) <= 1e-14 * (1.0 + abs(w)):
            break
    if abs(w * math.exp(w) - z) > 1e-12 * abs(z):
        raise ConvergenceError(f"lambert_w0 failed to converge at z={z}")
    return w


@njit(cache=True)
def _rk4_complement(inv_static, inv_mobile, u0, v0, dt, max_steps, stride):
    # du/dt = -inv_static * u * (1 - v),  dv/dt = -inv_mobile * (1 - u) * v
    cap = max_steps // stride + 3
    ts = np.empty(cap)
    us = np.empty(cap)
    vs = np.empty(cap)
    u, v = u0, v0
    ts[0], us[0], vs[0] = 0.0, u, v
    k = 1
    for i in range(1, max_steps + 1):
        k1u = -inv_static * u * (1.0 - v)
        k1v = -inv_mobile * (1.0 - u) * v
        u2 = u + 0.5 * dt * k1u
        v2 = v + 0.5 * dt * k1v
        k2u = -inv_static * u2 * (1.0 - v2)
        k2v = -inv_mobile * (1.0 - u2) * v2
        u3 = u + 0.5 * dt * k2u
        v3 = v + 0.5 * dt * k2v
        k3u = -inv_static * u3 * (1.0 - v3)
        k3v = -inv_mobile * (1.0 - u3) * v3
        u4 = u + dt * k3u
        v4 = v + dt * k3v
        k4u = -inv_static * u4 * (1.0 - v4)
        k4v = -inv_mobile * (1.0 - u4) * v4
        u += dt * (k1u + 2.0 * k2u + 2.0 * k3u + k4u) / 6.0
        v += dt * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
        done = max(u, v) < _ABSORB_EPS
        if i % stride == 0 or done or i == max_steps:
            ts[k], us[k], vs[k] = i * dt, u, v
            k += 1
        if done:
            break
    return ts[:k].copy(), us[:k].copy(), vs[:k].copy()


def fluid_trajectory(
    params: FluidParams,
    t_max: float | None = None,
    dt: float | None = None,
    record_stride: int | None = None,
) -> FluidCurve:
    """Integrate the mean-field system with classical fixed-step RK4.

    Integration stops early once ``1 - min(x, y) < 1e-9``.  Defaults:
    ``dt = min(0.01, n_mobile / 1e4)``; ``t_max = 10 N (1 + ln N)`` with
    ``N`` the larger population side, comfortably past mean-field
    absorption; samples are recorded roughly every 0.1 time units (the
    final state is always recorded).
    """
    if dt is None:
        dt = min(0.01, params.n_mobile / 1e4)
    if not dt > 0.0:
        raise DomainError(f"dt must be positive, got {dt}")
    if t_max is None:
        big = max(params.n_mobile, params.n_static)
        t_max = 10.0 * big * (1.0 + math.log(big))
    if not t_max > 0.0:
        raise DomainError(f"t_max must be positive, got {t_max}")
    if record_stride is None:
        record_stride = max(1, round(0.1 / dt))
    if record_stride < 1:
        raise DomainError(f"record_stride must be >= 1, got {record_stride}")
    max_steps = int(math.ceil(t_max / dt))
    ts, us, vs = _rk4_complement(
        1.0 / params.n_static,
        1.0 / params.n_mobile,
        1.0 - params.x0,
        1.0 - params.y0,
        dt,
        max_steps,
        record_stride,
    )
    return FluidCurve(params, ts, us, vs)


def _phase_curve_complement(params: FluidParams, one_minus_x: np.ndarray) -> np.ndarray:
    """``1 - y`` on the phase curve, as a function of ``1 - x`` (stable for tiny values)."""
    u = np.asarray(one_minus_x, dtype=float)
    if np.any(u < -1e-12) or np.any(u > 1.0 - params.x0 + 1e-12):
        raise DomainError(f"1 - x must lie in [0, {1.0 - params.x0}]")
    u = np.clip(u, 0.0, 1.0 - params.x0)
    n = params.n_mobile
    alpha = params.alpha
    u0 = 1.0 - params.x0
    base = u / u0 if u0 > 0.0 else np.zeros_like(u)
    c = (1.0 / n - 1.0) * base**alpha * np.exp(alpha * (1.0 - u) - 1.0)
    low = float(np.min(c)) if c.size else 0.0
    if low < _BRANCH_POINT - _W_DOMAIN_SLACK:
        raise ConvergenceError(
            f"phase-curve argument {low} fell below -1/e by more than 1e-12"
        )
    out = np.atleast_1d(np.empty_like(c))
    for i, zi in enumerate(np.atleast_1d(c)):
        out[i] = -lambert_w0(zi)
    return out.reshape(np.shape(c))


def fluid_phase_curve(params: FluidParams, x):
    """Mobile proportion ``y`` as a function of the static proportion ``x``.

    Closed form ``y(x) = W0(c(x)) + 1`` where

        ``c(x) = (1/n - 1) * ((1 - x) / (1 - 1/(alpha n)))**alpha * exp(alpha x - 1)``

    The negative-base power of the raw solution is regrouped into the
    positive-base ratio above before exponentiation; this is required for
    non-integer ``alpha``.  ``c`` stays within ``[-1/e, 0]`` for all valid
    inputs; violations beyond a 1e-12 guard raise
    :class:`~bigossip.errors.ConvergenceError` instead of being clamped.

    Accepts a scalar or an array; the domain is ``1/(alpha n) <= x <= 1``.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr < params.x0 - 1e-12) or np.any(arr > 1.0 + 1e-12):
        raise DomainError(f"x must lie in [{params.x0}, 1]")
    complement = _phase_curve_complement(params, 1.0 - np.clip(arr, params.x0, 1.0))
    result = 1.0 - complement
    if arr.ndim == 0:
        return float(result)
    return result


def phase_curve_residuals(curve: FluidCurve) -> np.ndarray:
    """Per-sample gap ``|y(t) - y_closed(x(t))|`` along an integrated curve.

    Evaluated in complement space, so the comparison stays meaningful even
    where the fast coordinate has saturated to 1 in float64.
    """
    closed = _phase_curve_complement(curve.params, curve.one_minus_x)
    return np.abs(curve.one_minus_y - closed)


def sup_deviation(path: np.ndarray, params: FluidParams) -> float:
    """Largest gap between a normalized path and the phase curve.

    ``path`` rows end with the ``(x, y)`` proportion pair (the layout
    produced by :func:`bigossip.simulate.normalized_trajectories`); the
    result is ``max |y_i - y(x_i)|``.
    """
    arr = np.asarray(path, dtype=float)
    if arr.size == 0:
        raise DomainError("sup_deviation needs a non-empty path")
    xs = arr[:, -2]
    ys = arr[:, -1]
    return float(np.max(np.abs(ys - fluid_phase_curve(params, xs))))
