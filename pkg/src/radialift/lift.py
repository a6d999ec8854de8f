"""The dimension-recursion operator and its multi-step closed form.

One application of the operator maps the n-dimensional radial Fourier
transform F to the (n+2)-dimensional one:

    F_(n+2)(rho) = -(1 / (2 pi rho)) * dF_n/drho        (rho > 0)

so that k applications land at dimension n + 2k.  The k-step version
expands into the basis rho^-(2k-l) D^l with exact rational coefficients

    c_(k,l) = (-1)^l (2k-l-1)! / (2^(k-l) (k-l)! (l-1)!),

here kept as exact Fractions (factorials overflow 64-bit integers around
k = 10).  ``iterate_operator_symbolic`` rebuilds the same table by applying
the rewrite rho^-m D^l -> -(1/rho) D (rho^-m D^l) exactly, and is the
independent oracle for the closed-form coefficients.

Differentiation engines: symbolic (exact, for expression profiles),
Chebyshev collocation on a window [a, b] with a > 0, and Richardson-
extrapolated central differences.  Numerical differentiation is the
dominant error source of the whole pipeline, so the engine is always
swappable and every numeric result carries a propagated error bound.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import expr as _expr
from .errors import EngineError, ParityError
from .transform import (AnalyticProfile, RadialProfile, _as_profile,
                        radial_fourier)

__all__ = [
    "CoefficientTable", "corollary_coefficients", "iterate_operator_symbolic",
    "DerivativeEngine", "AnalyticEngine", "ChebyshevEngine", "CentralFDEngine",
    "LiftResult", "lift_once", "lift_once_symbolic", "lift_once_at_zero",
    "lift_prediff", "lift_to_dimension", "default_engine",
]

_TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# exact coefficient tables

@dataclass(frozen=True)
class CoefficientTable:
    """Exact coefficients {l: c_(k,l)} of the k-step operator expansion."""

    k: int
    entries: tuple  # ((l, Fraction), ...) sorted by l

    def coefficient(self, ell):
        return dict(self.entries)[ell]

    def as_dict(self):
        return dict(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __str__(self):
        return ", ".join(str(c) for _, c in self.entries)


def corollary_coefficients(k):
    """Closed-form table c_(k,l) for l = 1..k, exact rationals."""
    if k < 1:
        raise ValueError("k must be >= 1")
    entries = []
    for ell in range(1, k + 1):
        num = (-1) ** ell * math.factorial(2 * k - ell - 1)
        den = 2 ** (k - ell) * math.factorial(k - ell) * math.factorial(ell - 1)
        entries.append((ell, Fraction(num, den)))
    return CoefficientTable(k, tuple(entries))


def iterate_operator_symbolic(k):
    """Independent oracle: iterate the rewrite -(1/rho) D, exactly, k times.

    Operators are stored as {(m, l): a} meaning sum of a * rho^-m * D^l.
    After k steps every term has m = 2k - l; the table is read off in that
    basis (the 1/(2 pi)^k prefactor is kept out, matching the closed form).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    terms = {(0, 0): Fraction(1)}
    for _ in range(k):
        nxt = {}
        for (m, ell), a in terms.items():
            # D(a rho^-m D^l F) = -m a rho^-(m+1) D^l F + a rho^-m D^(l+1) F
            # then multiply by -(1/rho)
            key1 = (m + 2, ell)
            nxt[key1] = nxt.get(key1, Fraction(0)) + a * m
            key2 = (m + 1, ell + 1)
            nxt[key2] = nxt.get(key2, Fraction(0)) - a
        terms = {key: a for key, a in nxt.items() if a != 0}
    entries = []
    for (m, ell), a in sorted(terms.items(), key=lambda item: item[0][1]):
        if m != 2 * k - ell:
            raise AssertionError(f"unexpected basis term rho^-{m} D^{ell} at k={k}")
        entries.append((ell, a))
    return CoefficientTable(k, tuple(entries))


# ---------------------------------------------------------------------------
# derivative engines

class DerivativeEngine:
    """Produces d^m/dt^m of a radial profile at a point, with an error bound."""

    name = "engine"

    def derivatives(self, profile, t, max_order):
        """Return ([d0, d1, ..., d_max_order], error_bounds) at t."""
        raise NotImplementedError


class AnalyticEngine(DerivativeEngine):
    """Exact symbolic differentiation; profiles must carry an expression."""

    name = "analytic"

    def derivative_expression(self, profile, order=1):
        e = profile.expression
        if e is None:
            raise EngineError("analytic engine needs an expression profile")
        for _ in range(order):
            e = _expr.simplify(e.diff())
        return e

    def derivatives(self, profile, t, max_order):
        e = profile.expression
        if e is None:
            raise EngineError("analytic engine needs an expression profile")
        out = []
        for m in range(max_order + 1):
            out.append(e.evaluate(t))
            if m < max_order:
                e = _expr.simplify(e.diff())
        return out, [0.0] * (max_order + 1)


class ChebyshevEngine(DerivativeEngine):
    """Chebyshev interpolant of the profile on [a, b], 0 < a, differentiated.

    The error bound per order multiplies the interpolant's coefficient tail
    by the spectral differentiation amplification (2/(b-a)) * degree^2.
    """

    name = "chebyshev"

    def __init__(self, degree=64, interval=(0.1, 4.0)):
        a, b = interval
        if not 0 < a < b:
            raise ValueError("Chebyshev interval needs 0 < a < b")
        if degree < 4:
            raise ValueError("degree must be >= 4")
        self.degree = int(degree)
        self.interval = (float(a), float(b))
        self._cache = weakref.WeakKeyDictionary()

    def _fit(self, profile):
        fit = self._cache.get(profile)
        if fit is None:
            a, b = self.interval
            fit = np.polynomial.chebyshev.Chebyshev.interpolate(
                lambda t: np.real(profile.values(t)), self.degree, domain=[a, b])
            self._cache[profile] = fit
        return fit

    def derivatives(self, profile, t, max_order):
        a, b = self.interval
        if not a <= t <= b:
            raise EngineError(
                f"point {t} outside the Chebyshev window [{a}, {b}]")
        fit = self._fit(profile)
        tail = float(np.max(np.abs(fit.coef[-3:])))
        amp = 2.0 / (b - a) * self.degree ** 2
        values, bounds = [], []
        deriv = fit
        for m in range(max_order + 1):
            values.append(float(deriv(t)))
            bounds.append(tail * amp ** m)
            if m < max_order:
                deriv = deriv.deriv()
        return values, bounds


def _fornberg_weights(z, x, m):
    """Finite-difference weights for derivatives 0..m at z on nodes x."""
    n = len(x)
    c = np.zeros((n, m + 1))
    c1 = 1.0
    c4 = x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for v in range(mn, 0, -1):
                    c[i, v] = c1 * (v * c[i - 1, v - 1] - c5 * c[i - 1, v]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for v in range(mn, 0, -1):
                c[j, v] = (c4 * c[j, v] - v * c[j, v - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c


class CentralFDEngine(DerivativeEngine):
    """Central finite differences with Richardson extrapolation.

    Supports derivative orders up to 4.  The error bound per order is the
    difference between the two finest Richardson levels.
    """

    name = "fd"

    def __init__(self, step=0.01, richardson_levels=2):
        if step <= 0:
            raise ValueError("step must be positive")
        if richardson_levels < 1:
            raise ValueError("need at least one Richardson level")
        self.step = float(step)
        self.levels = int(richardson_levels)

    def _stencil_derivative(self, fn, t, m, h):
        half = m // 2 + 2
        offsets = np.arange(-half, half + 1, dtype=float)
        nodes = t + offsets * h
        weights = _fornberg_weights(t, nodes, m)[:, m]
        vals = np.array([fn(v) for v in nodes])
        return float(np.dot(weights, vals))

    def derivatives(self, profile, t, max_order):
        if max_order > 4:
            raise EngineError("central differences support order <= 4")
        fn = lambda v: float(np.real(profile.values(np.asarray([v]))[0]))
        values = [fn(t)]
        bounds = [0.0]
        for m in range(1, max_order + 1):
            table = []
            h = self.step
            for _ in range(self.levels + 1):
                table.append(self._stencil_derivative(fn, t, m, h))
                h *= 0.5
            # Richardson on the h^2 expansion of the symmetric stencils
            order_gain = 4.0
            for level in range(1, len(table)):
                for j in range(len(table) - 1, level - 1, -1):
                    table[j] = table[j] + (table[j] - table[j - 1]) / (order_gain - 1.0)
                order_gain *= 4.0
            values.append(table[-1])
            bounds.append(abs(table[-1] - table[-2]) if len(table) > 1 else math.inf)
        return values, bounds


def default_engine(profile):
    """Analytic for expression profiles, Chebyshev on a sampled grid, else FD."""
    profile = _as_profile(profile)
    if profile.expression is not None:
        return AnalyticEngine()
    grid = getattr(profile, "grid", None)
    if grid is not None:
        if isinstance(getattr(profile, "engine", None), DerivativeEngine):
            return profile.engine
        return ChebyshevEngine(degree=min(64, len(grid) - 1),
                               interval=(float(grid[0]), float(grid[-1])))
    return CentralFDEngine()


# ---------------------------------------------------------------------------
# the lift

@dataclass
class LiftResult:
    """Lift value, the symbolic derivative when available, and an error bound."""

    value: float
    derivative: object = None  # Expression for the analytic path
    error_estimate: float = 0.0

    def __float__(self):
        return float(self.value)


def lift_once(profile, r, engine=None):
    """One dimension step: -(1/(2 pi r)) d(profile)/dr at r > 0."""
    profile = _as_profile(profile)
    if r <= 0:
        raise ValueError("lift_once needs r > 0; use lift_once_at_zero at the origin")
    engine = engine or default_engine(profile)
    (_, d1), (_, b1) = _pair(engine.derivatives(profile, float(r), 1))
    value = -d1 / (_TWO_PI * r)
    derivative = None
    if isinstance(engine, AnalyticEngine):
        derivative = engine.derivative_expression(profile)
    return LiftResult(_real(value), derivative, abs(b1) / (_TWO_PI * r))


def _pair(result):
    values, bounds = result
    return tuple(values), tuple(bounds)


def _real(x):
    x = complex(x)
    return x.real if x.imag == 0.0 else x


def lift_once_symbolic(expression):
    """The lifted profile as an expression: -(1/(2 pi s)) d(expression)/ds."""
    if isinstance(expression, str):
        expression = _expr.parse(expression)
    lifted = _expr.Quotient(
        _expr.Negate(expression.diff()),
        _expr.Product(_expr.Constant(_TWO_PI), _expr.S))
    return _expr.simplify(lifted)


def lift_once_at_zero(profile, engine=None):
    """Removable-singularity limit of the lift at r = 0: -(1/(2 pi)) F''(0).

    Assumes the even extension (F'(0) = 0).  Numeric engines sample the
    profile through |t|; the analytic path falls back to a shrinking-offset
    limit when the second derivative expression is singular at 0.
    """
    profile = _as_profile(profile)
    engine = engine or default_engine(profile)
    if isinstance(engine, AnalyticEngine):
        d2 = engine.derivative_expression(profile, 2)
        try:
            val = d2.evaluate(0.0)
        except Exception:
            # even profile: F''(h) = F''(0) + O(h^2); Richardson in h^2.
            # Offsets stay well above the cancellation floor of expressions
            # singular at 0 (e.g. sin(t)/t forms).
            f = lambda h: d2.evaluate(h)
            vals = [f(h) for h in (4e-2, 2e-2, 1e-2)]
            first = [(4.0 * b - a) / 3.0 for a, b in zip(vals, vals[1:])]
            val = (16.0 * first[1] - first[0]) / 15.0
        return LiftResult(_real(-val / _TWO_PI), d2, 0.0)
    even = CallableEvenView(profile)
    (_, _, d2), (_, _, b2) = _pair(engine.derivatives(even, 0.0, 2))
    return LiftResult(_real(-d2 / _TWO_PI), None, abs(b2) / _TWO_PI)


class CallableEvenView(RadialProfile):
    """Evaluate a profile at |t| so central stencils can straddle 0."""

    def __init__(self, profile):
        self._profile = profile
        self.is_complex = profile.is_complex

    def values(self, t):
        return self._profile.values(np.abs(np.asarray(t, dtype=float)))


def lift_prediff(profile, n, r, spec=None, force=False):
    """Pre-differentiated lift: differentiate the input profile, then transform.

    Builds eta(t) = n f(t) + t f'(t) symbolically and returns
    (1 / (2 pi r^2)) * F_n(eta)(r), which equals F_(n+2)(f)(r).
    """
    profile = _as_profile(profile)
    if profile.expression is None:
        raise EngineError("lift_prediff needs an analytic profile "
                          "(the input itself is differentiated)")
    if r <= 0:
        raise ValueError("r must be positive")
    e = profile.expression
    eta = _expr.simplify(_expr.Sum(
        _expr.Product(_expr.Constant(float(n)), e),
        _expr.Product(_expr.S, e.diff())))
    transformed = radial_fourier(AnalyticProfile(eta), n, r, spec, force)
    return _real(transformed / (_TWO_PI * r * r))


def lift_to_dimension(profile, base_dim, target_dim, rho, engine=None):
    """Closed multi-step lift from base_dim (1 or 2) to target_dim at rho.

    k = (target_dim - base_dim) / 2 steps:
    value = (2 pi)^-k * sum_l c_(k,l) rho^(l-2k) (D^l profile)(rho).
    target_dim == base_dim is the degenerate identity.
    """
    profile = _as_profile(profile)
    if base_dim not in (1, 2):
        raise ParityError(f"base dimension must be 1 or 2, got {base_dim}")
    step = target_dim - base_dim
    if step < 0 or step % 2 != 0:
        raise ParityError(
            f"target {target_dim} is not base {base_dim} plus an even step")
    if rho <= 0:
        raise ValueError("rho must be positive")
    k = step // 2
    if k == 0:
        return LiftResult(_real(profile.values(np.asarray([rho]))[0]), None, 0.0)
    engine = engine or default_engine(profile)
    values, bounds = engine.derivatives(profile, float(rho), k)
    table = corollary_coefficients(k)
    scale = _TWO_PI ** (-k)
    total = 0.0
    err = 0.0
    for ell, coeff in table:
        weight = float(coeff) * rho ** (ell - 2 * k) * scale
        total += weight * values[ell]
        err += abs(weight) * bounds[ell]
    derivative = None
    if isinstance(engine, AnalyticEngine) and k == 1:
        derivative = engine.derivative_expression(profile)
    return LiftResult(_real(total), derivative, err)
