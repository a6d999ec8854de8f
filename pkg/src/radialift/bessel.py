"""Bessel functions J_nu and the normalized form Jt_nu(x) = x^(-nu) J_nu(x).

Orders are integer or half-integer with nu >= -1/2, which is exactly what the
radial transform needs (nu = n/2 - 1 for dimension n >= 1).  Evaluation
strategy, chosen for absolute accuracy <= 1e-12 up to x = 1e4:

* x < 1 (any order) and x <= 14 (integer orders): power series of Jt_nu,
  accumulated in extended precision to beat the cancellation near the
  upper end of the range.
* half-integer orders, x >= 1: closed forms for nu = -1/2, 1/2
  (sqrt(2/(pi x)) cos x and sqrt(2/(pi x)) sin x), then the three-term
  recurrence: upward when x >= nu, downward Miller-style otherwise.
* integer orders, x > 14: Hankel asymptotic expansion for J_0, J_1,
  then the same recurrence policy for higher orders.

The series/asymptotic switch sits at 14 because the optimally truncated
asymptotic series bottoms out near 5e-13 at x = 12; at 14 both branches
agree to ~2e-14 (covered by an overlap test).

Zero finding uses McMahon's expansion for initial guesses, polished by
bisection plus Newton.  All functions are pure; the zero cache only grows.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .errors import BesselDomainError, UnsupportedOrderError, ZeroFindingError

__all__ = ["Order", "bessel_j", "bessel_j_tilde", "bessel_zeros", "jtilde_at_zero"]

_SERIES_ASYMPTOTIC_SWITCH = 14.0
_MAX_TWICE_NU = 120


@dataclass(frozen=True)
class Order:
    """Bessel order nu = twice_nu / 2; covers integers and half-integers."""

    twice_nu: int

    def __post_init__(self):
        if self.twice_nu < -1:
            raise UnsupportedOrderError(
                f"order {self.twice_nu/2} below -1/2 is not supported")
        if self.twice_nu > _MAX_TWICE_NU:
            raise UnsupportedOrderError(
                f"order {self.twice_nu/2} beyond {_MAX_TWICE_NU/2} is not supported")

    @property
    def nu(self):
        return self.twice_nu / 2.0

    @property
    def is_half_integer(self):
        return self.twice_nu % 2 != 0

    @classmethod
    def for_dimension(cls, n):
        """nu = n/2 - 1 for the n-dimensional radial transform."""
        if n < 1:
            raise BesselDomainError(f"dimension must be >= 1, got {n}")
        return cls(n - 2)

    def __str__(self):
        return f"{self.twice_nu}/2" if self.is_half_integer else str(self.twice_nu // 2)


def jtilde_at_zero(nu):
    """Limit value Jt_nu(0) = 1 / (2^nu Gamma(nu+1))."""
    v = nu.nu if isinstance(nu, Order) else float(nu)
    return 1.0 / (2.0 ** v * math.gamma(v + 1.0))


# ---------------------------------------------------------------------------
# power series of Jt_nu (extended precision accumulation)

def _jtilde_series(nu, x):
    """Jt_nu on an ndarray via the alternating power series.

    Jt_nu(x) = sum_m (-1)^m x^(2m) / (2^(2m+nu) m! Gamma(m+nu+1)).
    """
    xl = np.asarray(x, dtype=np.longdouble)
    x2 = xl * xl
    term = np.full_like(xl, np.longdouble(jtilde_at_zero(nu)))
    total = term.copy()
    for m in range(1, 120):
        term = term * (-x2 / np.longdouble(4.0 * m * (m + nu)))
        total += term
        if np.all(np.abs(term) <= 1e-22 * (1.0 + np.abs(total))):
            break
    return np.asarray(total, dtype=float)


# ---------------------------------------------------------------------------
# Hankel asymptotic expansion for integer orders 0 and 1 (x large)

def _j_asymptotic(nu_int, x):
    """J_nu for nu in {0, 1} on an ndarray, x > ~10."""
    mu = 4.0 * nu_int * nu_int
    inv_x = 1.0 / np.asarray(x, dtype=float)
    p = np.ones_like(inv_x)
    q = np.zeros_like(inv_x)
    # a_k / x^k built incrementally; stop at the smallest term
    term = np.ones_like(inv_x)
    prev_size = np.inf
    for k in range(1, 40):
        term = term * ((mu - (2 * k - 1) ** 2) / (8.0 * k)) * inv_x
        size = float(np.max(np.abs(term)))
        if size >= prev_size or size < 1e-20:
            break
        prev_size = size
        if k % 2 == 1:
            q += term if k % 4 == 1 else -term
        else:
            p += term if k % 4 == 0 else -term
    chi = x - nu_int * (math.pi / 2.0) - math.pi / 4.0
    return np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))


# ---------------------------------------------------------------------------
# recurrences

def _recur_upward(j_lo, j_hi, nu_lo, steps, x):
    """From (J_{nu_lo}, J_{nu_lo+1}) step the order up; returns J at the top."""
    for i in range(steps):
        nu = nu_lo + 1 + i
        j_lo, j_hi = j_hi, (2.0 * nu / x) * j_hi - j_lo
    return j_hi


def _miller_downward(target_idx, base_idx, nu_of, base_value_fn, x):
    """Downward (Miller) recurrence on an ndarray x.

    Orders are indexed so that nu_of(i) is increasing; recur from a trial
    start well above target_idx down to base_idx, then rescale with the
    independently known values at base_idx and base_idx+1 (the larger of
    the two anchors wins, which keeps the normalization away from zeros).
    """
    x = np.asarray(x, dtype=float)
    start = target_idx + max(18, target_idx // 2 + 10)
    j_hi = np.zeros_like(x)
    j_lo = np.full_like(x, 1e-30)
    out = None
    anchor0 = anchor1 = None
    for i in range(start, base_idx - 1, -1):
        # j_lo currently holds trial J at index i
        if i == target_idx:
            out = j_lo.copy()
        if i == base_idx + 1:
            anchor1 = j_lo.copy()
        if i == base_idx:
            anchor0 = j_lo.copy()
            break
        nu = nu_of(i)
        j_lo, j_hi = (2.0 * nu / x) * j_lo - j_hi, j_lo
    true0 = base_value_fn(base_idx, x)
    true1 = base_value_fn(base_idx + 1, x)
    use0 = np.abs(true0) >= np.abs(true1)
    denom = np.where(use0, anchor0, anchor1)
    truth = np.where(use0, true0, true1)
    scale = np.where(denom != 0, truth / np.where(denom != 0, denom, 1.0), 0.0)
    return out * scale


def _halfint_closed(idx, x):
    """J at half-integer index: idx 0 -> nu=-1/2, idx 1 -> nu=1/2."""
    amp = np.sqrt(2.0 / (math.pi * x))
    return amp * np.cos(x) if idx == 0 else amp * np.sin(x)


def _j_halfint_large(twice_nu, x):
    """Half-integer J_nu on ndarray x >= 1 via closed forms + recurrence."""
    idx = (twice_nu + 1) // 2          # nu = idx - 1/2
    if idx <= 1:
        return _halfint_closed(idx, x)
    nu = twice_nu / 2.0
    out = np.empty_like(x)
    up = x >= nu
    if np.any(up):
        xs = x[up]
        out[up] = _recur_upward(_halfint_closed(0, xs), _halfint_closed(1, xs),
                                -0.5, idx - 1, xs)
    if np.any(~up):
        xs = x[~up]
        out[~up] = _miller_downward(idx, 0, lambda i: i - 0.5,
                                    _halfint_closed, xs)
    return out


def _int_anchor(idx, x):
    return _j_asymptotic(idx, x)


def _j_int_large(nu_int, x):
    """Integer J_nu on ndarray x > switch point."""
    if nu_int <= 1:
        return _j_asymptotic(nu_int, x)
    out = np.empty_like(x)
    up = x >= nu_int
    if np.any(up):
        xs = x[up]
        out[up] = _recur_upward(_j_asymptotic(0, xs), _j_asymptotic(1, xs),
                                0.0, nu_int - 1, xs)
    if np.any(~up):
        xs = x[~up]
        out[~up] = _miller_downward(nu_int, 0, lambda i: float(i),
                                    _int_anchor, xs)
    return out


# ---------------------------------------------------------------------------
# public evaluation

def _as_order(nu):
    if isinstance(nu, Order):
        return nu
    twice = 2.0 * float(nu)
    if not twice.is_integer():
        raise UnsupportedOrderError(f"order must be integer or half-integer, got {nu}")
    return Order(int(twice))


def _jtilde_array(order, x):
    """Jt_nu on an ndarray with x >= 0, dispatching per regime."""
    nu = order.nu
    out = np.empty_like(x)
    if order.is_half_integer:
        small = x < 1.0
    else:
        small = x <= _SERIES_ASYMPTOTIC_SWITCH
    if np.any(small):
        out[small] = _jtilde_series(nu, x[small])
    if np.any(~small):
        xs = x[~small]
        j = _j_halfint_large(order.twice_nu, xs) if order.is_half_integer \
            else _j_int_large(order.twice_nu // 2, xs)
        out[~small] = j * xs ** (-nu)
    return out


def bessel_j_tilde(nu, x):
    """Jt_nu(x) = x^(-nu) J_nu(x), continuous at 0; scalar or ndarray x >= 0."""
    order = _as_order(nu)
    scalar = np.isscalar(x)
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(arr < 0):
        raise BesselDomainError("bessel_j_tilde requires x >= 0")
    out = _jtilde_array(order, arr)
    return float(out[0]) if scalar else out


def bessel_j(nu, x):
    """Classical J_nu(x); scalar or ndarray, x > 0."""
    order = _as_order(nu)
    scalar = np.isscalar(x)
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(arr <= 0):
        raise BesselDomainError("bessel_j requires x > 0")
    out = _jtilde_array(order, arr) * arr ** order.nu
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# zeros

_zero_cache = {}
_zero_lock = threading.Lock()


def _mcmahon_guess(nu, k):
    beta = (k + 0.5 * nu - 0.25) * math.pi
    mu = 4.0 * nu * nu
    guess = beta - (mu - 1.0) / (8.0 * beta) \
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * (8.0 * beta) ** 3)
    if k == 1 and nu >= 2.0:
        # McMahon is poor for the first zero at larger orders
        guess = max(guess, nu + 1.8557571 * nu ** (1.0 / 3.0))
    return guess


def _polish_zero(order, guess, lo_bound, index):
    """Bracket a sign change around the guess, then bisect + Newton."""
    j = lambda t: bessel_j(order, t)
    half = 0.5
    a = max(lo_bound, guess - half)
    b = guess + half
    fa, fb = j(a), j(b)
    grow = 0
    while fa * fb > 0:
        a = max(lo_bound, a - half)
        b += half
        fa, fb = j(a), j(b)
        grow += 1
        if grow > 12:
            raise ZeroFindingError(index, "could not bracket a sign change")
    for _ in range(30):
        mid = 0.5 * (a + b)
        fm = j(mid)
        if fa * fm <= 0:
            b, fb = mid, fm
        else:
            a, fa = mid, fm
        if b - a < 1e-6 * b:
            break
    root = 0.5 * (a + b)
    nu = order.nu
    for _ in range(60):
        f = j(root)
        fp = (nu / root) * f - bessel_j(Order(order.twice_nu + 2), root)
        if fp == 0:
            break
        step = f / fp
        nxt = root - step
        if not (a - 1e-9 <= nxt <= b + 1e-9):
            nxt = 0.5 * (a + b)  # fall back to the bracket midpoint
        if j(a) * j(nxt) <= 0:
            b = nxt
        else:
            a = nxt
        root = nxt
        if abs(step) < 1e-15 * root:
            break
    if abs(j(root)) > 1e-12:
        raise ZeroFindingError(index, f"residual {j(root):.2e} above 1e-12")
    return root


def bessel_zeros(nu, count):
    """First ``count`` positive zeros of J_nu, strictly increasing."""
    order = _as_order(nu)
    if count < 1:
        raise ValueError("count must be >= 1")
    with _zero_lock:
        known = _zero_cache.get(order.twice_nu, [])
        if len(known) >= count:
            return list(known[:count])
        zeros = list(known)
        prev = zeros[-1] if zeros else 0.0
        for k in range(len(zeros) + 1, count + 1):
            guess = _mcmahon_guess(order.nu, k)
            root = _polish_zero(order, guess, prev + 1e-8, k)
            if root <= prev:
                raise ZeroFindingError(k, "zeros not increasing")
            zeros.append(root)
            prev = root
        _zero_cache[order.twice_nu] = zeros
        return list(zeros[:count])
