"""Adaptive quadrature helpers with singular-endpoint handling.

Wraps scipy's Gauss-Kronrod integrator (QUADPACK) and adds dyadic shell
summation toward a singular endpoint at zero, with explicit divergence
detection for integrands like w^{-1} that QUADPACK cannot flag reliably.
"""

from __future__ import annotations

import math
import warnings

from scipy import integrate as _si

from .errors import QuadratureFailure

RTOL = 1e-8
_MAX_SHELLS = 80


def _quad_raw(fn, a, b, rtol=RTOL):
    """(value, error estimate) over (a, b) without the error gate."""
    if a == b:
        return 0.0, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            val, err = _si.quad(fn, a, b, epsrel=rtol, epsabs=1e-14, limit=200)
        except Exception as exc:  # pragma: no cover - scipy internal failures
            raise QuadratureFailure(f"quad failed on ({a}, {b}): {exc}") from exc
    if not math.isfinite(val):
        raise QuadratureFailure(f"non-finite integral on ({a}, {b})")
    return val, err


def quad(fn, a, b, rtol=RTOL):
    """Integrate fn over (a, b) (b may be inf), raising QuadratureFailure."""
    val, err = _quad_raw(fn, a, b, rtol=rtol)
    if err > max(1e-12, abs(val) * 1e-5):
        raise QuadratureFailure(
            f"quad error estimate {err} too large for value {val} on ({a}, {b})"
        )
    return val


def shell_quad(fn, b, rtol=RTOL):
    """Integrate fn over (0, b) when fn may blow up at 0.

    Sums dyadic shells (b 2^{-k-1}, b 2^{-k}].  Returns (value, finite):
    finite is False when the shell contributions do not decay, signalling a
    divergent integral at the origin.
    """
    if b <= 0:
        return 0.0, True
    total = 0.0
    err_total = 0.0
    prev = None
    streak = 0
    hi = b
    for _ in range(_MAX_SHELLS):
        lo = hi / 2.0
        # per-shell error gating would reject roundoff-dominated estimates on
        # very small shells; only the accumulated error matters here
        piece, err = _quad_raw(fn, lo, hi, rtol=rtol)
        total += piece
        err_total += err
        if prev is not None and abs(piece) < rtol * max(abs(total), 1e-12):
            if err_total > max(1e-12, abs(total) * 1e-5):
                raise QuadratureFailure(
                    f"accumulated shell error {err_total} too large for {total}"
                )
            return total, True
        if prev is not None and abs(prev) > 0 and abs(piece) >= 0.999 * abs(prev):
            # Contributions not decaying: logarithmic or worse divergence at 0.
            # A single non-decaying shell can be a transient (integrands that
            # peak mid-interval), so require a sustained streak.
            streak += 1
            if streak >= 3:
                return math.inf, False
        else:
            streak = 0
        prev = piece
        hi = lo
    # Shells kept contributing: extrapolate geometrically if decaying.
    if prev is not None and abs(prev) < rtol * max(abs(total), 1e-12):
        return total, True
    return math.inf, False


def quad_full(fn, a, b, rtol=RTOL):
    """Integrate over (a, b) with a possible singularity at a == 0."""
    if a == 0.0 and b > 0:
        cut = min(b, 1.0)
        head, finite = shell_quad(fn, cut, rtol=rtol)
        if not finite:
            return math.inf
        tail = quad(fn, cut, b, rtol=rtol) if b > cut else 0.0
        return head + tail
    return quad(fn, a, b, rtol=rtol)
