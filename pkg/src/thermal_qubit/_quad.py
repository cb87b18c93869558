"""Thin wrapper around :func:`scipy.integrate.quad` that raises on failure."""
import math
import warnings

from scipy import integrate

from .errors import QuadratureError


def quad(f, a, b, *, rtol=1e-10, atol=0.0, points=None, limit=400, label="integral"):
    if a == b:
        return 0.0
    kwargs = dict(epsabs=atol, epsrel=rtol, limit=limit, full_output=1)
    if points is not None and math.isfinite(b):
        pts = sorted({float(x) for x in points if a < x < b})
        if pts:
            kwargs["points"] = pts
            kwargs["limit"] = max(limit, 4 * len(pts))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, a, b, **kwargs)
    value, abserr = out[0], out[1]
    if not math.isfinite(value):
        raise QuadratureError(f"{label}: non-finite result on [{a}, {b}]",
                              {"a": a, "b": b, "value": value})
    if len(out) > 3:
        # ier > 0; accept round-off limited results that still meet the target
        target = max(atol, rtol * abs(value))
        if abserr > 10.0 * target and abserr > 1e-300:
            raise QuadratureError(
                f"{label}: {out[3].splitlines()[0] if out[3] else 'no convergence'}",
                {"a": a, "b": b, "value": value, "abserr": abserr,
                 "last": out[2].get("last")})
    return value
