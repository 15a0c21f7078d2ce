"""Precision policy, fundamental constants, and angle reduction.

Everything numeric in this package runs through an explicit :class:`RealCtx`
so that a caller can dial the working precision up or down without touching
global state for longer than a single operation.  The helix constants are
recomputed per call (cheap: a handful of Newton steps) rather than cached,
which keeps the module free of hidden precision coupling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from mpmath import mp, mpf


class PrecisionError(Exception):
    """Raised when a result cannot be trusted at the requested precision."""


@dataclass(frozen=True)
class RealCtx:
    """Working-precision carrier: `digits` significant decimals plus guard digits."""

    digits: int = 40
    guard: int = 15

    def __post_init__(self):
        if self.digits < 30:
            raise ValueError(f"digits must be >= 30, got {self.digits}")
        if self.guard < 1:
            raise ValueError(f"guard must be positive, got {self.guard}")

    @property
    def workdps(self) -> int:
        return self.digits + self.guard

    def work(self):
        """Context manager setting mpmath's decimal precision to digits+guard."""
        return mp.workdps(self.workdps)

    def tol(self, slack: int = 0):
        """10^(-digits + slack) as an mpf at current precision."""
        return mpf(10) ** (-self.digits + slack)


@dataclass(frozen=True)
class Constants:
    """Fundamental helix constants, all computed under one ctx.

    theta is the helix turn angle arccos(-2/3); r and h are the cylinder
    radius 3*sqrt(3)/10 and the rise 1/sqrt(10) per step; eta = sqrt(17)/5 is
    the largest singular value of the seed vertex matrix; gamma_plus and
    gamma_minus = arccos((-3 +- 5*sqrt(3))/12) are the octahelix target
    angles.
    """

    ctx: RealCtx
    theta: mpf = field(repr=False)
    two_pi: mpf = field(repr=False)
    r: mpf = field(repr=False)
    h: mpf = field(repr=False)
    eta: mpf = field(repr=False)
    gamma_plus: mpf = field(repr=False)
    gamma_minus: mpf = field(repr=False)


def _theta_newton(target: mpf) -> mpf:
    """Solve cos(x) = target by Newton iteration from a crude seed."""
    x = mpf(2.3)
    for _ in range(mp.prec):
        f = mp.cos(x) - target
        if f == 0:
            break
        step = f / mp.sin(x)
        x += step
        if abs(step) < mpf(2) ** (-mp.prec + 4):
            break
    return x


def make_constants(ctx: RealCtx) -> Constants:
    """Compute the helix constants at ctx precision.

    theta is computed two independent ways -- Newton's method on
    cos(x) + 2/3 = 0 and the closed form pi - arctan(sqrt(5)/2) -- and the
    two must agree to ctx.digits; a disagreement indicates a precision bug
    somewhere below us and raises :class:`PrecisionError`.
    """
    with ctx.work():
        theta = _theta_newton(mpf(-2) / 3)
        theta_alt = mp.pi - mp.atan(mp.sqrt(5) / 2)
        if abs(theta - theta_alt) > mpf(10) ** (-ctx.digits):
            raise PrecisionError(
                f"theta cross-check failed: |{theta} - {theta_alt}| > 1e-{ctx.digits}"
            )
        return Constants(
            ctx=ctx,
            theta=theta,
            two_pi=2 * mp.pi,
            r=3 * mp.sqrt(3) / 10,
            h=1 / mp.sqrt(10),
            eta=mp.sqrt(17) / 5,
            gamma_plus=mp.acos((-3 + 5 * mp.sqrt(3)) / 12),
            gamma_minus=mp.acos((-3 - 5 * mp.sqrt(3)) / 12),
        )


def reduce_angle(alpha, ctx: RealCtx):
    """Reduce alpha to the unique congruent value in [-pi, pi) modulo 2*pi.

    Raises PrecisionError when |alpha| is so large relative to ctx.digits
    that the subtraction would cancel catastrophically; huge multiples of
    theta should go through :func:`reduce_theta_multiple` instead.
    """
    with ctx.work():
        alpha = mpf(alpha)
        if abs(alpha) / (2 * mp.pi) > mpf(10) ** (ctx.digits - ctx.guard):
            raise PrecisionError(
                f"|alpha| ~ 1e{mp.nstr(mp.log10(abs(alpha)), 3)} exceeds the reducible "
                f"range at {ctx.digits} digits"
            )
        k = mp.floor((alpha + mp.pi) / (2 * mp.pi))
        out = alpha - 2 * mp.pi * k
        # guard the half-open boundary against rounding
        if out >= mp.pi:
            out -= 2 * mp.pi
        if out < -mp.pi:
            out += 2 * mp.pi
        return out


def reduce_theta_multiple(mult: int, ctx: RealCtx, offset: str | None = None):
    """Reduce mult*theta (minus an optional target angle) to [-pi, pi).

    `mult` may be astronomically large (hundreds of digits): theta and pi are
    evaluated with enough extra precision to cover len(str(mult)), and the
    nearest multiple of 2*pi is subtracted as one exact big-integer step, so
    no error accumulates in a loop.

    offset: None, "gamma_plus", or "gamma_minus".

    Returns (reduced angle as mpf carrying ctx.digits significant digits,
    nearest-multiple integer k).
    """
    extra = len(str(abs(int(mult))))
    work = ctx.digits + ctx.guard + extra
    with mp.workdps(work):
        theta = _theta_newton(mpf(-2) / 3)
        t = mpf(int(mult)) * theta
        if offset == "gamma_plus":
            t -= mp.acos((-3 + 5 * mp.sqrt(3)) / 12)
        elif offset == "gamma_minus":
            t -= mp.acos((-3 - 5 * mp.sqrt(3)) / 12)
        elif offset is not None:
            raise ValueError(f"unknown offset {offset!r}")
        k = int(mp.nint(t / (2 * mp.pi)))
        dbar = t - 2 * mp.pi * mpf(k)
        if dbar >= mp.pi:
            dbar -= 2 * mp.pi
            k += 1
        elif dbar < -mp.pi:
            dbar += 2 * mp.pi
            k -= 1
        return +dbar, k
