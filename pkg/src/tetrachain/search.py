"""Searches for nearly-closed chains.

Two routes: continued-fraction convergents of theta/(2*pi) give quadrahelix
lengths whose total turn is almost a whole number of revolutions, and a
Babai-nearest-plane walk on an LLL-reduced planar lattice solves the
inhomogeneous relation x*alpha + y*beta ~ gamma that governs the octahelix
targets.  The lattice arithmetic is exact (integers and Fractions all the
way through); floats appear only when a final error is evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .precision import Constants, PrecisionError, RealCtx, make_constants


@dataclass(frozen=True)
class Convergent:
    k: int  # numerator
    q: int  # denominator; L = q - 1 is the chain parameter
    err: float  # |theta/(2 pi) - k/q|

    @property
    def L(self) -> int:
        return self.q - 1


@dataclass(frozen=True)
class DioSolution:
    x: int
    y: int
    err: float  # |x*alpha + y*beta - gamma|
    kronecker_ok: bool  # err < 3|beta/x|
    target: str  # gamma_plus | gamma_minus


def _cf_denominators(x, count: int) -> list[tuple[int, int]]:
    """First `count` convergents (k, q) of the continued fraction of x."""
    out = []
    h0, h1 = 1, int(mp.floor(x))
    k0, k1 = 0, 1
    frac = x - h1
    out.append((h1, k1))
    while len(out) < count:
        if frac == 0:
            break
        x = 1 / frac
        a = int(mp.floor(x))
        frac = x - a
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        out.append((h1, k1))
    return out


def continued_fraction_convergents(
    c: Constants, count: int, ctx: RealCtx | None = None
) -> list[Convergent]:
    """Convergents k/q of theta/(2*pi), verified stable under precision doubling.

    The continued-fraction expansion is recomputed with twice the working
    digits; any disagreement in the first `count` terms means the requested
    precision cannot support that many convergents, and raises
    :class:`PrecisionError` rather than returning junk.
    """
    ctx = ctx or c.ctx
    with ctx.work():
        first = _cf_denominators(c.theta / c.two_pi, count)
    check_ctx = RealCtx(digits=2 * ctx.digits, guard=ctx.guard)
    c2 = make_constants(check_ctx)
    with check_ctx.work():
        second = _cf_denominators(c2.theta / c2.two_pi, count)
        if first != second[: len(first)] or len(first) < count:
            raise PrecisionError(
                f"continued fraction unstable: {ctx.digits} digits support only "
                f"{sum(a == b for a, b in zip(first, second))} reliable convergents"
            )
        out = []
        for k, q in first:
            err = abs(c2.theta / c2.two_pi - mpf(k) / q)
            out.append(Convergent(k=k, q=q, err=float(err)))
        return out


def kronecker_bound_check(x: int, y: int, alpha, beta, gamma) -> bool:
    """Whether |x*alpha + y*beta - gamma| < 3|beta/x|."""
    if x == 0:
        raise ValueError("x must be nonzero")
    return abs(x * alpha + y * beta - gamma) < 3 * abs(beta / mpf(x))


def _nint_fraction(x: Fraction) -> int:
    """Round half to even, exactly."""
    fl = x.numerator // x.denominator
    rem2 = 2 * (x - fl)
    if rem2 > 1 or (rem2 == 1 and fl % 2 == 1):
        return fl + 1
    return fl


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _lll_2d(b1, b2, delta=Fraction(3, 4)):
    """Textbook LLL on a rank-2 integer basis; returns in termination order.

    The output rows are not norm-sorted: the Lovász condition fixes which
    vector ends up first, and the Babai step downstream depends on that
    order, so we leave it alone.
    """
    b1, b2 = list(b1), list(b2)
    while True:
        mu = Fraction(_dot(b2, b1), _dot(b1, b1))
        m = _nint_fraction(mu)
        if m:
            b2 = [x - m * y for x, y in zip(b2, b1)]
            mu -= m
        if Fraction(_dot(b2, b2)) - mu * mu * _dot(b1, b1) >= (delta - mu * mu) * _dot(
            b1, b1
        ):
            return b1, b2
        b1, b2 = b2, b1


def lattice_basis_determinant(b1, b2, a, b) -> int:
    """det of the change of basis from ((a,1,0),(b,0,1)) to (b1, b2); +-1."""
    # coordinates of b1, b2 in the original basis are their last two entries
    return b1[1] * b2[2] - b1[2] * b2[1]


def babai_lll_search(
    alpha, beta, gamma, X, ctx: RealCtx | None = None, target: str = "gamma_plus"
) -> DioSolution:
    """One Babai nearest-plane solve of x*alpha + y*beta ~ gamma at scale X.

    Steps: tolerance eps = (3|beta|/X)^2; scale s = eps^-2 * max(1,|alpha|,
    |beta|); integerize a = nint(s*alpha), b = nint(s*beta), c = nint(-s*
    gamma); LLL-reduce the lattice spanned by (a,1,0) and (b,0,1);
    Gram-Schmidt; then two nearest-plane subtractions on t = (c,0,0) in
    basis order 2, 1.  The answer is x = t_2, y = t_3 (all rounding half to
    even, performed on exact rationals).
    """
    ctx = ctx or RealCtx()
    with ctx.work():
        # size the working precision from the scale factor: a, b, c below are
        # integers of about 2*log10(s) digits and their rounding must be exact
        s_est = (3 * abs(mpf(beta)) / mpf(X)) ** -4 * max(
            mpf(1), abs(mpf(alpha)), abs(mpf(beta))
        )
        needed = int(2 * mp.log10(s_est)) + 20
    with mp.workdps(max(ctx.workdps, needed)):
        alpha, beta, gamma, X = mpf(alpha), mpf(beta), mpf(gamma), mpf(X)
        eps = (3 * abs(beta) / X) ** 2
        s = eps**-2 * max(mpf(1), abs(alpha), abs(beta))
        a = int(mp.nint(s * alpha))
        b = int(mp.nint(s * beta))
        c0 = int(mp.nint(-s * gamma))
        if a == 0 and b == 0:
            raise ValueError("degenerate scaled basis (alpha and beta both ~ 0)")
        B1, B2 = _lll_2d((a, 1, 0), (b, 0, 1))
        g1 = [Fraction(v) for v in B1]
        mu21 = Fraction(_dot(B2, B1), _dot(B1, B1))
        g2 = [Fraction(v) - mu21 * w for v, w in zip(B2, g1)]
        t = [Fraction(c0), Fraction(0), Fraction(0)]
        for bj, gj in ((B2, g2), (B1, g1)):
            cj = _nint_fraction(Fraction(_dot(t, gj), _dot(gj, gj)))
            t = [u - cj * v for u, v in zip(t, bj)]
        x, y = int(t[1]), int(t[2])
        err = abs(x * alpha + y * beta - gamma)
        ok = x != 0 and kronecker_bound_check(x, y, alpha, beta, gamma)
        return DioSolution(x=x, y=y, err=float(err), kronecker_ok=ok, target=target)


def fixup_negative_x(sol: DioSolution, c: Constants) -> DioSolution:
    """Map a negative-x solution to (-x-1, -y+1) against the conjugate target.

    The two target angles satisfy gamma_plus + gamma_minus + theta = 2*pi,
    so a good approximation with x < 0 for one target converts into one with
    positive x for the other; the error magnitude is preserved exactly.
    """
    if sol.x >= 0:
        raise ValueError("fixup applies to x < 0 only")
    new_target = "gamma_minus" if sol.target == "gamma_plus" else "gamma_plus"
    x, y = -sol.x - 1, -sol.y + 1
    gamma = c.gamma_minus if new_target == "gamma_minus" else c.gamma_plus
    with c.ctx.work():
        err = abs(x * c.theta + y * c.two_pi - gamma)
        ok = x != 0 and kronecker_bound_check(x, y, c.theta, c.two_pi, gamma)
    return DioSolution(x=x, y=y, err=float(err), kronecker_ok=ok, target=new_target)


def lattice_table(c: Constants, ctx: RealCtx | None = None) -> list[DioSolution]:
    """The ten-row lattice-search table: X = 10^i for i = 2, 2.5, ..., 6.5.

    Each slot searches against gamma_plus and applies the negative-x fixup
    when needed, so every reported row has x > 0.
    """
    ctx = ctx or c.ctx
    rows = []
    with ctx.work():
        for twice_i in range(4, 14):
            X = mp.power(10, mpf(twice_i) / 2)
            sol = babai_lll_search(
                c.theta, c.two_pi, c.gamma_plus, X, ctx=ctx, target="gamma_plus"
            )
            if sol.x < 0:
                sol = fixup_negative_x(sol, c)
            rows.append(sol)
    return rows


def random_kronecker_trials(
    n_trials: int, seed: int, ctx: RealCtx | None = None
) -> dict:
    """Run the lattice search on random (alpha, beta, gamma, X) inputs.

    Returns counts of how often the output satisfies the Kronecker bound
    err < 3|beta/x|.  This is a statistical health report on the heuristic,
    not a per-instance guarantee.
    """
    import random

    rng = random.Random(seed)
    ctx = ctx or RealCtx(digits=60)
    ok = zero_x = 0
    with ctx.work():
        for _ in range(n_trials):
            alpha = mpf(rng.uniform(0.3, 10))
            beta = mpf(rng.uniform(0.3, 10))
            gamma = mpf(rng.uniform(0, float(beta)))
            X = mpf(10) ** rng.uniform(2, 4)
            sol = babai_lll_search(alpha, beta, gamma, X, ctx=ctx)
            if sol.x == 0:
                zero_x += 1
            elif sol.kronecker_ok:
                ok += 1
    return {
        "trials": n_trials,
        "kronecker_ok": ok,
        "zero_x": zero_x,
        "rate": ok / n_trials,
    }
