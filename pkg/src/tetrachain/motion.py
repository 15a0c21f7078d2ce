"""Closed-form chain matrix, rigid-motion decomposition, and asymptotics.

For the quadrahelix the product of all 4L+2 reflection matrices collapses to
a closed form in L and the reduced total turn angle: with sigma =
sin^2(delta/2) and s = sin(delta),

    K = I + sigma * (4/3125) * (H0 + H1*sigma + H2*sigma^2 + H3*sigma^3),

where each H is an integer combination of 1, L, sqrt(5)*s, and
L*sqrt(5)*s.  This is an exact identity (verified against the exact
rational products), so chains far too long to multiply out -- parameters
with hundreds of digits -- are evaluated through it.

The H1 sin-delta block below is the variant that reproduces the exact
rational product; a one-tenth-scaled variant of the same block is close
enough to be mistaken for correct and is kept as _H1_SIN_REJECTED so the
tests can assert that it is not.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf

from .bary import BaryMatrix
from .geometry import (
    RealizedChain,
    Tetrahedron,
    apply_bary,
    helix_vertex,
    invisible_t0,
)
from .metrics import hausdorff_tetra, maxnorm, spectral_norm
from .precision import (
    Constants,
    PrecisionError,
    RealCtx,
    make_constants,
    reduce_theta_multiple,
)

# --- closed-form coefficient tables ------------------------------------------

H0_CONST = ((6, 21, 6, -9), (-22, -7, -2, 3), (-2, -7, -2, 3), (18, -7, -2, 3))
H0_LIN = ((3, 3, 3, 3), (-1, -1, -1, -1), (-1, -1, -1, -1), (-1, -1, -1, -1))
H0_SIN = ((-1, -6, 9, -6), (7, 2, -3, 2), (-13, 2, -3, 2), (7, 2, -3, 2))

H1_CONST = ((-120, -45, 0, 45), (76, -69, -24, 21), (40, 15, 0, -15), (4, 99, 24, -51))
H1_LIN = ((0, 0, 0, 0), (-1, -1, -1, -1), (0, 0, 0, 0), (1, 1, 1, 1))
H1_SIN = (
    (0, 0, 0, 0),
    (60, 260, -140, 60),
    (-80, -280, -80, 120),
    (20, 20, 220, -180),
)
_H1_SIN_REJECTED = (
    (0, 0, 0, 0),
    (6, 26, -14, 6),
    (-8, -28, -8, 12),
    (2, 2, 22, -18),
)
H1_LINSIN = ((0, 0, 0, 0), (1, 1, 1, 1), (-2, -2, -2, -2), (1, 1, 1, 1))

H2_CONST = (
    (-6, -21, -6, 9),
    (26, 31, 26, -39),
    (6, 31, -34, 21),
    (-26, -41, 14, 9),
)
H2_LIN = ((-3, -3, -3, -3), (4, 4, 4, 4), (1, 1, 1, 1), (-2, -2, -2, -2))
H2_SIN = ((1, 6, -9, 6), (-8, -13, 12, -3), (13, 8, 3, -12), (-6, -1, -6, 9))

H3_CONST = ((4, 3, 0, -3), (-5, -2, -3, 6), (-2, -5, 6, -3), (3, 4, -3, 0))

# lim (K - I)/(L*delta^2) as delta -> 0 over convergent L; rank one, with
# spectral norm 8*sqrt(3)/25
LIMIT_MATRIX_NUM = ((3, 3, 3, 3), (-1, -1, -1, -1), (-1, -1, -1, -1), (-1, -1, -1, -1))
LIMIT_MATRIX_SCALE = (2, 25)  # 2/25


def k_formula(L: int, ctx: RealCtx, delta_bar=None, h1_sin=None):
    """Evaluate the closed-form chain matrix K(L) as 4x4 mpf rows.

    delta_bar may be passed in when the caller has already reduced
    (L+1)*theta; otherwise it is computed here with the exact big-integer
    reduction, so L may have any number of digits.
    """
    h1_sin = H1_SIN if h1_sin is None else h1_sin
    if delta_bar is None:
        delta_bar, _ = reduce_theta_multiple(L + 1, ctx)
    with ctx.work():
        d = mpf(delta_bar)
        sqrt5 = mp.sqrt(5)
        sig = mp.sin(d / 2) ** 2
        s = mp.sin(d)
        Lm = mpf(int(L))
        rows = []
        for i in range(4):
            row = []
            for j in range(4):
                h0 = 125 * H0_CONST[i][j] + 250 * H0_LIN[i][j] * Lm + 75 * sqrt5 * H0_SIN[i][j] * s
                h1 = (
                    50 * H1_CONST[i][j]
                    + 1200 * H1_LIN[i][j] * Lm
                    + 6 * sqrt5 * h1_sin[i][j] * s
                    + 240 * sqrt5 * H1_LINSIN[i][j] * Lm * s
                )
                h2 = 240 * H2_CONST[i][j] + 480 * H2_LIN[i][j] * Lm + 144 * sqrt5 * H2_SIN[i][j] * s
                h3 = 1440 * H3_CONST[i][j]
                val = sig * mpf(4) / 3125 * (h0 + h1 * sig + h2 * sig**2 + h3 * sig**3)
                if i == j:
                    val += 1
                row.append(val)
            rows.append(row)
        return rows


@dataclass(frozen=True)
class ClosedFormGap:
    """Gap metrics of QH_L evaluated through the closed form (canonical lead)."""

    L: int
    k: int  # nearest multiple of 2*pi in (L+1)*theta
    delta_bar: mpf
    gap: mpf  # Hausdorff distance of the final tetrahedron from the seed
    norm_gap: mpf  # ||K - I||_2, an upper bound for gap


def closed_form_gap(L: int, ctx: RealCtx, c: Constants | None = None) -> ClosedFormGap:
    """Gap of QH_L via the closed form; works for L of any size."""
    c = c or make_constants(ctx)
    delta_bar, k = reduce_theta_multiple(int(L) + 1, ctx)
    K = k_formula(L, ctx, delta_bar=delta_bar)
    with ctx.work():
        # for generic (non-convergent) L the end tetrahedron sits a distance
        # ~ L*delta^2 out, and the Hausdorff distance of two unit tetrahedra
        # that far away is pure cancellation unless we carry enough digits
        scale = max(abs(K[i][j]) for i in range(4) for j in range(4))
        if scale > mpf(10) ** (ctx.digits - 12):
            need = int(mp.ceil(mp.log10(scale))) + 12
            raise PrecisionError(
                f"chain end lies ~1e{int(mp.log10(scale))} seed-edges away; "
                f"resolving the gap needs digits >= {need}, have {ctx.digits}"
            )
        t0 = invisible_t0(c)
        tn = apply_bary(t0, K)
        gap = hausdorff_tetra(t0, tn)
        diff = [[K[i][j] - (1 if i == j else 0) for j in range(4)] for i in range(4)]
        norm2 = spectral_norm(diff, ctx)
    return ClosedFormGap(L=int(L), k=k, delta_bar=delta_bar, gap=gap, norm_gap=norm2)


# --- rigid-motion decomposition ----------------------------------------------


@dataclass(frozen=True)
class RigidMotion:
    """The Cartesian motion carrying the seed tetrahedron to the chain's end.

    R is the rotation, t the translation; w spans the rotation axis
    direction and u is a point on the axis (None for a pure translation).
    """

    R: tuple  # 3x3 mpf rows
    t: tuple  # 3 mpf
    w: tuple | None
    u: tuple | None
    angle: mpf


def _mat_mul(A, B):
    return [
        [sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))]
        for i in range(len(A))
    ]


def _inv(M):
    n = len(M)
    A = [list(row) + [mpf(1 if i == j else 0) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(A[r][col]))
        A[col], A[piv] = A[piv], A[col]
        d = A[col][col]
        A[col] = [x / d for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def _cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _norm(v):
    return mp.sqrt(sum(x * x for x in v))


def homogeneous_t0(t0: Tetrahedron):
    """The 4x4 vertex matrix: columns are vertices with an appended 1-row."""
    return [
        [t0.vertices[j][i] for j in range(4)] for i in range(3)
    ] + [[mpf(1)] * 4]


def decompose_motion(K, t0: Tetrahedron, ctx: RealCtx) -> RigidMotion:
    """Split the chain map into rotation R, translation t, and screw axis (w, u).

    The homogeneous vertex matrix conjugates barycentric K into Cartesian
    form; the axis direction is the normalized cross product of the two
    largest columns of R - I, and the axis point solves u - R u = t in the
    plane orthogonal to w (coordinates Q = [t/|t|, w x t/|t|]).
    """
    if isinstance(K, BaryMatrix):
        K = K.to_mpf(ctx)
    with ctx.work():
        T = homogeneous_t0(t0)
        RR = _mat_mul(_mat_mul(T, [list(r) for r in K]), _inv(T))
        R = tuple(tuple(RR[i][:3]) for i in range(3))
        t = tuple(RR[i][3] for i in range(3))
        RmI = [[R[i][j] - (1 if i == j else 0) for j in range(3)] for i in range(3)]
        if maxnorm(RmI) < mpf(10) ** (-ctx.digits // 2):
            return RigidMotion(R=R, t=t, w=None, u=None, angle=mpf(0))
        colnorms = [_norm([RmI[i][j] for i in range(3)]) for j in range(3)]
        i1, i2 = sorted(range(3), key=lambda j: -colnorms[j])[:2]
        w = _cross(
            [RmI[i][i1] for i in range(3)], [RmI[i][i2] for i in range(3)]
        )
        w = tuple(x / _norm(w) for x in w)
        tn = _norm(t)
        ts = tuple(x / tn for x in t)
        q2 = _cross(w, ts)
        Q = [(ts[i], q2[i]) for i in range(3)]
        QtRQ = [
            [
                sum(Q[a][i] * R[a][b] * Q[b][j] for a in range(3) for b in range(3))
                for j in range(2)
            ]
            for i in range(2)
        ]
        M2 = [[(1 if i == j else 0) - QtRQ[i][j] for j in range(2)] for i in range(2)]
        det = M2[0][0] * M2[1][1] - M2[0][1] * M2[1][0]
        qt_t = [sum(Q[a][i] * t[a] for a in range(3)) for i in range(2)]
        y0 = (M2[1][1] * qt_t[0] - M2[0][1] * qt_t[1]) / det
        y1 = (-M2[1][0] * qt_t[0] + M2[0][0] * qt_t[1]) / det
        u = tuple(Q[i][0] * y0 + Q[i][1] * y1 for i in range(3))
        trace = R[0][0] + R[1][1] + R[2][2]
        cosang = (trace - 1) / 2
        cosang = max(mpf(-1), min(mpf(1), cosang))
        return RigidMotion(R=R, t=t, w=w, u=u, angle=mp.acos(cosang))


def motion_residuals(m: RigidMotion, ctx: RealCtx) -> dict:
    """Numerical residuals of the defining invariants of a screw motion."""
    with ctx.work():
        R, t = m.R, m.t
        rtr = [
            [sum(R[k][i] * R[k][j] for k in range(3)) for j in range(3)]
            for i in range(3)
        ]
        orth = max(
            abs(rtr[i][j] - (1 if i == j else 0)) for i in range(3) for j in range(3)
        )
        det = (
            R[0][0] * (R[1][1] * R[2][2] - R[1][2] * R[2][1])
            - R[0][1] * (R[1][0] * R[2][2] - R[1][2] * R[2][0])
            + R[0][2] * (R[1][0] * R[2][1] - R[1][1] * R[2][0])
        )
        out = {"orthogonality": orth, "det_minus_1": abs(det - 1)}
        if m.w is not None:
            wR = [sum(m.w[i] * R[i][j] for i in range(3)) for j in range(3)]
            out["axis_invariance"] = max(abs(wR[j] - m.w[j]) for j in range(3))
            out["w_dot_t"] = abs(sum(a * b for a, b in zip(m.w, t)))
            Ru = [sum(R[i][j] * m.u[j] for j in range(3)) for i in range(3)]
            out["axis_point"] = max(abs(m.u[i] - Ru[i] - t[i]) for i in range(3))
        return out


def motion_eigenvalues(K, ctx: RealCtx):
    """Eigenvalues of the 4x4 chain matrix (expected: z, conj(z), 1, 1)."""
    with ctx.work():
        E, _ = mp.eig(mp.matrix([list(r) for r in K]))
        return sorted(E, key=lambda z: (mp.re(z), mp.im(z)))


def rank_of_k_minus_i(K, ctx: RealCtx, tol=None) -> int:
    with ctx.work():
        diff = [[K[i][j] - (1 if i == j else 0) for j in range(4)] for i in range(4)]
        mtm = mp.matrix(4)
        for i in range(4):
            for j in range(4):
                mtm[i, j] = sum(diff[k][i] * diff[k][j] for k in range(4))
        eigs = mp.eigsy(mtm, eigvals_only=True)
        top = max(max(eigs), mpf(10) ** (-2 * ctx.digits))
        tol = tol if tol is not None else top * mpf(10) ** (-ctx.digits // 2)
        return sum(1 for e in eigs if e > tol)


def left_kernel_residuals(K, w, t0: Tetrahedron, ctx: RealCtx) -> dict:
    """Residuals of the two expected left-null rows of K - I."""
    with ctx.work():
        ones = max(
            abs(sum(K[i][j] - (1 if i == j else 0) for i in range(4)))
            for j in range(4)
        )
        wt0 = [sum(w[i] * t0.vertices[j][i] for i in range(3)) for j in range(4)]
        wrow = max(
            abs(sum(wt0[i] * (K[i][j] - (1 if i == j else 0)) for i in range(4)))
            for j in range(4)
        )
        return {"ones_row": ones, "w_t0_row": wrow}


# --- turn-angle identities and bounds ----------------------------------------

ACUTE_NORMAL = "the unit normal (sqrt(10), 2*sqrt(2), 3*sqrt(3)) / (3*sqrt(5))"


def corollary_angle_checks(L: int, c: Constants) -> dict:
    """The screw-angle identity computed two independent ways, plus the norm bound.

    sin(rho) = (2*sqrt(6)/5) * sin^2(delta_bar/2) should equal the dot
    product of the fixed unit normal A with V_{L+3} - V_{L+1}; and the
    rotation satisfies ||R - I||_2 <= delta_bar^2.
    """
    ctx = c.ctx
    delta_bar, _ = reduce_theta_multiple(L + 1, ctx)
    with ctx.work():
        sin_rho = (2 * mp.sqrt(6) / 5) * mp.sin(delta_bar / 2) ** 2
        A = (
            mp.sqrt(10) / (3 * mp.sqrt(5)),
            2 * mp.sqrt(2) / (3 * mp.sqrt(5)),
            3 * mp.sqrt(3) / (3 * mp.sqrt(5)),
        )
        va = helix_vertex(L + 3, c)
        vb = helix_vertex(L + 1, c)
        dot_direct = sum(a * (x - y) for a, x, y in zip(A, va, vb))
        rho0 = mp.acos(sin_rho)
        K = k_formula(L, ctx, delta_bar=delta_bar)
        motion = decompose_motion(K, invisible_t0(c), ctx)
        RmI = [
            [motion.R[i][j] - (1 if i == j else 0) for j in range(3)] for i in range(3)
        ]
        r_norm = spectral_norm(RmI, ctx)
        return {
            "rho0": rho0,
            "sin_rho": sin_rho,
            "dot_direct": dot_direct,
            "agreement": abs(sin_rho - dot_direct),
            "motion_angle": motion.angle,
            "r_norm": r_norm,
            "norm_bound_ok": bool(r_norm <= delta_bar**2),
            "delta_bar": delta_bar,
        }


@dataclass(frozen=True)
class QhGapBound:
    L: int
    delta_bar: mpf
    bound: mpf  # 5 L delta_bar^2
    tight_bound: mpf  # 3.51 L delta_bar^2 (intermediate inequality)


def gap_bound_qh(L: int, ctx: RealCtx) -> QhGapBound:
    """A-priori gap bound 5*L*delta_bar^2 for QH_L (meaningful for L >= 17)."""
    delta_bar, _ = reduce_theta_multiple(int(L) + 1, ctx)
    with ctx.work():
        d2 = mpf(int(L)) * delta_bar**2
        return QhGapBound(
            L=int(L), delta_bar=delta_bar, bound=5 * d2, tight_bound=mpf("3.51") * d2
        )


@dataclass(frozen=True)
class OhGapBound:
    L: int
    delta_bar: mpf
    target: str
    bound: mpf  # 3 L delta_bar^2


def gap_bound_oh(L: int, ctx: RealCtx, target: str | None = None) -> OhGapBound:
    """Gap bound 3*L*delta_bar^2 for OH_L with delta_bar = reduce(L*theta - gamma).

    When no target is named, the one with the smaller |delta_bar| is chosen.
    """
    cands = []
    for name in ("gamma_plus", "gamma_minus") if target is None else (target,):
        d, _ = reduce_theta_multiple(int(L), ctx, offset=name)
        cands.append((abs(d), d, name))
    _, delta_bar, name = min(cands)
    with ctx.work():
        return OhGapBound(
            L=int(L),
            delta_bar=delta_bar,
            target=name,
            bound=3 * mpf(int(L)) * delta_bar**2,
        )


def asymptotic_ratio(L: int, ctx: RealCtx):
    """||K - I||_2 / (L * delta_bar^2); approaches (8/25)*sqrt(3) for convergent L."""
    delta_bar, _ = reduce_theta_multiple(int(L) + 1, ctx)
    K = k_formula(L, ctx, delta_bar=delta_bar)
    with ctx.work():
        diff = [[K[i][j] - (1 if i == j else 0) for j in range(4)] for i in range(4)]
        return spectral_norm(diff, ctx) / (mpf(int(L)) * delta_bar**2)


def limit_matrix_norm(ctx: RealCtx):
    """Spectral norm of the limiting matrix (2/25)*rows(3,3,3,3 / -1.. x3)."""
    with ctx.work():
        num, den = LIMIT_MATRIX_SCALE
        M = [
            [mpf(num) * LIMIT_MATRIX_NUM[i][j] / den for j in range(4)]
            for i in range(4)
        ]
        return spectral_norm(M, ctx)


def t0_operator_norm(c: Constants):
    """||homogeneous T0||_2, with its radical closed form for cross-checking."""
    ctx = c.ctx
    with ctx.work():
        value = spectral_norm(homogeneous_t0(invisible_t0(c)), ctx)
        closed = mp.sqrt(117 + mp.sqrt(8689)) / (5 * mp.sqrt(2))
        return value, closed


def axis_point_norm_bound(L: int, c: Constants):
    """The bound ||u|| <= (5/2) h (2L+1) on the axis point of QH_L."""
    with c.ctx.work():
        return mpf(5) / 2 * c.h * (2 * L + 1)


# --- leg axes ----------------------------------------------------------------


def _string_runs(s):
    """Maximal runs of constant cyclic step; (start, end) letter indices."""
    steps = [(s[i + 1] - s[i]) % 4 for i in range(len(s) - 1)]
    out = []
    start = 0
    for i in range(1, len(steps)):
        if steps[i] != steps[i - 1]:
            out.append((start, i))
            start = i
    out.append((start, len(steps)))
    return out


def leg_axes(chain: RealizedChain, c: Constants, min_steps: int = 3) -> list:
    """Axis directions of the straight helical legs of a realized chain.

    A leg is a maximal run of string symbols stepping by a constant cyclic
    increment.  Inside a leg the vertices in ageing order are consecutive
    helix points, so the axis direction solves (W_{i+1} - W_i) . u = h for
    three consecutive differences; the orientation points along growth.
    """
    from .metrics import _solve3

    s = chain.string
    axes = []
    with c.ctx.work():
        for start, end in _string_runs(s):
            if end - start < min_steps:
                continue
            tet = chain.tetrahedra[end]
            ages = chain.ages[end]
            order = sorted(range(4), key=lambda p: ages[p])
            W = [tet.vertices[p] for p in order]
            D = [
                [W[k + 1][axis] - W[k][axis] for axis in range(3)] for k in range(3)
            ]
            u = _solve3(D, [c.h, c.h, c.h])
            n = _norm(u)
            axes.append(tuple(x / n for x in u))
    return axes


def leg_axis_cosines(chain: RealizedChain, c: Constants) -> list:
    """Cosines between consecutive leg axes (sec of the printed leg angles)."""
    axes = leg_axes(chain, c)
    with c.ctx.work():
        return [
            sum(a * b for a, b in zip(axes[i], axes[i + 1]))
            for i in range(len(axes) - 1)
        ]


# --- the limiting rhombus -----------------------------------------------------


def limiting_rhombus(ctx: RealCtx) -> dict:
    """Solve the unit-side rhombus with alternating leg-dot-products +-1/5.

    Two vertices are pinned at (0,0) and (0,1); the unique solution with
    positive x has the other two at (2*sqrt(6)/5, 4/5) and
    (2*sqrt(6)/5, -1/5).  Returns vertices, interior angles (alternating
    arccos(+-1/5), i.e. sec-inverse of +-5), and the short diagonal.
    """
    with ctx.work():

        def equations(x3, y3, x4, y4):
            a1 = (mpf(0), mpf(0))
            a2 = (mpf(0), mpf(1))
            a3 = (x3, y3)
            a4 = (x4, y4)
            legs = [
                (a2[0] - a1[0], a2[1] - a1[1]),
                (a3[0] - a2[0], a3[1] - a2[1]),
                (a4[0] - a3[0], a4[1] - a3[1]),
                (a1[0] - a4[0], a1[1] - a4[1]),
            ]
            eqs = [legs[i][0] ** 2 + legs[i][1] ** 2 - 1 for i in (1, 2, 3)]
            eqs.append(legs[0][0] * legs[1][0] + legs[0][1] * legs[1][1] + mpf(1) / 5)
            return eqs

        x3, y3, x4, y4 = mp.findroot(
            equations, (mpf(1), mpf("0.8"), mpf(1), mpf("-0.2"))
        )
        verts = ((mpf(0), mpf(0)), (mpf(0), mpf(1)), (x3, y3), (x4, y4))
        angles = []
        for i in range(4):
            prev = verts[(i - 1) % 4]
            cur = verts[i]
            nxt = verts[(i + 1) % 4]
            v1 = (prev[0] - cur[0], prev[1] - cur[1])
            v2 = (nxt[0] - cur[0], nxt[1] - cur[1])
            angles.append(mp.acos(v1[0] * v2[0] + v1[1] * v2[1]))
        short_diag = mp.sqrt((verts[2][0] - verts[0][0]) ** 2 + (verts[2][1] - verts[0][1]) ** 2)
        return {"vertices": verts, "angles": angles, "short_diagonal": short_diag}
