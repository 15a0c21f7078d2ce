"""Embeddedness certification for realized chains.

Two convex polytopes have disjoint interiors iff a separating plane exists
among the face normals and pairwise edge cross products (separating axis
theorem).  Non-adjacent pairs of a chain are screened with axis-aligned
bounding boxes, decided in float64 when the margin is clear, and re-decided
in arbitrary precision only when the float verdict sits inside the noise
band.  Adjacent pairs must share a face bit-for-bit and are exempt from the
interior test.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpf

from .geometry import RealizedChain, Tetrahedron, tetra_array
from .precision import Constants, RealCtx

_FACE_IDX = ((1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2))
_EDGE_I, _EDGE_J = zip(*itertools.combinations(range(4), 2))
_FLOAT_NOISE = 1e-11  # float64 SAT verdicts closer than this are re-decided exactly


def quadplane_determinant(q: int, c: Constants):
    """The scaled start-plane clearance 20*sqrt(10)*D at helix index q.

    Closed form 6*sqrt(5)*q - 9*sqrt(5) - sqrt(5)*cos(q*theta)
    + 7*sin(q*theta); positivity for q >= 3 certifies that the helix stays
    on the proper side of the bisecting plane, and the value in fact
    dominates the linear bound 13q - 30.
    """
    if q < 3:
        raise ValueError("q must be >= 3")
    with c.ctx.work():
        s5 = mp.sqrt(5)
        a = mpf(q) * c.theta
        return 6 * s5 * q - 9 * s5 - s5 * mp.cos(a) + 7 * mp.sin(a)


def quadplane_determinant_direct(q: int, c: Constants):
    """The same clearance from an explicit 3x3 determinant of helix points.

    Rows are V_q - V_1, V_q - V_2, and V_q - (V_0 + V_3)/2, scaled by
    20*sqrt(10); used as an independent oracle for the closed form.
    """
    from .geometry import helix_vertex

    with c.ctx.work():
        vq = helix_vertex(q, c)
        v0, v1, v2, v3 = (helix_vertex(i, c) for i in range(4))
        mid = tuple((a + b) / 2 for a, b in zip(v0, v3))
        r1 = tuple(a - b for a, b in zip(vq, v1))
        r2 = tuple(a - b for a, b in zip(vq, v2))
        r3 = tuple(a - b for a, b in zip(vq, mid))
        det = (
            r1[0] * (r2[1] * r3[2] - r2[2] * r3[1])
            - r1[1] * (r2[0] * r3[2] - r2[2] * r3[0])
            + r1[2] * (r2[0] * r3[1] - r2[1] * r3[0])
        )
        return 20 * mp.sqrt(10) * det


def _sat_axes(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """All 44 candidate separating axes for tetra pair (A, B), unnormalized."""
    faces = [
        np.cross(V[j] - V[i], V[k] - V[i])
        for V in (A, B)
        for (i, j, k) in _FACE_IDX
    ]
    ea = A[list(_EDGE_J)] - A[list(_EDGE_I)]
    eb = B[list(_EDGE_J)] - B[list(_EDGE_I)]
    cross = np.cross(ea[:, None, :], eb[None, :, :]).reshape(-1, 3)
    return np.vstack([faces, cross])


def _sat_margin_float(A: np.ndarray, B: np.ndarray) -> float:
    """Best normalized separation over all axes (>= 0 means no overlap)."""
    axes = _sat_axes(A, B)
    norms = np.linalg.norm(axes, axis=1)
    keep = norms > 1e-14
    axes, norms = axes[keep], norms[keep]
    pa = axes @ A.T
    pb = axes @ B.T
    sep = np.maximum(pb.min(axis=1) - pa.max(axis=1), pa.min(axis=1) - pb.max(axis=1))
    return float((sep / norms).max())


def _sat_margin_mpf(a: Tetrahedron, b: Tetrahedron, ctx: RealCtx):
    """Exact-arithmetic version of the margin, for ambiguous float verdicts."""

    def sub(u, v):
        return (u[0] - v[0], u[1] - v[1], u[2] - v[2])

    def cross(u, v):
        return (
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        )

    with ctx.work():
        va, vb = a.vertices, b.vertices
        axes = [
            cross(sub(V[j], V[i]), sub(V[k], V[i]))
            for V in (va, vb)
            for (i, j, k) in _FACE_IDX
        ]
        ea = [sub(va[j], va[i]) for i, j in zip(_EDGE_I, _EDGE_J)]
        eb = [sub(vb[j], vb[i]) for i, j in zip(_EDGE_I, _EDGE_J)]
        axes += [cross(u, v) for u in ea for v in eb]
        best = None
        for ax in axes:
            n2 = ax[0] ** 2 + ax[1] ** 2 + ax[2] ** 2
            if n2 < mpf(10) ** (-2 * ctx.digits):
                continue
            pa = [ax[0] * v[0] + ax[1] * v[1] + ax[2] * v[2] for v in va]
            pb = [ax[0] * v[0] + ax[1] * v[1] + ax[2] * v[2] for v in vb]
            sep = max(min(pb) - max(pa), min(pa) - max(pb)) / mp.sqrt(n2)
            if best is None or sep > best:
                best = sep
        return best


def tetra_interiors_disjoint(
    a: Tetrahedron, b: Tetrahedron, eps: float, ctx: RealCtx | None = None
) -> bool:
    """True iff a separating axis exists with separation >= -eps (touch ok)."""
    margin = _sat_margin_float(tetra_array(a), tetra_array(b))
    if margin >= -eps + _FLOAT_NOISE:
        return True
    if margin < -eps - _FLOAT_NOISE:
        return False
    ctx = ctx or RealCtx()
    return _sat_margin_mpf(a, b, ctx) >= -mpf(eps)


@dataclass(frozen=True)
class EmbeddingVerdict:
    embedded: bool
    first_violation: tuple | None
    min_separation_margin: float | None
    pairs_tested: int
    adjacency_ok: bool

    def to_json_dict(self) -> dict:
        return {
            "embedded": self.embedded,
            "first_violation": (
                None if self.first_violation is None else list(self.first_violation)
            ),
            "min_separation_margin": self.min_separation_margin,
            "pairs_tested": self.pairs_tested,
            "adjacency_ok": self.adjacency_ok,
        }


def _adjacent_share_face(a: Tetrahedron, b: Tetrahedron) -> bool:
    # reflection replaces exactly one vertex slot and copies the rest
    differing = sum(1 for va, vb in zip(a.vertices, b.vertices) if va != vb)
    return differing == 1


def verify_embedded(
    chain: RealizedChain, eps: float | None = None, ctx: RealCtx | None = None
) -> EmbeddingVerdict:
    """Certify pairwise interior-disjointness of the visible tetrahedra.

    Pairs are pruned with bounding boxes; surviving pairs get the float64
    separating-axis test, and verdicts inside the float noise band are
    re-decided in exact arithmetic.  Indices in the verdict are 1-based
    positions among the visible tetrahedra.
    """
    ctx = ctx or RealCtx()
    if eps is None:
        eps = 10.0 ** (-ctx.digits / 2)
    tets = chain.tetrahedra
    n = len(tets)
    adjacency_ok = all(
        _adjacent_share_face(tets[i], tets[i + 1]) for i in range(n - 1)
    )
    arrays = np.stack([tetra_array(t) for t in tets]) if n else np.zeros((0, 4, 3))
    lo = arrays.min(axis=1)  # (n, 3)
    hi = arrays.max(axis=1)
    slack = max(eps, 1e-9)
    violations = []
    margins = []
    pairs_tested = 0
    for i in range(n):
        # bounding-box overlap against all j > i+1 at once
        j0 = i + 2
        if j0 >= n:
            break
        overlap = np.all(
            (lo[i] <= hi[j0:] + slack) & (lo[j0:] <= hi[i] + slack), axis=1
        )
        for j in np.nonzero(overlap)[0] + j0:
            pairs_tested += 1
            margin = _sat_margin_float(arrays[i], arrays[j])
            if abs(margin + eps) <= _FLOAT_NOISE:
                margin = float(_sat_margin_mpf(tets[i], tets[int(j)], ctx))
            margins.append(margin)
            if margin < -eps:
                violations.append((i + 1, int(j) + 1))
    embedded = adjacency_ok and not violations
    return EmbeddingVerdict(
        embedded=embedded,
        first_violation=min(violations) if violations else None,
        min_separation_margin=min(margins) if margins else None,
        pairs_tested=pairs_tested,
        adjacency_ok=adjacency_ok,
    )
