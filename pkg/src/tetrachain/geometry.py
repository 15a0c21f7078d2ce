"""Cartesian realization of tetrahedral chains.

The seed helix V_i = (r cos(i*theta), r sin(i*theta), i*h) places unit
regular tetrahedra {V_i, V_{i+1}, V_{i+2}, V_{i+3}} along a cylinder; the
invisible starting tetrahedron T_0 is {V_-1, V_0, V_1, V_2}.  A chain is
realized by repeatedly reflecting the off-face vertex across the plane of
the shared face, which keeps the three shared vertices bit-for-bit equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from mpmath import mp, mpf

from .precision import Constants, RealCtx
from .strings import is_valid

Point3 = tuple  # 3 mpf coordinates


@dataclass(frozen=True)
class Tetrahedron:
    """Four ordered vertices; face i is the one opposite vertex i."""

    vertices: tuple  # 4 Point3

    def __iter__(self):
        return iter(self.vertices)


@dataclass
class RealizedChain:
    """A realized chain: T_0 (invisible), the visible tetrahedra, and metadata.

    ages[k][p] is the step index at which vertex slot p of visible
    tetrahedron k was last replaced; sorting a tetrahedron's slots by age
    recovers the helix order of its vertices, which downstream axis
    diagnostics rely on.
    """

    string: tuple  # full string including the leading face choice
    r0: int
    invisible: Tetrahedron
    tetrahedra: list = field(default_factory=list)
    ages: list = field(default_factory=list)

    def __len__(self):
        return len(self.tetrahedra)


def helix_vertex(i: int, c: Constants) -> Point3:
    with c.ctx.work():
        a = mpf(i) * c.theta
        return (c.r * mp.cos(a), c.r * mp.sin(a), mpf(i) * c.h)


def invisible_t0(c: Constants) -> Tetrahedron:
    return Tetrahedron(tuple(helix_vertex(i, c) for i in (-1, 0, 1, 2)))


def _reflect_across_face(p: Point3, a: Point3, b: Point3, c3: Point3) -> Point3:
    """Householder reflection of p across the plane through a, b, c3."""
    u = tuple(b[k] - a[k] for k in range(3))
    v = tuple(c3[k] - a[k] for k in range(3))
    n = (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )
    nn = n[0] ** 2 + n[1] ** 2 + n[2] ** 2
    d = p[0] - a[0], p[1] - a[1], p[2] - a[2]
    t = 2 * (d[0] * n[0] + d[1] * n[1] + d[2] * n[2]) / nn
    return (p[0] - t * n[0], p[1] - t * n[1], p[2] - t * n[2])


def reflect_tetra(t: Tetrahedron, i: int) -> Tetrahedron:
    """Reflect vertex i of t across the opposite face; other slots copied."""
    if i not in (1, 2, 3, 4):
        raise ValueError(f"face index must be 1..4, got {i}")
    vs = list(t.vertices)
    others = [vs[k] for k in range(4) if k != i - 1]
    vs[i - 1] = _reflect_across_face(vs[i - 1], *others)
    return Tetrahedron(tuple(vs))


def realize_chain(tail: Sequence[int], r0: int, c: Constants) -> RealizedChain:
    """Realize the chain with leading face r0 followed by the symbols of tail.

    The visible tetrahedra are T_1 .. T_{len(tail)+1}; T_0 stays invisible.
    """
    if r0 not in (1, 2, 3, 4):
        raise ValueError(f"r0 must be 1..4, got {r0}")
    if len(tail) > 0:
        if not is_valid(tail):
            raise ValueError(f"invalid tail {tail!r}")
        if tail[0] == r0:
            raise ValueError(f"r0={r0} doubles back into tail start {tail[0]}")
    with c.ctx.work():
        t0 = invisible_t0(c)
        chain = RealizedChain(
            string=(r0, *tail), r0=r0, invisible=t0, tetrahedra=[], ages=[]
        )
        cur = t0
        age = [0, 1, 2, 3]
        step = 4
        for sym in (r0, *tail):
            cur = reflect_tetra(cur, sym)
            age = age.copy()
            age[sym - 1] = step
            step += 1
            chain.tetrahedra.append(cur)
            chain.ages.append(tuple(age))
        return chain


def realize_printed(s: Sequence[int], c: Constants) -> RealizedChain:
    """Realize a full printed string, taking its first symbol as the lead."""
    return realize_chain(tuple(s[1:]), s[0], c)


def apply_bary(t0: Tetrahedron, K: Sequence[Sequence[mpf]]) -> Tetrahedron:
    """The tetrahedron T_0 K: column j of K gives vertex j barycentrically."""
    cols = []
    for j in range(4):
        cols.append(
            tuple(
                sum(t0.vertices[k][axis] * K[k][j] for k in range(4))
                for axis in range(3)
            )
        )
    return Tetrahedron(tuple(cols))


# Coefficients of the barycentric tetrahelix point formula: the coordinates
# of V_q in the base {V_-1, V_0, V_1, V_2} are
#   C(q) = c_const + c_lin*q + c_cos*cos(q*theta) + c_sin*sin(q*theta)
# with the vectors below; the last three sum to 0 and the first to 1.
_C_CONST = (3, 4, 3, 0)  # over 10
_C_LIN = (-3, -1, 1, 3)  # over 10
_C_COS = (-1, 2, -1, 0)  # times 3/10
_C_SIN = (-2, 1, 4, -3)  # times 3*sqrt(5)/50


def bary_coefficients(q: int, c: Constants) -> tuple:
    """The 4-vector C(q) of barycentric coordinates of helix point V_q."""
    with c.ctx.work():
        cq = mp.cos(mpf(q) * c.theta)
        sq = mp.sin(mpf(q) * c.theta)
        s5 = 3 * mp.sqrt(5) / 50
        return tuple(
            mpf(_C_CONST[i]) / 10
            + mpf(_C_LIN[i]) / 10 * q
            + mpf(3 * _C_COS[i]) / 10 * cq
            + s5 * _C_SIN[i] * sq
            for i in range(4)
        )


def tetrahelix_bary_point(q: int, base: Tetrahedron, c: Constants) -> Point3:
    """Helix point V_q expressed through any base tetrahedron in helix order."""
    coeff = bary_coefficients(q, c)
    return tuple(
        sum(base.vertices[k][axis] * coeff[k] for k in range(4)) for axis in range(3)
    )


def tetra_volume(t: Tetrahedron) -> mpf:
    a, b, c3, d = t.vertices
    u = tuple(b[k] - a[k] for k in range(3))
    v = tuple(c3[k] - a[k] for k in range(3))
    w = tuple(d[k] - a[k] for k in range(3))
    det = (
        u[0] * (v[1] * w[2] - v[2] * w[1])
        - u[1] * (v[0] * w[2] - v[2] * w[0])
        + u[2] * (v[0] * w[1] - v[1] * w[0])
    )
    return abs(det) / 6


def edge_lengths(t: Tetrahedron) -> list:
    out = []
    vs = t.vertices
    for i in range(4):
        for j in range(i + 1, 4):
            out.append(mp.sqrt(sum((vs[i][k] - vs[j][k]) ** 2 for k in range(3))))
    return out


def tetra_array(t: Tetrahedron) -> np.ndarray:
    """Vertices as a float64 (4, 3) array (fast-path geometry tests)."""
    return np.array([[float(x) for x in v] for v in t.vertices], dtype=float)
