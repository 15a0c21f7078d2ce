"""Exact barycentric reflection matrices and their chain products.

The reflection in face i of a tetrahedron, written in barycentric
coordinates, is the 4x4 matrix M_i that fixes every basis vector except
e_i, which maps to -e_i + (2/3) * (sum of the others).  A chain of n
reflections multiplies to a matrix whose entries are integers over 3^n,
so we store the integer numerator matrix together with the power of 3 and
never touch floating point until a caller asks for it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from mpmath import mp, mpf

from .precision import RealCtx
from .strings import is_valid

_Rows = tuple[tuple[int, int, int, int], ...]


@dataclass(frozen=True)
class BaryMatrix:
    """A 4x4 matrix with entries num[i][j] / 3**power, held exactly."""

    num: _Rows
    power: int

    def entry(self, i: int, j: int) -> Fraction:
        """Exact entry with 0-based indices."""
        return Fraction(self.num[i][j], 3**self.power)

    def entries(self) -> list[list[Fraction]]:
        d = 3**self.power
        return [[Fraction(x, d) for x in row] for row in self.num]

    def __matmul__(self, other: "BaryMatrix") -> "BaryMatrix":
        a, b = self.num, other.num
        rows = tuple(
            tuple(sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4))
            for i in range(4)
        )
        return BaryMatrix(rows, self.power + other.power)

    def to_mpf(self, ctx: RealCtx) -> list[list[mpf]]:
        """Entries as mpf at ctx working precision."""
        with ctx.work():
            d = mpf(3) ** self.power
            return [[mpf(x) / d for x in row] for row in self.num]

    def to_float(self) -> list[list[float]]:
        d = Fraction(3) ** self.power
        return [[float(Fraction(x) / d) for x in row] for row in self.num]

    def column_sums(self) -> list[Fraction]:
        d = 3**self.power
        return [Fraction(sum(self.num[i][j] for i in range(4)), d) for j in range(4)]

    def det(self) -> Fraction:
        """Exact determinant (cofactor expansion on the integer numerators)."""
        m = self.num

        def det3(r, c):
            (a, b, c0), (d, e, f), (g, h, i) = (
                tuple(m[x][y] for y in range(4) if y != c) for x in range(4) if x != r
            )
            return a * (e * i - f * h) - b * (d * i - f * g) + c0 * (d * h - e * g)

        total = 0
        for j in range(4):
            total += (-1) ** j * m[0][j] * det3(0, j)
        return Fraction(total, 3 ** (4 * self.power))

    def is_permutation(self) -> bool:
        """True iff the matrix is exactly a 0/1 permutation matrix."""
        one = 3**self.power
        for i in range(4):
            nonzero = [j for j in range(4) if self.num[i][j] != 0]
            if len(nonzero) != 1 or self.num[i][nonzero[0]] != one:
                return False
        cols = sorted(row.index(one) for row in [list(r) for r in self.num])
        return cols == [0, 1, 2, 3]


IDENTITY = BaryMatrix(
    ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)), 0
)

MAX_EXACT_LENGTH = 20_000  # beyond this, use the closed-form evaluation path


def reflection_matrix(i: int) -> BaryMatrix:
    """M_i over denominator 3: column i is -3 at the diagonal and 2 elsewhere."""
    if i not in (1, 2, 3, 4):
        raise ValueError(f"face index must be 1..4, got {i}")
    rows = []
    for row in range(4):
        r = [3 if row == col else 0 for col in range(4)]
        r[i - 1] = -3 if row == i - 1 else 2
        rows.append(tuple(r))
    return BaryMatrix(tuple(rows), 1)


def chain_matrix(s: Sequence[int]) -> BaryMatrix:
    """Exact product M_{s[0]} M_{s[1]} ... in string order."""
    if not is_valid(s):
        raise ValueError(f"invalid reflection string {s!r}")
    if len(s) > MAX_EXACT_LENGTH:
        raise ValueError(
            f"string length {len(s)} exceeds the exact-product limit "
            f"{MAX_EXACT_LENGTH}; evaluate via motion.k_formula instead"
        )
    out = reflection_matrix(s[0])
    for sym in s[1:]:
        out = out @ reflection_matrix(sym)
    return out


def three_leading_matrices(tail: Sequence[int]) -> dict[int, BaryMatrix]:
    """Chain products r0 + tail for the three legal leading faces r0.

    tail is a chain's string without its first symbol; the shared suffix
    product is computed once and each candidate M_{r0} is prepended.
    """
    if len(tail) == 0:
        return {r0: reflection_matrix(r0) for r0 in (1, 2, 3, 4)}
    if not is_valid(tail):
        raise ValueError(f"invalid tail {tail!r}")
    suffix = chain_matrix(tail)
    return {
        r0: reflection_matrix(r0) @ suffix for r0 in (1, 2, 3, 4) if r0 != tail[0]
    }


@dataclass(frozen=True)
class DivisibilityWitness:
    is_permutation: bool
    row: int  # 1-based row of the witness entry
    col: int  # 1-based column (the last symbol of the string)
    numerator: int  # entry numerator over 3^len(s)
    power: int
    numerator_mod3: int


def divisibility_witness(s: Sequence[int]) -> DivisibilityWitness:
    """Certify that the chain product of s is not a permutation matrix.

    The witness entry sits in column s[-1]; its row is 2 except for strings
    led by the symbol 2, where row 1 carries the non-divisible numerator
    instead.  Written over denominator 3^len(s), that numerator is never
    divisible by 3, which rules the product out of the permutation matrices
    (all of whose entries over 3^n are divisible by 3 when n >= 1).
    """
    K = chain_matrix(s)
    row = 2 if s[0] != 2 else 1
    col = s[-1]
    numerator = K.num[row - 1][col - 1]
    return DivisibilityWitness(
        is_permutation=K.is_permutation(),
        row=row,
        col=col,
        numerator=numerator,
        power=K.power,
        numerator_mod3=numerator % 3,
    )


def matrix_minus_identity_mpf(K: BaryMatrix, ctx: RealCtx) -> list[list[mpf]]:
    """K - I as mpf rows (convenience for norm computations)."""
    with ctx.work():
        d = mpf(3) ** K.power
        one = 3**K.power
        return [
            [mpf(K.num[i][j] - (one if i == j else 0)) / d for j in range(4)]
            for i in range(4)
        ]
