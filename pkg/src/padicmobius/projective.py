"""Points of P^1 over the working field, the chordal metric, cross-ratios.

Points are stored in canonical homogeneous form: (z, 1) for finite z and
(1, 0) for infinity.  With that normalisation the chordal distance is the
single formula |x1*y2 - x2*y1| / (max(|x1|,|y1|) * max(|x2|,|y2|)), which
reproduces all three branches of the affine definition.
"""

from __future__ import annotations

from .errors import DegenerateConfiguration, ParseError
from .padic import FieldElem, Magnitude, PadicContext, parse_elem


class ProjPoint:
    """A point of P^1 in canonical homogeneous coordinates."""

    __slots__ = ("x", "y")

    def __init__(self, x: FieldElem, y: FieldElem):
        if x.is_zero and y.is_zero:
            raise ValueError("(0, 0) is not a projective point")
        if y.is_zero:
            x, y = FieldElem(1), FieldElem(0)
        else:
            x, y = x / y, FieldElem(1)
        self.x = x
        self.y = y

    @classmethod
    def finite(cls, z) -> "ProjPoint":
        if not isinstance(z, FieldElem):
            z = FieldElem(z)
        return cls(z, FieldElem(1))

    @classmethod
    def infinity(cls) -> "ProjPoint":
        return cls(FieldElem(1), FieldElem(0))

    @property
    def is_infinity(self) -> bool:
        return self.y.is_zero

    def value(self) -> FieldElem:
        if self.is_infinity:
            raise ValueError("infinity has no affine value")
        return self.x

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        return f"ProjPoint({self})"

    def __str__(self):
        return "inf" if self.is_infinity else str(self.x)


INFTY = ProjPoint.infinity()


def pt(z) -> ProjPoint:
    """Convenience constructor: field element / rational / 'inf'."""
    if isinstance(z, ProjPoint):
        return z
    if isinstance(z, str) and z.strip() == "inf":
        return INFTY
    return ProjPoint.finite(z if isinstance(z, FieldElem) else FieldElem(z))


def parse_point(s: str, D=None) -> ProjPoint:
    s = s.strip()
    if s == "inf":
        return INFTY
    try:
        return ProjPoint.finite(parse_elem(s, D))
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(f"bad point {s!r}") from exc


def chordal(ctx: PadicContext, z: ProjPoint, w: ProjPoint) -> Magnitude:
    """Chordal distance on P^1; always <= 1, symmetric, an ultrametric."""
    cross = z.x * w.y - w.x * z.y
    num = ctx.abs_elem(cross)
    if num.is_zero:
        return num
    dz = max(ctx.abs_elem(z.x), ctx.abs_elem(z.y))
    dw = max(ctx.abs_elem(w.x), ctx.abs_elem(w.y))
    return num / (dz * dw)


def cross_ratio_chordal(ctx: PadicContext, x: ProjPoint, y: ProjPoint,
                        z: ProjPoint, w: ProjPoint) -> Magnitude:
    """rho(x,y)*rho(z,w) / (rho(x,z)*rho(y,w)), exact.

    Invariant under every Mobius map, not only the unitary ones.
    """
    d_xz = chordal(ctx, x, z)
    d_yw = chordal(ctx, y, w)
    if d_xz.is_zero or d_yw.is_zero:
        raise DegenerateConfiguration("cross-ratio denominator vanishes")
    return chordal(ctx, x, y) * chordal(ctx, z, w) / (d_xz * d_yw)
