"""Type-I/II points of the Berkovich projective line and their tree geometry.

A type-II point is the closed disk D(a, p**s) with s rational; the Gauss
point is D(0, 1).  Type-I points are the ordinary projective points.  The
affine tree is ordered by disk inclusion with infinity as the top end; the
hyperbolic metric on type-II points is

    dist(x, y) = 2*s(join) - s(x) - s(y)

in radius exponents.  Disk centres are not canonical, so point equality is
the explicit predicate :func:`same_point`, never ``==``.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import TypeIPoint, UnsupportedExtension, ParseError
from .moebius import MobiusMap
from .padic import FieldElem, PadicContext, as_fraction, parse_elem
from .projective import INFTY, ProjPoint, pt

_NEG_INF = float("-inf")


class BerkPoint:
    """Tagged union: type I (a ProjPoint) or type II (disk centre + radius exp)."""

    __slots__ = ("kind", "point", "center", "rexp")

    def __init__(self, kind, point=None, center=None, rexp=None):
        self.kind = kind  # "I" or "II"
        self.point = point
        self.center = center
        self.rexp = rexp

    @classmethod
    def type_i(cls, z) -> "BerkPoint":
        return cls("I", point=pt(z))

    @classmethod
    def disk(cls, center, rexp) -> "BerkPoint":
        if not isinstance(center, FieldElem):
            center = FieldElem(center)
        return cls("II", center=center, rexp=as_fraction(rexp))

    @classmethod
    def gauss(cls) -> "BerkPoint":
        return cls.disk(0, 0)

    @property
    def is_type_ii(self) -> bool:
        return self.kind == "II"

    @property
    def is_infinity(self) -> bool:
        return self.kind == "I" and self.point.is_infinity

    def __repr__(self):
        return f"BerkPoint({self})"

    def __str__(self):
        if self.kind == "I":
            return str(self.point)
        return f"D({self.center}, p^{self.rexp})"


GAUSS = BerkPoint.gauss()


def parse_berk_point(s: str, D=None) -> BerkPoint:
    text = s.strip()
    if text == "gauss":
        return BerkPoint.gauss()
    if text.startswith("D(") and text.endswith(")"):
        body = text[2:-1]
        cut = body.rfind(",")
        if cut < 0:
            raise ParseError(f"bad Berkovich point {s!r}")
        center = parse_elem(body[:cut], D)
        rad = body[cut + 1:].strip()
        if "^" not in rad:
            raise ParseError(f"radius must look like p^s in {s!r}")
        exp = rad.split("^", 1)[1].strip()
        if exp.startswith("(") and exp.endswith(")"):
            exp = exp[1:-1]
        return BerkPoint.disk(center, Fraction(exp))
    return BerkPoint.type_i(parse_elem(text, D) if text != "inf" else INFTY)


def _center_dist_exp(ctx: PadicContext, x: BerkPoint, y: BerkPoint):
    """log_p |center(x) - center(y)|, -inf if equal; type I uses the value."""
    cx = x.center if x.is_type_ii else x.point.value()
    cy = y.center if y.is_type_ii else y.point.value()
    m = ctx.abs_elem(cx - cy)
    return _NEG_INF if m.is_zero else m.log_p()


def _rexp(x: BerkPoint):
    return x.rexp if x.is_type_ii else _NEG_INF


def same_point(ctx: PadicContext, x: BerkPoint, y: BerkPoint) -> bool:
    """Equality in the tree: same disk, or the same type-I point."""
    if x.kind != y.kind:
        return False
    if x.kind == "I":
        return x.point == y.point
    return x.rexp == y.rexp and _center_dist_exp(ctx, x, y) <= x.rexp


def leq(ctx: PadicContext, x: BerkPoint, y: BerkPoint) -> bool:
    """Tree order: x inside y (disk containment; type I as radius -inf)."""
    if y.kind == "I":
        return same_point(ctx, x, y)
    if x.is_infinity:
        return False
    return _rexp(x) <= y.rexp and _center_dist_exp(ctx, x, y) <= y.rexp


def join(ctx: PadicContext, x: BerkPoint, y: BerkPoint) -> BerkPoint:
    """Smallest disk containing both points (computed in the affine tree)."""
    if x.is_infinity or y.is_infinity:
        raise ValueError("join is undefined for the infinity end")
    if same_point(ctx, x, y):
        return x
    s = max(_rexp(x), _rexp(y), _center_dist_exp(ctx, x, y))
    center = x.center if x.is_type_ii else x.point.value()
    return BerkPoint.disk(center, s)


def hyp_dist(ctx: PadicContext, x: BerkPoint, y: BerkPoint) -> Fraction:
    """Path distance on the hyperbolic part, exact in radius exponents."""
    if not (x.is_type_ii and y.is_type_ii):
        raise TypeIPoint("hyperbolic distance needs type-II points")
    j = join(ctx, x, y)
    return 2 * j.rexp - x.rexp - y.rexp


def median(ctx: PadicContext, x: BerkPoint, y: BerkPoint,
           z: BerkPoint) -> BerkPoint:
    """The unique point on all three pairwise arcs.

    Among the three pairwise joins, two coincide and dominate; the smallest
    join is the median.
    """
    for a, b, c in ((x, y, z), (x, z, y), (y, z, x)):
        if same_point_loose(ctx, a, b):
            return a
    j_xy = join(ctx, x, y)
    j_xz = join(ctx, x, z)
    j_yz = join(ctx, y, z)
    for cand, o1, o2 in ((j_xy, j_xz, j_yz), (j_xz, j_xy, j_yz),
                         (j_yz, j_xy, j_xz)):
        if leq(ctx, cand, o1) and leq(ctx, cand, o2):
            return cand
    raise AssertionError("tree median not found")  # pragma: no cover


def same_point_loose(ctx, a, b):
    if a.kind != b.kind:
        return False
    return same_point(ctx, a, b)


def point_on_path(ctx: PadicContext, x: BerkPoint, y: BerkPoint,
                  d: Fraction) -> BerkPoint:
    """The point at distance d from x along the arc [x, y] (type II ends)."""
    total = hyp_dist(ctx, x, y)
    if not 0 <= d <= total:
        raise ValueError("distance outside the arc")
    j = join(ctx, x, y)
    up = j.rexp - x.rexp
    if d <= up:
        return BerkPoint.disk(x.center, x.rexp + d)
    return BerkPoint.disk(y.center, j.rexp - (d - up))


# ---------------------------------------------------------------------------
# Mobius action
# ---------------------------------------------------------------------------

def _act_affine(ctx: PadicContext, alpha: FieldElem, beta: FieldElem,
                x: BerkPoint) -> BerkPoint:
    """z -> alpha*z + beta sends D(a, p^s) to D(alpha*a + beta, |alpha| p^s)."""
    return BerkPoint.disk(alpha * x.center + beta,
                          x.rexp + ctx.abs_elem(alpha).log_p())


def _act_inversion(ctx: PadicContext, x: BerkPoint) -> BerkPoint:
    """z -> 1/z; D(a, p^s) maps to D(1/a, p^s/|a|^2), or to D(0, p^-s) when
    the disk contains 0 (any centre of the disk may be taken, so normalise)."""
    ca = ctx.abs_elem(x.center)
    if ca.is_zero or ca.log_p() <= x.rexp:
        return BerkPoint.disk(0, -x.rexp)
    e = ca.log_p()
    return BerkPoint.disk(x.center.inverse(), x.rexp - 2 * e)


def act(ctx: PadicContext, g: MobiusMap, x: BerkPoint) -> BerkPoint:
    """Action on Berkovich points; preserves type and the path metric."""
    if x.kind == "I":
        return BerkPoint.type_i(g.apply(x.point))
    if g.c.is_zero:
        return _act_affine(ctx, g.a / g.d, g.b / g.d, x)
    # (az+b)/(cz+d) = a/c - det/(c*(cz+d))
    y = _act_affine(ctx, g.c, g.d, x)
    y = _act_inversion(ctx, y)
    return _act_affine(ctx, -g.det / g.c, g.a / g.c, y)


def fixes_gauss(ctx: PadicContext, g: MobiusMap) -> bool:
    return same_point(ctx, act(ctx, g, GAUSS), GAUSS)


def conjugator_to_gauss(ctx: PadicContext, x: BerkPoint) -> MobiusMap:
    """h with act(h, x) = Gauss point: h(z) = (z - a)/rho, |rho| = p**rexp.

    Requires a scalar of magnitude p**rexp in the tower (rexp in (1/2)Z
    when D has odd valuation, integers otherwise).
    """
    if not x.is_type_ii:
        raise TypeIPoint("only type-II points can be moved to the Gauss point")
    rho = ctx.scalar_with_magnitude(x.rexp)
    h = MobiusMap(1, -x.center, 0, rho)
    if not same_point(ctx, act(ctx, h, x), GAUSS):  # pragma: no cover
        raise AssertionError("conjugator_to_gauss failed")
    return h
