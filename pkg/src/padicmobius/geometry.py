"""Axes, involutions, orthogonality, fixed loci and the unitary-loxodromic
decomposition.

Geodesics are given by their two distinct type-I endpoints; all tree
computations (projections, bridges, subtree intersections) reduce to joins
and medians of Berkovich points and are exact.  For p = 2 an involution
additionally carries a canonical tail at hyperbolic distance 1 from its
axis, and intersection questions are asked of the tailed sets.
"""

from __future__ import annotations

from fractions import Fraction

from .berkovich import (GAUSS, BerkPoint, act, hyp_dist, join, median,
                        point_on_path, same_point)
from .errors import (DegenerateConfiguration, UnsupportedExtension, WrongClass)
from .moebius import (ELLIPTIC, ElementClass, MobiusMap, classify,
                      fixed_points, is_unitary)
from .padic import FieldElem, PadicContext
from .projective import INFTY, ProjPoint, chordal, pt


class Geodesic:
    """The line in the tree joining two distinct points of P^1."""

    __slots__ = ("alpha", "beta")

    def __init__(self, alpha: ProjPoint, beta: ProjPoint):
        if alpha == beta:
            raise DegenerateConfiguration("a geodesic needs distinct endpoints")
        self.alpha = pt(alpha)
        self.beta = pt(beta)

    def endpoints(self) -> tuple:
        return (self.alpha, self.beta)

    def shares_endpoint(self, other: "Geodesic"):
        shared = [e for e in self.endpoints() if e in other.endpoints()]
        return shared

    def __eq__(self, other):
        if not isinstance(other, Geodesic):
            return NotImplemented
        return set(self.endpoints()) == set(other.endpoints())

    def __hash__(self):
        return hash(frozenset(self.endpoints()))

    def __repr__(self):
        return f"Geodesic({self})"

    def __str__(self):
        return f"geo({self.alpha}, {self.beta})"


class TailedAxis:
    """A geodesic plus its canonical tail point (p = 2 involutions only)."""

    __slots__ = ("geodesic", "tail", "attach")

    def __init__(self, geodesic: Geodesic, tail: BerkPoint, attach: BerkPoint):
        self.geodesic = geodesic
        self.tail = tail
        self.attach = attach

    def __repr__(self):
        return f"TailedAxis({self.geodesic}, tail={self.tail})"


# ---------------------------------------------------------------------------
# tree utilities on geodesics
# ---------------------------------------------------------------------------

def proj_to_geodesic(ctx: PadicContext, x: BerkPoint,
                     geo: Geodesic) -> BerkPoint:
    """Closest point of the geodesic to x (the entry point of x's branch)."""
    a, b = geo.alpha, geo.beta
    if x.kind == "I" and x.point in (a, b):
        return x
    if x.is_infinity:
        if a.is_infinity or b.is_infinity:
            raise ValueError("projection of a shared end is undefined")
        return join(ctx, BerkPoint.type_i(a), BerkPoint.type_i(b))
    if a.is_infinity:
        a, b = b, a
    if b.is_infinity:
        center = a.value()
        cx = x.center if x.is_type_ii else x.point.value()
        m = ctx.abs_elem(cx - center)
        e = None if m.is_zero else m.log_p()
        if x.is_type_ii:
            s = x.rexp if e is None else max(x.rexp, e)
        else:
            if e is None:  # x is the endpoint itself
                return x
            s = e
        return BerkPoint.disk(center, s)
    return median(ctx, BerkPoint.type_i(a), BerkPoint.type_i(b), x)


def dist_to_geodesic(ctx: PadicContext, x: BerkPoint,
                     geo: Geodesic) -> Fraction:
    return hyp_dist(ctx, x, proj_to_geodesic(ctx, x, geo))


def on_geodesic(ctx: PadicContext, geo: Geodesic, x: BerkPoint) -> bool:
    if x.kind == "I":
        return x.point in geo.endpoints()
    return same_point(ctx, x, proj_to_geodesic(ctx, x, geo))


def on_segment(ctx: PadicContext, u: BerkPoint, v: BerkPoint,
               x: BerkPoint) -> bool:
    """x lies on [u, v] iff the distances add up (all type II)."""
    return hyp_dist(ctx, u, x) + hyp_dist(ctx, x, v) == hyp_dist(ctx, u, v)


def geodesics_bridge(ctx: PadicContext, A: Geodesic, B: Geodesic):
    """(u, v, length): u on A and v on B closest to each other.

    length 0 means the lines meet; when they properly overlap u is an end
    of the overlap segment.  Lines sharing a type-I endpoint must be handled
    by the caller.
    """
    u1 = proj_to_geodesic(ctx, BerkPoint.type_i(B.alpha), A)
    u2 = proj_to_geodesic(ctx, BerkPoint.type_i(B.beta), A)
    if not same_point(ctx, u1, u2):
        return u1, u1, Fraction(0)  # overlap segment [u1, u2] lies on both
    v = proj_to_geodesic(ctx, u1, B)
    return u1, v, hyp_dist(ctx, u1, v)


def geodesics_intersection_point(ctx: PadicContext, A: Geodesic,
                                 B: Geodesic):
    """A common point of the two lines, or None when they are disjoint."""
    if A == B:
        return proj_to_geodesic(ctx, GAUSS, A)
    shared = A.shares_endpoint(B)
    if shared:
        other = next(e for e in B.endpoints() if e != shared[0])
        return proj_to_geodesic(ctx, BerkPoint.type_i(other), A)
    u, v, length = geodesics_bridge(ctx, A, B)
    return u if length == 0 else None


def proj_to_tailed(ctx: PadicContext, x: BerkPoint, T: TailedAxis) -> BerkPoint:
    p_geo = proj_to_geodesic(ctx, x, T.geodesic)
    p_seg = median(ctx, T.attach, T.tail, x)
    if hyp_dist(ctx, x, p_seg) < hyp_dist(ctx, x, p_geo):
        return p_seg
    return p_geo


def on_tailed(ctx: PadicContext, T: TailedAxis, x: BerkPoint) -> bool:
    if x.kind == "I":
        return x.point in T.geodesic.endpoints()
    return (on_geodesic(ctx, T.geodesic, x)
            or on_segment(ctx, T.attach, T.tail, x))


def tailed_axes_intersect(ctx: PadicContext, T1: TailedAxis,
                          T2: TailedAxis) -> bool:
    """Whether the two tailed sets (connected subtrees) meet."""
    shared = T1.geodesic.shares_endpoint(T2.geodesic)
    if shared:
        return True
    u = proj_to_tailed(ctx, T2.tail, T1)
    v = proj_to_tailed(ctx, u, T2)
    return on_tailed(ctx, T1, v)


# ---------------------------------------------------------------------------
# involutions and factorization
# ---------------------------------------------------------------------------

def map_to_zero_inf(alpha: ProjPoint, beta: ProjPoint) -> MobiusMap:
    """The standard map sending alpha to 0 and beta to infinity."""
    if alpha == beta:
        raise DegenerateConfiguration("need distinct points")
    if alpha.is_infinity:
        return MobiusMap(0, 1, 1, -beta.value())
    if beta.is_infinity:
        return MobiusMap.translation(-alpha.value())
    return MobiusMap(1, -alpha.value(), 1, -beta.value())


def involution_with_fixed_points(alpha, beta) -> MobiusMap:
    """The order-two map fixing alpha and beta (trace zero)."""
    alpha, beta = pt(alpha), pt(beta)
    if alpha == beta:
        raise DegenerateConfiguration("an involution needs two fixed points")
    if alpha.is_infinity or beta.is_infinity:
        w = (beta if alpha.is_infinity else alpha).value()
        return MobiusMap(-1, 2 * w, 0, 1)
    a, b = alpha.value(), beta.value()
    return MobiusMap(a + b, -2 * a * b, 2, -(a + b))


def is_involution(g: MobiusMap) -> bool:
    return not g.is_identity() and g.trace.is_zero


def factor_involutions(ctx: PadicContext, g: MobiusMap) -> tuple:
    """Two involutions (f, h) with f o h = g.

    Diagonalisable g with multiplier k factors through f = k/z, h = 1/z in
    the frame where g is z -> kz; both fixed-point pairs (+-sqrt(k), +-1 in
    that frame) then stay inside the tower whenever sqrt(k) does.  Parabolic
    g with fixed point moved to infinity factors as (-z) o (-z - t).
    """
    cls = classify(ctx, g)
    if cls is ElementClass.IDENTITY:
        raise WrongClass("the identity has no canonical involution pair")
    if cls is ElementClass.PARABOLIC:
        w = fixed_points(ctx, g)[0]
        if w.is_infinity:
            T = MobiusMap.identity()
            gi = g
        else:
            T = MobiusMap(0, 1, 1, -w.value())
            gi = g.conjugate_by(T)
        t = gi.b / gi.a
        f_n = MobiusMap(-1, 0, 0, 1)
        h_n = MobiusMap(-1, -t, 0, 1)
    else:
        alpha, beta = fixed_points(ctx, g)
        T = map_to_zero_inf(alpha, beta)
        gi = g.conjugate_by(T)
        if not (gi.b.is_zero and gi.c.is_zero):  # pragma: no cover
            raise AssertionError("diagonalization failed")
        k = gi.a / gi.d
        f_n = MobiusMap(0, k, 1, 0)
        h_n = MobiusMap.inversion()
    Ti = T.inverse()
    f = f_n.conjugate_by(Ti)
    h = h_n.conjugate_by(Ti)
    if not (is_involution(f) and is_involution(h)
            and f.compose(h) == g):  # pragma: no cover
        raise AssertionError("involution factorization failed")
    return f, h


def axis(ctx: PadicContext, g: MobiusMap) -> Geodesic:
    """Geodesic between the two fixed points (loxodromic or elliptic g)."""
    cls = classify(ctx, g)
    if cls not in (ElementClass.LOXODROMIC,) + ELLIPTIC:
        raise WrongClass(f"{cls.value} maps have no axis")
    alpha, beta = fixed_points(ctx, g)
    return Geodesic(alpha, beta)


def is_orthogonal(ctx: PadicContext, A: Geodesic, B: Geodesic) -> bool:
    """B is orthogonal to A when the involution fixing B's endpoints swaps A's."""
    f = involution_with_fixed_points(*B.endpoints())
    return f.apply(A.alpha) == A.beta and f.apply(A.beta) == A.alpha


def common_perpendicular(ctx: PadicContext, A: Geodesic,
                         B: Geodesic) -> Geodesic:
    """The unique geodesic orthogonal to both A and B (4 distinct endpoints).

    For p >= 3: move A to (0, inf); the perpendicular then has endpoints
    +-sqrt(a*b) where a, b are B's transported endpoints.  For p = 2: move A
    to (-1, 1) and symmetrise B by a map fixing +-1, so both lines become
    orthogonal to (0, inf).
    """
    if set(A.endpoints()) & set(B.endpoints()):
        raise DegenerateConfiguration("geodesics share an endpoint")
    if ctx.p >= 3:
        T = map_to_zero_inf(A.alpha, A.beta)
        a = T.apply(B.alpha).value()
        b = T.apply(B.beta).value()
        s = ctx.require_sqrt(a * b)
        Ti = T.inverse()
        C = Geodesic(Ti.apply(pt(s)), Ti.apply(pt(-s)))
    else:
        W = MobiusMap(-1, 1, 1, 1)  # 0 -> 1, inf -> -1... see below
        T1 = W.compose(map_to_zero_inf(A.alpha, A.beta))
        t = T1.apply(B.alpha).value()
        u = T1.apply(B.beta).value()
        if t + u == FieldElem(0):
            F = T1
        else:
            st = t * u
            disc = (st + 1) * (st + 1) - (t + u) * (t + u)
            root = ctx.require_sqrt(disc)
            r = (-(st + 1) + root) / (t + u)
            if (r * r - 1).is_zero:
                r = (-(st + 1) - root) / (t + u)
            F = MobiusMap(r, 1, 1, r).compose(T1)
        Fi = F.inverse()
        C = Geodesic(Fi.apply(pt(0)), Fi.apply(INFTY))
    if not (is_orthogonal(ctx, A, C) and is_orthogonal(ctx, B, C)):
        raise AssertionError("common perpendicular failed verification")
    return C


def tailed_axis(ctx: PadicContext, f: MobiusMap) -> TailedAxis:
    """Axis plus canonical tail of an involution, p = 2 only.

    Any map carrying the fixed points to +-1 turns f into 1/z, whose tail
    is the Gauss point; the tail of f is its pull-back, validated to be
    fixed and at distance exactly 1 from the axis.
    """
    if ctx.p != 2:
        raise WrongClass("tailed axes exist only for p = 2")
    if not is_involution(f):
        raise WrongClass("tailed_axis needs an involution")
    alpha, beta = fixed_points(ctx, f)
    geo = Geodesic(alpha, beta)
    W = MobiusMap(-1, 1, 1, 1)  # 0 -> 1, inf -> -1
    T = W.compose(map_to_zero_inf(alpha, beta))
    tail = act(ctx, T.inverse(), GAUSS)
    attach = proj_to_geodesic(ctx, tail, geo)
    if not same_point(ctx, act(ctx, f, tail), tail):  # pragma: no cover
        raise AssertionError("tail is not fixed")
    if hyp_dist(ctx, tail, attach) != 1:  # pragma: no cover
        raise AssertionError("tail is not at distance 1")
    return TailedAxis(geo, tail, attach)


# ---------------------------------------------------------------------------
# fixed loci
# ---------------------------------------------------------------------------

class FixedLocus:
    """Description of Fix(g) in P^1 union H: the five shapes."""

    __slots__ = ("kind", "points", "geodesic", "radius", "fixed_point",
                 "boundary")

    def __init__(self, kind, points=None, geodesic=None, radius=None,
                 fixed_point=None, boundary=None):
        self.kind = kind
        self.points = points
        self.geodesic = geodesic
        self.radius = radius
        self.fixed_point = fixed_point
        self.boundary = boundary

    @classmethod
    def two_points(cls, a, b):
        return cls("two_points", points=(a, b))

    @classmethod
    def axis_line(cls, geo):
        return cls("axis", geodesic=geo, radius=Fraction(0))

    @classmethod
    def tube(cls, geo, radius):
        return cls("tube", geodesic=geo, radius=radius)

    @classmethod
    def horoball(cls, fixed_point, boundary):
        return cls("horoball", fixed_point=fixed_point, boundary=boundary)

    @classmethod
    def all_points(cls):
        return cls("all")

    def __repr__(self):
        return f"FixedLocus({self})"

    def __str__(self):
        if self.kind == "two_points":
            return f"two_points({self.points[0]}, {self.points[1]})"
        if self.kind == "axis":
            return f"axis({self.geodesic})"
        if self.kind == "tube":
            return f"tube({self.geodesic}, radius={self.radius})"
        if self.kind == "horoball":
            return f"horoball({self.fixed_point}, boundary={self.boundary})"
        return "all"


def fixed_locus(ctx: PadicContext, g: MobiusMap) -> FixedLocus:
    """Exact descriptor of the fixed-point set of g in P^1 union H.

    Loxodromic: the two endpoints.  Tame elliptic: the axis.  Wild elliptic:
    the tube of radius -log_p|tr^2/det - 4| / 2 around the axis.  Parabolic:
    the horoball at the fixed point whose boundary is the translation disk.
    """
    cls = classify(ctx, g)
    if cls is ElementClass.IDENTITY:
        return FixedLocus.all_points()
    if cls is ElementClass.LOXODROMIC:
        a, b = fixed_points(ctx, g)
        return FixedLocus.two_points(a, b)
    if cls is ElementClass.TAME_ELLIPTIC:
        return FixedLocus.axis_line(axis(ctx, g))
    if cls is ElementClass.WILD_ELLIPTIC:
        sigma_minus_4 = g.trace * g.trace / g.det - 4
        radius = -ctx.abs_elem(sigma_minus_4).log_p() / 2
        return FixedLocus.tube(axis(ctx, g), radius)
    # parabolic
    w = fixed_points(ctx, g)[0]
    if w.is_infinity:
        T = MobiusMap.identity()
        gi = g
    else:
        T = MobiusMap(0, 1, 1, -w.value())
        gi = g.conjugate_by(T)
    shift = gi.b / gi.a
    boundary = BerkPoint.disk(0, ctx.abs_elem(shift).log_p())
    return FixedLocus.horoball(w, act(ctx, T.inverse(), boundary))


def locus_contains(ctx: PadicContext, locus: FixedLocus, x: BerkPoint) -> bool:
    """Membership of a Berkovich point in a fixed-locus descriptor."""
    if locus.kind == "all":
        return True
    if locus.kind == "two_points":
        return x.kind == "I" and x.point in locus.points
    if locus.kind in ("axis", "tube"):
        if x.kind == "I":
            return x.point in locus.geodesic.endpoints()
        return dist_to_geodesic(ctx, x, locus.geodesic) <= locus.radius
    # horoball: x belongs iff along the ray toward the fixed end it branches
    # off at least as deep as the boundary point does
    if x.kind == "I":
        return x.point == locus.fixed_point
    if locus.fixed_point.is_infinity:
        m = join(ctx, x, locus.boundary)
    else:
        m = median(ctx, x, locus.boundary,
                   BerkPoint.type_i(locus.fixed_point))
    return hyp_dist(ctx, x, m) <= hyp_dist(ctx, locus.boundary, m)


def locus_membership(ctx: PadicContext, g: MobiusMap, x: BerkPoint) -> bool:
    """The defining oracle: act(g, x) == x."""
    if x.kind == "I":
        return g.apply(x.point) == x.point
    return same_point(ctx, act(ctx, g, x), x)


def locus_intersect(ctx: PadicContext, F1: FixedLocus, F2: FixedLocus):
    """A common hyperbolic point of two elliptic loci (axis or tube), or None.

    Projects one axis onto the other; tubes meet iff the bridge is no longer
    than the sum of the radii, and a point splitting the bridge accordingly
    is returned.
    """
    for F in (F1, F2):
        if F.kind not in ("axis", "tube"):
            raise WrongClass("locus_intersect needs elliptic loci")
    A, r1 = F1.geodesic, F1.radius
    B, r2 = F2.geodesic, F2.radius
    if A == B:
        return proj_to_geodesic(ctx, GAUSS, A)
    shared = A.shares_endpoint(B)
    if shared:
        other = next(e for e in B.endpoints() if e != shared[0])
        return proj_to_geodesic(ctx, BerkPoint.type_i(other), A)
    u, v, length = geodesics_bridge(ctx, A, B)
    if length > r1 + r2:
        return None
    return point_on_path(ctx, u, v, min(r1, length))


# ---------------------------------------------------------------------------
# antipodal pairs and the decomposition theorem
# ---------------------------------------------------------------------------

def antipodal_witness(ctx: PadicContext, alpha, beta):
    """A unit-norm map u with u(0) = alpha, u(inf) = beta, or None.

    Exists exactly when the chordal distance of the pair is 1; the witness
    is assembled from the four position cases (both small, one large, both
    large) and verified before being returned.
    """
    alpha, beta = pt(alpha), pt(beta)
    if alpha == beta:
        raise DegenerateConfiguration("antipodal pair must be distinct")
    if chordal(ctx, alpha, beta) != ctx.one():
        return None
    one = ctx.one()

    def build(a_pt, b_pt):
        if b_pt.is_infinity:
            return MobiusMap.translation(a_pt.value())
        if a_pt.is_infinity:
            return MobiusMap(b_pt.value(), 1, 1, 0)
        a, b = a_pt.value(), b_pt.value()
        small_a = ctx.abs_elem(a) <= one
        small_b = ctx.abs_elem(b) <= one
        if small_a and small_b:
            return MobiusMap(b, a, 1, 1)
        if small_a:
            return MobiusMap(b, a * b, 1, b)
        if small_b:
            # swap the roles of 0 and infinity with an inversion
            return build(b_pt, a_pt).compose(MobiusMap.inversion())
        w = build(pt(a.inverse()), pt(b.inverse()))
        return MobiusMap.inversion().compose(w)

    u = build(alpha, beta)
    if not (is_unitary(ctx, u) and u.apply(pt(0)) == alpha
            and u.apply(INFTY) == beta):  # pragma: no cover
        raise AssertionError("antipodal witness failed verification")
    return u


def decompose_unitary_loxodromic(ctx: PadicContext, g: MobiusMap) -> tuple:
    """Split g = u o f with u unit-norm and f the identity or a loxodromic
    map whose fixed points are an antipodal pair.

    The target disk y = act(g^{-1}, Gauss) determines f: its axis is the
    line through the Gauss point and y, which always ends in an antipodal
    pair (0/infinity, center/infinity, or 0/center depending on where y
    sits), and the multiplier is fixed by act(f, y) = Gauss.  Then
    u = g o f^{-1} fixes the Gauss point by construction.
    """
    if is_unitary(ctx, g):
        return g, MobiusMap.identity()
    y = act(ctx, g.inverse(), GAUSS)
    s = y.rexp
    c = y.center
    e = ctx.abs_elem(c)
    e0 = None if e.is_zero else e.log_p()
    if e0 is None or e0 <= s:
        # y is a disk around 0: slide along the (0, inf) axis
        mu = ctx.scalar_with_magnitude(-s)
        f = MobiusMap.scaling(mu)
    elif e0 <= 0:
        # y hangs below the Gauss point on the branch of its center
        mu = ctx.scalar_with_magnitude(-s)
        f = MobiusMap(mu, c * (1 - mu), 0, 1)
    else:
        # |center| > 1: the axis through Gauss and y ends at 0 and center
        T = MobiusMap(1, 0, 1, -c)
        mu = ctx.scalar_with_magnitude(s - 2 * e0)
        f = MobiusMap.scaling(mu).conjugate_by(T.inverse())
    u = g.compose(f.inverse())
    if not is_unitary(ctx, u):  # pragma: no cover - construction identity
        raise AssertionError("decomposition produced a non-unitary factor")
    if classify(ctx, f) is not ElementClass.LOXODROMIC:  # pragma: no cover
        raise AssertionError("decomposition factor is not loxodromic")
    return u, f
