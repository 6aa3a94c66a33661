"""Mobius maps over the working field: classification, norms, fixed points,
Lipschitz data and the uniform (sup-chordal) distance.

A map is a 2x2 invertible matrix modulo scalars.  Structural operations
(compose, inverse, apply, equality) are pure field arithmetic and live on
the class; everything valuation-flavoured takes the context as first
argument.  All derived quantities are invariant under rescaling the matrix,
so no determinant-1 lift is ever materialised: where the literature divides
by sqrt(det), only the magnitude exponent is halved.
"""

from __future__ import annotations

import enum
from fractions import Fraction

from .errors import (DegenerateConfiguration, ParseError, UnsupportedExtension,
                     WrongClass)
from .padic import FieldElem, Magnitude, PadicContext, parse_elem
from .projective import INFTY, ProjPoint, chordal, pt


class ElementClass(enum.Enum):
    IDENTITY = "identity"
    PARABOLIC = "parabolic"
    TAME_ELLIPTIC = "tame_elliptic"
    WILD_ELLIPTIC = "wild_elliptic"
    LOXODROMIC = "loxodromic"


ELLIPTIC = (ElementClass.TAME_ELLIPTIC, ElementClass.WILD_ELLIPTIC)


class MobiusMap:
    """(a b; c d) acting by z -> (az + b)/(cz + d), identified up to scalars."""

    __slots__ = ("a", "b", "c", "d", "_det")

    def __init__(self, a, b, c, d):
        conv = lambda v: v if isinstance(v, FieldElem) else FieldElem(v)
        self.a, self.b, self.c, self.d = conv(a), conv(b), conv(c), conv(d)
        self._det = self.a * self.d - self.b * self.c
        if self._det.is_zero:
            raise ValueError("singular matrix is not a Mobius map")

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def scaling(cls, k) -> "MobiusMap":
        return cls(k, 0, 0, 1)

    @classmethod
    def translation(cls, t) -> "MobiusMap":
        return cls(1, t, 0, 1)

    @classmethod
    def inversion(cls) -> "MobiusMap":
        return cls(0, 1, 1, 0)

    @property
    def det(self) -> FieldElem:
        return self._det

    @property
    def trace(self) -> FieldElem:
        return self.a + self.d

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """Matrix product self * other (apply other first)."""
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __matmul__(self, other):
        return self.compose(other)

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def scaled(self, t) -> "MobiusMap":
        return MobiusMap(self.a * t, self.b * t, self.c * t, self.d * t)

    def apply(self, z: ProjPoint) -> ProjPoint:
        z = pt(z)
        return ProjPoint(self.a * z.x + self.b * z.y,
                         self.c * z.x + self.d * z.y)

    def __call__(self, z) -> ProjPoint:
        return self.apply(z)

    def conjugate_by(self, h: "MobiusMap") -> "MobiusMap":
        """h self h^{-1}."""
        return h.compose(self).compose(h.inverse())

    def is_identity(self) -> bool:
        return self.b.is_zero and self.c.is_zero and self.a == self.d

    def canonical_entries(self) -> tuple:
        """Entries rescaled so the first nonzero one (row-major) equals 1."""
        for e in self.entries():
            if not e.is_zero:
                inv = e.inverse()
                return tuple(x * inv for x in self.entries())
        raise AssertionError("unreachable: zero matrix")

    def __eq__(self, other):
        if not isinstance(other, MobiusMap):
            return NotImplemented
        return self.canonical_entries() == other.canonical_entries()

    def __hash__(self):
        return hash(self.canonical_entries())

    def __repr__(self):
        return f"MobiusMap({self})"

    def __str__(self):
        return f"{self.a},{self.b};{self.c},{self.d}"


def parse_map(s: str, D=None) -> MobiusMap:
    rows = s.strip().split(";")
    if len(rows) != 2:
        raise ParseError(f"map must be 'a,b;c,d', got {s!r}")
    entries = []
    for row in rows:
        parts = row.split(",")
        if len(parts) != 2:
            raise ParseError(f"map must be 'a,b;c,d', got {s!r}")
        entries.extend(parse_elem(part, D) for part in parts)
    try:
        return MobiusMap(*entries)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


# ---------------------------------------------------------------------------
# norms and classification
# ---------------------------------------------------------------------------

def norm(ctx: PadicContext, g: MobiusMap) -> Magnitude:
    """max |entry| of the determinant-1 lift: max(|a|,|b|,|c|,|d|)/|det|^(1/2).

    Always >= 1; equals 1 exactly on the stabiliser of the Gauss point.
    """
    m = max(ctx.abs_elem(e) for e in g.entries())
    return m / ctx.abs_elem(g.det).sqrt()


def is_unitary(ctx: PadicContext, g: MobiusMap) -> bool:
    return norm(ctx, g) == ctx.one()


def has_good_reduction(ctx: PadicContext, g: MobiusMap) -> bool:
    """Degree-one good reduction is exactly unit norm."""
    return is_unitary(ctx, g)


def classify(ctx: PadicContext, g: MobiusMap) -> ElementClass:
    """Dynamical type via the scale-invariant quantity tr^2/det.

    parabolic iff tr^2/det = 4 exactly; otherwise |tr^2/det - 4| decides:
    > 1 loxodromic, = 1 tame elliptic, < 1 wild elliptic.  Using tr^2 makes
    the test independent of the sign choice of the determinant-1 lift.
    """
    if g.is_identity():
        return ElementClass.IDENTITY
    sigma_minus_4 = g.trace * g.trace / g.det - 4
    if sigma_minus_4.is_zero:
        return ElementClass.PARABOLIC
    t = ctx.abs_elem(sigma_minus_4)
    one = ctx.one()
    if t > one:
        return ElementClass.LOXODROMIC
    if t == one:
        return ElementClass.TAME_ELLIPTIC
    return ElementClass.WILD_ELLIPTIC


def fixed_points(ctx: PadicContext, g: MobiusMap) -> tuple:
    """Fixed points in P^1 (one for parabolic, two otherwise).

    Roots of c z^2 + (d - a) z - b; the quadratic-extension root is used when
    the discriminant is not a square in the working field, and the canonical
    Hensel embedding interprets it when D splits.  Raises WrongClass for the
    identity and UnsupportedExtension outside the tower.
    """
    if g.is_identity():
        raise WrongClass("identity fixes every point")
    a, b, c, d = g.entries()
    if c.is_zero:
        if a == d:
            return (INFTY,)
        return (ProjPoint.finite(b / (d - a)), INFTY)
    disc = (a - d) * (a - d) + 4 * b * c
    if disc.is_zero:
        return (ProjPoint.finite((a - d) / (2 * c)),)
    s = ctx.require_sqrt(disc)
    z1 = ProjPoint.finite((a - d + s) / (2 * c))
    z2 = ProjPoint.finite((a - d - s) / (2 * c))
    return (z1, z2)


def gauss_displacement(ctx: PadicContext, g: MobiusMap) -> Fraction:
    """Hyperbolic displacement of the Gauss point: 2 log_p ||g||, exact."""
    return 2 * norm(ctx, g).log_p()


def lipschitz_constant(ctx: PadicContext, g: MobiusMap) -> Magnitude:
    """Best chordal Lipschitz constant, ||g||^2."""
    n = norm(ctx, g)
    return n * n


def difference_norm(ctx: PadicContext, g: MobiusMap) -> Magnitude:
    """||g - g^{-1}|| on the determinant-1 lift: max(|a-d|, |2b|, |2c|)/|det|^(1/2)."""
    a, b, c, d = g.entries()
    m = max(ctx.abs_elem(a - d), ctx.abs_elem(2 * b), ctx.abs_elem(2 * c))
    return m / ctx.abs_elem(g.det).sqrt()


def relative_difference_norm(ctx: PadicContext, g: MobiusMap) -> Magnitude:
    """||g - g^{-1}|| / ||g||; scale-invariant and always <= 1."""
    a, b, c, d = g.entries()
    num = max(ctx.abs_elem(a - d), ctx.abs_elem(2 * b), ctx.abs_elem(2 * c))
    den = max(ctx.abs_elem(e) for e in g.entries())
    return num / den


def norm_minus_identity(ctx: PadicContext, g: MobiusMap) -> Magnitude:
    """min over the two determinant-1 lifts G of ||G - I||.

    Exact whenever sqrt(det) lies in the tower, or the diagonal entries and
    the determinant are rational (non-split case via the norm form, split
    case via the canonical Hensel embedding).
    """
    a, b, c, d = g.entries()
    det = g.det
    half = ctx.abs_elem(det).sqrt()
    off = max(ctx.abs_elem(b), ctx.abs_elem(c)) / half

    r = ctx.sqrt_field(det)
    if r is not None:
        best = None
        for sign in (1, -1):
            ri = r.inverse() * sign
            m = max(off, ctx.abs_elem(a * ri - 1), ctx.abs_elem(d * ri - 1))
            best = m if best is None else min(best, m)
        return best

    if not (det.is_rational and a.is_rational and d.is_rational):
        raise UnsupportedExtension(
            "||g - I|| needs sqrt of the determinant outside the tower")

    root = ctx.sqrt_in_qp(det.a)
    if root is None:
        # non-split: |x/sqrt(det) - 1| = |1 - x^2/det|^(1/2), same for both lifts
        da = ctx.abs_q(1 - a.a * a.a / det.a).sqrt()
        dd = ctx.abs_q(1 - d.a * d.a / det.a).sqrt()
        return max(off, da, dd)

    # split: evaluate |x -+ s| against the canonical embedded root s
    best = None
    for sign in (1, -1):
        da = _abs_lin_root(ctx, a.a, Fraction(sign), det.a) / half
        dd = _abs_lin_root(ctx, d.a, Fraction(sign), det.a) / half
        best = max(off, da, dd) if best is None else min(best, max(off, da, dd))
    return best


def _abs_lin_root(ctx: PadicContext, a: Fraction, b: Fraction,
                  square: Fraction) -> Magnitude:
    """|a - b*s| where s is the canonical Q_p square root of ``square``."""
    sub = PadicContext.__new__(PadicContext)  # light view sharing the caches
    sub.p, sub.D, sub.precision_cap = ctx.p, None, ctx.precision_cap
    root = ctx.sqrt_in_qp(square)
    shift, hr = (root.shift, root.root) if hasattr(root, "shift") else (0, root)
    bb = -b * Fraction(ctx.p) ** shift
    den = a.denominator * bb.denominator
    A, B = int(a * den), int(bb * den)
    k = 8
    while k <= ctx.precision_cap:
        rk = hr.residue(k)
        w = (A + B * rk) % ctx.p ** k
        if w != 0:
            v = 0
            while w % ctx.p == 0:
                w //= ctx.p
                v += 1
            if v < k:
                return Magnitude.from_exp(ctx.p, -(v - ctx.vp(den)))
        k *= 2
    from .errors import PrecisionExhausted
    raise PrecisionExhausted(f"|{a} - {b}*sqrt({square})| undetermined")


# ---------------------------------------------------------------------------
# triangular form and constructive witnesses
# ---------------------------------------------------------------------------

def triangularize(ctx: PadicContext, g: MobiusMap):
    """A unitary u with t = u g u^{-1} upper triangular; returns (u, t).

    u is assembled from translations by a fixed point (or its reciprocal)
    and inversions, all of unit norm, so every norm-level quantity of g is
    preserved.
    """
    if g.c.is_zero:
        return MobiusMap.identity(), g
    z = fixed_points(ctx, g)[0]
    inv = MobiusMap.inversion()
    if z.is_infinity:  # cannot happen with c != 0, but keep the guard
        return MobiusMap.identity(), g
    w = z.value()
    if ctx.abs_elem(w) <= ctx.one():
        u = inv.compose(MobiusMap.translation(-w))
    else:
        u = inv.compose(MobiusMap.translation(-w.inverse())).compose(inv)
    t = g.conjugate_by(u)
    if not t.c.is_zero:  # pragma: no cover - algebraic identity
        raise AssertionError("triangularization failed")
    return u, t


def lipschitz_witness(ctx: PadicContext, g: MobiusMap) -> tuple:
    """A pair (z, w) with rho(gz, gw) = L(g) * rho(z, w), found by reducing
    to the triangular form t(z) = alpha z + beta and picking points where
    the distortion factor max(1,|z|)/max(1,|t z|) peaks."""
    u, t = triangularize(ctx, g)
    alpha = t.a / t.d
    beta = t.b / t.d
    aa = ctx.abs_elem(alpha)
    one = ctx.one()
    radius_exp = -aa.log_p()  # radius of E = D(-beta/alpha, 1/|alpha|)
    center = -beta / alpha

    if ctx.abs_elem(beta) >= max(aa, one):  # peak at the centre of E
        z1 = center
    elif radius_exp > 0:  # |alpha| < 1, peak on the sphere |z| = 1/|alpha|
        z1 = center + ctx.scalar_with_magnitude(radius_exp)
    else:
        z1 = center
    q = ctx.scalar_with_magnitude(radius_exp - 1)
    w1 = z1 + q

    za, wa = ProjPoint.finite(z1), ProjPoint.finite(w1)
    lhs = chordal(ctx, t.apply(za), t.apply(wa))
    rhs = lipschitz_constant(ctx, g) * chordal(ctx, za, wa)
    if lhs != rhs:  # pragma: no cover - case analysis is exhaustive
        raise AssertionError("lipschitz witness failed verification")
    ui = u.inverse()
    return (ui.apply(za), ui.apply(wa))


class UniformDistanceResult:
    """Value (exact for p >= 3) or bracket (p = 2) of sup_z rho(gz, z)."""

    __slots__ = ("value", "lower", "upper", "witness")

    def __init__(self, value, lower, upper, witness):
        self.value = value
        self.lower = lower
        self.upper = upper
        self.witness = witness

    def __repr__(self):
        if self.value is not None:
            return f"UniformDistanceResult({self.value}, witness={self.witness})"
        return f"UniformDistanceResult([{self.lower}, {self.upper}])"


def uniform_distance_to_identity(ctx: PadicContext,
                                 g: MobiusMap) -> UniformDistanceResult:
    """sup_z rho(g z, z).

    For p >= 3 this equals ||g - g^{-1}||/||g|| exactly and a witness point
    achieving the supremum is produced from the triangular form:

    * parabolic: the pulled-back origin;
    * loxodromic: the origin or 1 (the supremum 1 is attained at one of them);
    * elliptic: the origin when the off-diagonal dominates, else a unit
      omega in {1, -1} chosen so no cancellation occurs.

    For p = 2 only the bracket [M/2, 2M] is returned, with a best-effort
    witness maximising over a fixed candidate sweep.
    """
    m = relative_difference_norm(ctx, g)
    if g.is_identity():
        zero = ctx.mag_zero()
        return UniformDistanceResult(zero, zero, zero, pt(0))

    if ctx.p == 2:
        candidates = [pt(0), pt(1), pt(-1), INFTY, pt(2), pt(Fraction(1, 2))]
        best, best_d = None, None
        for z in candidates:
            dz = chordal(ctx, g.apply(z), z)
            if best is None or dz > best_d:
                best, best_d = z, dz
        return UniformDistanceResult(None, m.scale(Fraction(1, 2)),
                                     m.scale(2), best)

    # cheap sweep first: it settles most maps (and every map whose fixed
    # points live outside the tower but whose supremum sits at a small point)
    p = ctx.p
    for z in (pt(0), pt(1), pt(-1), INFTY, pt(p), pt(Fraction(1, p))):
        if chordal(ctx, g.apply(z), z) == m:
            return UniformDistanceResult(m, m, m, z)

    u, t = triangularize(ctx, g)
    cls = classify(ctx, g)
    a, b, d = t.a, t.b, t.d
    if cls is ElementClass.PARABOLIC:
        candidates = [pt(0)]
    elif cls is ElementClass.LOXODROMIC:
        candidates = [pt(0), pt(1)]
    else:
        if ctx.abs_elem(b) > ctx.abs_elem(a - d):
            candidates = [pt(0)]
        else:
            candidates = [pt(1), pt(-1)]
    ui = u.inverse()
    for z in candidates:
        w = ui.apply(z)
        if chordal(ctx, g.apply(w), w) == m:
            return UniformDistanceResult(m, m, m, w)
    raise AssertionError(  # pragma: no cover - the case analysis is complete
        f"no witness for {g} of class {cls}")


def uniform_distance(ctx: PadicContext, g: MobiusMap, h: MobiusMap) -> Magnitude:
    """sup_z rho(g z, h z), via right-invariance = d(g h^{-1}, id); p >= 3."""
    if ctx.p == 2:
        raise WrongClass("exact uniform distance requires p >= 3")
    return uniform_distance_to_identity(ctx, g.compose(h.inverse())).value


# ---------------------------------------------------------------------------
# finite displacement seminorms
# ---------------------------------------------------------------------------

def max_displacement(ctx: PadicContext, g: MobiusMap, points) -> Magnitude:
    out = ctx.mag_zero()
    for z in points:
        out = max(out, chordal(ctx, g.apply(z), z))
    return out


def cube_root_displacement(ctx: PadicContext, g: MobiusMap) -> Magnitude:
    """Max displacement over the three cube roots of unity.

    Needs omega = (-1 + sqrt(-3))/2 inside the tower, i.e. D = -3.
    """
    s = ctx.sqrt_field(FieldElem(-3))
    if s is None:
        raise UnsupportedExtension(
            "cube roots of unity need sqrt(-3); use a context with D=-3")
    omega = (s - 1) / 2
    omega2 = (-s - 1) / 2
    return max_displacement(ctx, g, [pt(1), pt(omega), pt(omega2)])


def reference_triple_displacement(ctx: PadicContext, g: MobiusMap) -> Magnitude:
    """Max displacement over {0, 1, inf}."""
    return max_displacement(ctx, g, [pt(0), pt(1), INFTY])


def pole_pair_displacement(ctx: PadicContext, g: MobiusMap) -> Magnitude:
    """Max displacement over {0, inf}."""
    return max_displacement(ctx, g, [pt(0), INFTY])


# ---------------------------------------------------------------------------
# distance to the unitary group
# ---------------------------------------------------------------------------

def distance_to_unitary_group(ctx: PadicContext, g: MobiusMap) -> Magnitude:
    """0 for unit-norm maps, 1 otherwise (the gap is never intermediate)."""
    return ctx.mag_zero() if is_unitary(ctx, g) else ctx.one()


def unitary_gap_witness(ctx: PadicContext, g: MobiusMap,
                        u: MobiusMap) -> ProjPoint:
    """A point z with rho(g z, u z) = 1, for non-unitary g and unitary u.

    Fast path: a fixed sweep of small candidates.  Constructive fallback
    (p >= 3): split g = u0 f with f loxodromic fixing an antipodal pair,
    rotate the pair to (0, infinity), and pick a unit-sphere point avoiding
    the one bad residue class of the compared unitary map.
    """
    if is_unitary(ctx, g):
        raise WrongClass("g is unitary; the gap is 0")
    one = ctx.one()
    candidates = [pt(0), INFTY, pt(1), pt(-1), pt(2)]
    if not u.c.is_zero:
        candidates.append(ProjPoint.finite(-u.d / u.c))
    if not u.a.is_zero:
        candidates.append(ProjPoint.finite(-u.b / u.a))
    for z in candidates:
        if chordal(ctx, g.apply(z), u.apply(z)) == one:
            return z
    if ctx.p == 2:
        raise WrongClass("constructive witness needs p >= 3")

    from .geometry import antipodal_witness, decompose_unitary_loxodromic
    u0, f = decompose_unitary_loxodromic(ctx, g)
    alpha, beta = fixed_points(ctx, f)
    h = antipodal_witness(ctx, alpha, beta).inverse()
    v = f.conjugate_by(h)  # diagonal; multiplier v.a/v.d
    if ctx.abs_elem(v.a / v.d) < one:
        h = MobiusMap.inversion().compose(h)
        v = f.conjugate_by(h)
    s1 = h.compose(u0.inverse()).compose(u).compose(h.inverse())
    # avoid the residue class of the pole of s1 on the unit sphere
    bad = None
    if not s1.c.is_zero:
        pole = -s1.d / s1.c
        if ctx.abs_elem(pole) == one and pole.is_rational:
            bad = pole.a.numerator * pow(pole.a.denominator, -1, ctx.p) % ctx.p
    hi = h.inverse()
    for r in range(1, ctx.p):
        if bad is not None and r == bad:
            continue
        z = hi.apply(pt(r))
        if chordal(ctx, g.apply(z), u.apply(z)) == one:
            return z
    for r in range(1, 4 * ctx.p):  # pragma: no cover - safety sweep
        z = hi.apply(pt(Fraction(r)))
        if chordal(ctx, g.apply(z), u.apply(z)) == one:
            return z
    raise AssertionError("no unitary-gap witness found")  # pragma: no cover


# ---------------------------------------------------------------------------
# interpolation through three points
# ---------------------------------------------------------------------------

def _to_standard_triple(z1: ProjPoint, z2: ProjPoint, z3: ProjPoint) -> MobiusMap:
    """The map sending (z1, z2, z3) to (0, 1, inf)."""
    if z1 == z2 or z1 == z3 or z2 == z3:
        raise DegenerateConfiguration("three-point data must be distinct")
    if z1.is_infinity:
        w2, w3 = z2.value(), z3.value()
        return MobiusMap(0, w2 - w3, 1, -w3)
    if z2.is_infinity:
        w1, w3 = z1.value(), z3.value()
        return MobiusMap(1, -w1, 1, -w3)
    if z3.is_infinity:
        w1, w2 = z1.value(), z2.value()
        return MobiusMap(1, -w1, 0, w2 - w1)
    w1, w2, w3 = z1.value(), z2.value(), z3.value()
    return MobiusMap(w2 - w3, -w1 * (w2 - w3), w2 - w1, -w3 * (w2 - w1))


def mobius_through_three_points(z1, z2, z3, w1, w2, w3) -> MobiusMap:
    """The unique map with g(z_j) = w_j for two triples of distinct points."""
    zs = [pt(z) for z in (z1, z2, z3)]
    ws = [pt(w) for w in (w1, w2, w3)]
    m = _to_standard_triple(*zs)
    n = _to_standard_triple(*ws)
    g = n.inverse().compose(m)
    for z, w in zip(zs, ws):
        if g.apply(z) != w:  # pragma: no cover - construction is exact
            raise AssertionError("three-point interpolation failed")
    return g
