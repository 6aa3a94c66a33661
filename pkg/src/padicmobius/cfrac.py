"""Continued fractions built from the maps t_n(z) = a_n / (z + b_n).

The n-th convergent map is T_n = t_1 o ... o t_n and the convergent value
is T_n(0); the shift identity T_{n+1}(inf) = T_n(0) holds by construction.
In the unit case (all a_n = 1, |b_n| <= 1) every T_n has unit norm, so the
gap rho(T_n(0), T_n(inf)) is identically 1 and the convergents cannot
converge classically; that is the only divergence certificate offered.
"""

from __future__ import annotations

from .errors import ParseError
from .moebius import MobiusMap, is_unitary
from .padic import FieldElem, Magnitude, PadicContext
from .projective import INFTY, ProjPoint, chordal, pt


class CFSpec:
    """Finite truncation of K(a_n | b_n); a_n must be nonzero."""

    def __init__(self, a, b):
        a = [x if isinstance(x, FieldElem) else FieldElem(x) for x in a]
        b = [x if isinstance(x, FieldElem) else FieldElem(x) for x in b]
        if len(a) != len(b):
            raise ParseError("partial numerators and denominators differ in length")
        if any(x.is_zero for x in a):
            raise ParseError("partial numerators must be nonzero")
        self.a = a
        self.b = b
        self._prefix = [MobiusMap.identity()]

    def __len__(self):
        return len(self.a)

    @classmethod
    def unit_ones(cls, n: int) -> "CFSpec":
        return cls([FieldElem(1)] * n, [FieldElem(1)] * n)

    def step(self, n: int) -> MobiusMap:
        """t_n as a matrix, 1-based."""
        return MobiusMap(0, self.a[n - 1], 1, self.b[n - 1])

    def convergent_map(self, n: int) -> MobiusMap:
        if not 0 <= n <= len(self):
            raise ValueError(f"n={n} out of range")
        while len(self._prefix) <= n:
            k = len(self._prefix)
            self._prefix.append(self._prefix[-1].compose(self.step(k)))
        return self._prefix[n]

    def convergent_value(self, n: int) -> ProjPoint:
        return self.convergent_map(n).apply(pt(0))


_INF_MARK = object()


def nested_value(spec: CFSpec, n: int) -> ProjPoint:
    """Independent evaluation from the tail: a_n/b_n, then a_i/(b_i + .)."""
    value = FieldElem(0)
    for i in range(n, 0, -1):
        a, b = spec.a[i - 1], spec.b[i - 1]
        if value is _INF_MARK:
            value = FieldElem(0)  # a/(b + inf) = 0
            continue
        den = b + value
        value = _INF_MARK if den.is_zero else a / den
    return INFTY if value is _INF_MARK else pt(value)


def gap_sequence(ctx: PadicContext, spec: CFSpec, n_max: int) -> list:
    """rho(T_n(0), T_n(inf)) for n = 1..n_max."""
    out = []
    for n in range(1, n_max + 1):
        t = spec.convergent_map(n)
        out.append(chordal(ctx, t.apply(pt(0)), t.apply(INFTY)))
    return out


class DivergenceCertificate:
    """Outcome of the unit-case classical-divergence test."""

    def __init__(self, applies: bool, diverges, reason: str):
        self.applies = applies
        self.diverges = diverges  # True or None (undetermined)
        self.reason = reason

    def to_json(self) -> dict:
        return {"applies": self.applies, "diverges": self.diverges,
                "reason": self.reason}


def diverges_classically_unit_case(ctx: PadicContext,
                                   spec: CFSpec) -> DivergenceCertificate:
    """Certify classical divergence when all a_i = 1 and |b_i| <= 1.

    Under the hypothesis every step map has unit norm, so every convergent
    map is a chordal isometry and rho(T_n(0), T_n(inf)) = 1 for all n; a
    convergent sequence T_n(0) would force rho(0, inf) = 0 via the shift
    identity.  Outside the hypothesis no verdict is returned.
    """
    one = ctx.one()
    if any(x != FieldElem(1) for x in spec.a):
        return DivergenceCertificate(False, None,
                                     "hypothesis fails: some a_i != 1")
    for x in spec.b:
        if ctx.abs_elem(x) > one:
            return DivergenceCertificate(False, None,
                                         f"hypothesis fails: |{x}| > 1")
    for n in range(1, len(spec) + 1):
        if not is_unitary(ctx, spec.convergent_map(n)):  # pragma: no cover
            raise AssertionError("unit-case convergent left the unitary group")
    return DivergenceCertificate(
        True, True,
        "all steps are unit-norm isometries: the gap rho(T_n(0), T_n(inf)) "
        "is identically 1, so {T_n} cannot converge classically")
