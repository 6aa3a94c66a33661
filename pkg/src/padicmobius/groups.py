"""Desk-scale subgroup analysis: word balls, discreteness certificates,
common fixed points of elliptic families, and orbit sampling.

Discreteness is only ever certified, never refuted: the certificate states
that on the enumerated ball no nonidentity word is unitary and every word
is loxodromic (or the identity), which is a sufficient condition.  The
report always carries the finite-ball caveat.
"""

from __future__ import annotations

from fractions import Fraction

from .berkovich import GAUSS, BerkPoint
from .errors import BudgetExceeded, NotAllElliptic
from .geometry import (FixedLocus, fixed_locus, locus_contains,
                       locus_intersect, locus_membership, proj_to_geodesic)
from .berkovich import median
from .moebius import (ELLIPTIC, ElementClass, MobiusMap, classify,
                      is_unitary, norm_minus_identity)
from .errors import UnsupportedExtension
from .padic import Magnitude, PadicContext
from .projective import ProjPoint, chordal


class GroupSpec:
    """Generators plus a word-length bound for ball enumeration."""

    def __init__(self, generators, max_word_length: int):
        if not generators:
            raise ValueError("need at least one generator")
        if max_word_length < 1:
            raise ValueError("max_word_length must be >= 1")
        self.generators = list(generators)
        self.max_word_length = max_word_length


DEFAULT_BUDGET = 50_000


def word_str(word: tuple) -> str:
    if not word:
        return "e"
    parts = []
    for letter in word:
        idx = abs(letter)
        parts.append(f"g{idx}" if letter > 0 else f"g{idx}^-1")
    return "*".join(parts)


def _ball_size_bound(n_gens: int, length: int) -> int:
    total, layer = 1, 1
    for depth in range(1, length + 1):
        layer = 2 * n_gens if depth == 1 else layer * max(2 * n_gens - 1, 1)
        total += layer
    return total


def enumerate_ball(ctx: PadicContext, spec: GroupSpec,
                   budget: int = DEFAULT_BUDGET):
    """All reduced words up to the length bound, deduplicated projectively.

    Deterministic order: by length, then by generator index with each
    generator preceding its inverse.  Dedup keys are canonical entry tuples
    (first nonzero entry scaled to 1).
    """
    n = len(spec.generators)
    if _ball_size_bound(n, spec.max_word_length) > budget:
        raise BudgetExceeded(
            f"word ball of {n} generators at length {spec.max_word_length} "
            f"exceeds the budget of {budget}")
    letters = []
    for i, g in enumerate(spec.generators, start=1):
        letters.append((i, g))
        letters.append((-i, g.inverse()))
    out = [((), MobiusMap.identity())]
    seen = {MobiusMap.identity().canonical_entries()}
    frontier = [((), MobiusMap.identity())]
    for _ in range(spec.max_word_length):
        nxt = []
        for word, gmap in frontier:
            for letter, lmap in letters:
                if word and word[-1] == -letter:
                    continue
                new_word = word + (letter,)
                new_map = gmap.compose(lmap)
                nxt.append((new_word, new_map))
                key = new_map.canonical_entries()
                if key not in seen:
                    seen.add(key)
                    out.append((new_word, new_map))
        frontier = nxt
    return out


class DiscretenessReport:
    """Certificate-or-evidence summary over an enumerated word ball."""

    def __init__(self, verdict, min_distance_to_identity, class_census,
                 unitary_words, words_examined, distance_incomplete):
        self.verdict = verdict
        self.min_distance_to_identity = min_distance_to_identity
        self.class_census = class_census
        self.unitary_words = unitary_words
        self.words_examined = words_examined
        self.distance_incomplete = distance_incomplete
        self.finite_ball_caveat = True

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "min_distance_to_identity":
                str(self.min_distance_to_identity)
                if self.min_distance_to_identity is not None else None,
            "class_census": {k.value: v for k, v in self.class_census.items()},
            "unitary_words": list(self.unitary_words),
            "words_examined": self.words_examined,
            "distance_incomplete": self.distance_incomplete,
            "finite_ball_caveat": self.finite_ball_caveat,
        }


def discreteness_report(ctx: PadicContext, spec: GroupSpec,
                        budget: int = DEFAULT_BUDGET) -> DiscretenessReport:
    """Apply the unitary-intersection test to every word in the ball.

    DISCRETE_CERTIFIED requires that no nonidentity word is unitary and
    that every nonidentity word is loxodromic; anything else (including a
    finite elliptic group) is NOT_CERTIFIED with the evidence listed.
    """
    ball = enumerate_ball(ctx, spec, budget)
    census: dict = {}
    unitary_words = []
    min_dist = None
    incomplete = False
    certified = True
    for word, gmap in ball:
        cls = classify(ctx, gmap)
        census[cls] = census.get(cls, 0) + 1
        if cls is ElementClass.IDENTITY:
            continue
        if is_unitary(ctx, gmap):
            unitary_words.append(word_str(word))
            certified = False
        if cls is not ElementClass.LOXODROMIC:
            certified = False
        try:
            d = norm_minus_identity(ctx, gmap)
            if min_dist is None or d < min_dist:
                min_dist = d
        except UnsupportedExtension:
            incomplete = True
    verdict = "DISCRETE_CERTIFIED" if certified else "NOT_CERTIFIED"
    return DiscretenessReport(verdict, min_dist, census, unitary_words,
                              len(ball), incomplete)


class CommonFixedPointResult:
    """Either a verified common point or the element that defeated it."""

    def __init__(self, point, failed_on=None):
        self.point = point
        self.failed_on = failed_on

    @property
    def found(self) -> bool:
        return self.point is not None


def common_fixed_point(ctx: PadicContext, elements) -> CommonFixedPointResult:
    """A point of H fixed by every member of an all-elliptic family.

    Preconditions are checked: every element and every pairwise product must
    be elliptic or the identity (NotAllElliptic with the witness otherwise).
    The point is assembled from pairwise locus intersections and tree
    medians, then verified against every element with the action oracle.
    """
    elements = list(elements)
    for i, g in enumerate(elements, start=1):
        cls = classify(ctx, g)
        if cls not in ELLIPTIC and cls is not ElementClass.IDENTITY:
            raise NotAllElliptic(f"g{i} is {cls.value}", witness=f"g{i}")
    for i in range(len(elements)):
        for j in range(len(elements)):
            if i == j:
                continue
            cls = classify(ctx, elements[i].compose(elements[j]))
            if cls not in ELLIPTIC and cls is not ElementClass.IDENTITY:
                raise NotAllElliptic(
                    f"g{i + 1}*g{j + 1} is {cls.value}",
                    witness=f"g{i + 1}*g{j + 1}")

    live = [(i, g) for i, g in enumerate(elements, start=1)
            if classify(ctx, g) is not ElementClass.IDENTITY]
    if not live:
        return CommonFixedPointResult(GAUSS)
    loci = {i: fixed_locus(ctx, g) for i, g in live}

    def verify(point) -> CommonFixedPointResult:
        for i, g in live:
            if not locus_membership(ctx, g, point):
                return CommonFixedPointResult(None, failed_on=f"g{i}")
        return CommonFixedPointResult(point)

    if all(locus_contains(ctx, loc, GAUSS) for loc in loci.values()):
        return verify(GAUSS)

    memo: dict = {}
    failure: list = []

    def point_for(indices: tuple):
        if indices in memo:
            return memo[indices]
        if len(indices) == 1:
            loc = loci[indices[0]]
            result = proj_to_geodesic(ctx, GAUSS, loc.geodesic)
        elif len(indices) == 2:
            result = locus_intersect(ctx, loci[indices[0]], loci[indices[1]])
            if result is None and not failure:
                failure.append(f"g{indices[0]},g{indices[1]}")
        else:
            x = point_for(indices[:-2] + indices[-1:])
            y = point_for(indices[:-1])
            z = point_for(indices[-2:])
            result = None
            if x is not None and y is not None and z is not None:
                result = median(ctx, x, y, z)
        memo[indices] = result
        return result

    candidate = point_for(tuple(i for i, _ in live))
    if candidate is None:
        return CommonFixedPointResult(None, failed_on=failure[0] if failure
                                      else "no pairwise intersection")
    return verify(candidate)


class OrbitReport:
    """Orbit points of a seed with a purely heuristic accumulation signal."""

    def __init__(self, points, min_pairwise, accumulation_suspected, depth):
        self.points = points
        self.min_pairwise = min_pairwise
        self.accumulation_suspected = accumulation_suspected
        self.depth = depth
        self.note = ("heuristic: finite sampling can neither prove nor "
                     "refute accumulation")

    def to_json(self) -> dict:
        return {
            "points": [str(z) for z in self.points],
            "min_pairwise_distance":
                str(self.min_pairwise) if self.min_pairwise is not None else None,
            "accumulation_suspected": self.accumulation_suspected,
            "depth": self.depth,
            "note": self.note,
        }


def orbit_sample(ctx: PadicContext, spec: GroupSpec, seed: ProjPoint,
                 depth: int, budget: int = DEFAULT_BUDGET) -> OrbitReport:
    ball = enumerate_ball(ctx, GroupSpec(spec.generators, depth), budget)
    points = []
    seen = set()
    for _, gmap in ball:
        z = gmap.apply(seed)
        if z not in seen:
            seen.add(z)
            points.append(z)
    min_pair = None
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            d = chordal(ctx, points[i], points[j])
            if min_pair is None or d < min_pair:
                min_pair = d
    threshold = Magnitude.from_exp(ctx.p, -depth)
    suspected = min_pair is not None and min_pair < threshold
    return OrbitReport(points, min_pair, suspected, depth)
