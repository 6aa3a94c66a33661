"""Executable property suites: seeded random maps of every dynamical class
and one runner that exercises the whole library's invariants exactly.

Determinism contract: identical (p, D, seed, trials) produce byte-identical
transcripts.  Every property draws from its own child generator seeded by
(seed, property id), so adding or reordering properties does not disturb
the others.  Properties that need a specific quadratic extension build a
derived context with the same prime; properties tied to one prime report
SKIP elsewhere.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from . import berkovich as bk
from . import cfrac as cf
from . import geometry as geo
from . import groups as gr
from . import moebius as mb
from .berkovich import GAUSS, BerkPoint
from .errors import NotAllElliptic, UnsupportedExtension
from .moebius import ELLIPTIC, ElementClass, MobiusMap
from .padic import FieldElem, Magnitude, PadicContext
from .projective import INFTY, ProjPoint, chordal, cross_ratio_chordal, pt


class SuiteConfig:
    def __init__(self, p: int, D: int | None = None, seed: int = 0,
                 trials: int = 40, exp_lo: int = -3, exp_hi: int = 3):
        self.p = p
        self.D = D
        self.seed = seed
        self.trials = trials
        self.exp_lo = exp_lo
        self.exp_hi = exp_hi


class PropertyResult:
    def __init__(self, pid, name, status, trials=0, counterexample=None):
        self.pid = pid
        self.name = name
        self.status = status  # PASS / FAIL / SKIP
        self.trials = trials
        self.counterexample = counterexample

    def line(self) -> str:
        out = f"{self.pid} {self.status:4s} trials={self.trials:<5d} {self.name}"
        if self.counterexample:
            out += f" | counterexample: {self.counterexample}"
        return out

    def to_json(self) -> dict:
        return {"id": self.pid, "name": self.name, "status": self.status,
                "trials": self.trials, "counterexample": self.counterexample}


class SuiteReport:
    def __init__(self, config: SuiteConfig, results):
        self.config = config
        self.results = results

    @property
    def all_passed(self) -> bool:
        return all(r.status != "FAIL" for r in self.results)

    def text(self) -> str:
        cfg = self.config
        head = (f"verify-suite p={cfg.p} D={cfg.D} seed={cfg.seed} "
                f"trials={cfg.trials}")
        lines = [head] + [r.line() for r in self.results]
        n_pass = sum(r.status == "PASS" for r in self.results)
        n_fail = sum(r.status == "FAIL" for r in self.results)
        n_skip = sum(r.status == "SKIP" for r in self.results)
        lines.append(f"result: {n_pass} passed, {n_fail} failed, {n_skip} skipped")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "p": self.config.p, "D": self.config.D,
            "seed": self.config.seed, "trials": self.config.trials,
            "properties": [r.to_json() for r in self.results],
            "all_passed": self.all_passed,
        }


# ---------------------------------------------------------------------------
# random data
# ---------------------------------------------------------------------------

def rand_unit(rng: random.Random, p: int) -> Fraction:
    """A random rational p-adic unit with small numerator/denominator."""
    while True:
        n = rng.randint(-9, 9)
        if n and n % p:
            break
    while True:
        d = rng.randint(1, 9)
        if d % p:
            break
    return Fraction(n, d)


def rand_scalar(ctx: PadicContext, rng: random.Random,
                lo: int = -3, hi: int = 3, allow_zero=False) -> FieldElem:
    """p**k * unit with k drawn from the exponent window."""
    if allow_zero and rng.random() < 0.1:
        return FieldElem(0)
    k = rng.randint(lo, hi)
    return FieldElem(rand_unit(rng, ctx.p) * Fraction(ctx.p) ** k)


def rand_elem(ctx: PadicContext, rng: random.Random, lo=-3, hi=3,
              irrational=0.0) -> FieldElem:
    x = rand_scalar(ctx, rng, lo, hi, allow_zero=True)
    if ctx.D is not None and rng.random() < irrational:
        y = rand_scalar(ctx, rng, lo, hi)
        return FieldElem(x.a, y.a, ctx.D)
    return x


def rand_map(ctx: PadicContext, rng: random.Random, lo=-2, hi=2) -> MobiusMap:
    while True:
        entries = [rand_scalar(ctx, rng, lo, hi, allow_zero=True)
                   for _ in range(4)]
        try:
            return MobiusMap(*entries)
        except ValueError:
            continue


def rand_unitary(ctx: PadicContext, rng: random.Random) -> MobiusMap:
    """Rejection-sampled integer map with unit determinant (so unit norm)."""
    while True:
        a, b, c, d = (rng.randint(-9, 9) for _ in range(4))
        det = a * d - b * c
        if det and det % ctx.p:
            return MobiusMap(a, b, c, d)


def rand_point(ctx: PadicContext, rng: random.Random, lo=-3, hi=3) -> ProjPoint:
    r = rng.random()
    if r < 0.08:
        return INFTY
    if r < 0.16:
        return pt(0)
    return pt(rand_scalar(ctx, rng, lo, hi))


def _tame_seed_pool(ctx: PadicContext):
    """Diagonal multipliers giving tame elliptic maps, per (p, D)."""
    p = ctx.p
    if p >= 5:
        return [FieldElem(2), FieldElem(3), FieldElem(Fraction(1, 2))]
    if p == 3:
        if ctx.D != -1:
            raise UnsupportedExtension(
                "tame elliptic maps at p=3 need the context D=-1")
        return [FieldElem(0, 1, -1), FieldElem(1, 1, -1), FieldElem(2, 1, -1)]
    # p = 2: units of Q(sqrt(5)) with residue of order 3
    if ctx.D != 5:
        raise UnsupportedExtension(
            "tame elliptic maps at p=2 need the context D=5")
    half = Fraction(1, 2)
    return [FieldElem(3 * half, half, 5), FieldElem(7 * half, 3 * half, 5),
            FieldElem(3 * half, -half, 5)]


def _normal_form(cls: ElementClass, ctx: PadicContext,
                 rng: random.Random) -> MobiusMap:
    p = ctx.p
    if cls is ElementClass.IDENTITY:
        return MobiusMap.identity()
    if cls is ElementClass.PARABOLIC:
        return MobiusMap.translation(rand_scalar(ctx, rng))
    if cls is ElementClass.LOXODROMIC:
        k = rng.choice([1, 2, -1, -2])
        return MobiusMap.scaling(rand_unit(rng, p) * Fraction(p) ** k)
    if cls is ElementClass.WILD_ELLIPTIC:
        k = 1 + Fraction(p) ** rng.randint(1, 2) * rand_unit(rng, p)
        return MobiusMap.scaling(k)
    return MobiusMap.scaling(rng.choice(_tame_seed_pool(ctx)))


def random_map(cls: ElementClass, ctx: PadicContext,
               rng: random.Random) -> MobiusMap:
    """A map of exactly the requested class: a conjugated normal form.

    The conjugator has rational entries, so fixed points stay inside the
    tower; the class is verified before returning.
    """
    for _ in range(60):
        n = _normal_form(cls, ctx, rng)
        h = rand_map(ctx, rng, lo=-1, hi=1)
        g = n.conjugate_by(h)
        if mb.classify(ctx, g) is cls:
            return g
    raise AssertionError(f"could not generate a {cls.value} map")  # pragma: no cover


def random_map_any(ctx: PadicContext, rng: random.Random) -> MobiusMap:
    cls = rng.choice([ElementClass.PARABOLIC, ElementClass.LOXODROMIC,
                      ElementClass.TAME_ELLIPTIC, ElementClass.WILD_ELLIPTIC])
    try:
        return random_map(cls, ctx, rng)
    except UnsupportedExtension:
        return random_map(ElementClass.LOXODROMIC, ctx, rng)


def derived_context(ctx: PadicContext, D: int | None) -> PadicContext:
    if ctx.D == D:
        return ctx
    return PadicContext(ctx.p, D, ctx.precision_cap)


def nonsplit_discriminant(ctx: PadicContext) -> int:
    """The smallest squarefree D that stays a non-square in Q_p."""
    for d in (2, 3, 5, 6, 7, 10, 11, 13, -1, -2, -3):
        try:
            probe = PadicContext(ctx.p, d, ctx.precision_cap)
        except ValueError:
            continue
        if probe.sqrt_in_qp(Fraction(d)) is None:
            return d
    raise AssertionError("no nonsplit discriminant found")  # pragma: no cover


# ---------------------------------------------------------------------------
# matrix-ring helpers (raw, unnormalised norms)
# ---------------------------------------------------------------------------

def mat_mul(m1, m2):
    a1, b1, c1, d1 = m1
    a2, b2, c2, d2 = m2
    return (a1 * a2 + b1 * c2, a1 * b2 + b1 * d2,
            c1 * a2 + d1 * c2, c1 * b2 + d1 * d2)


def mat_norm(ctx: PadicContext, m) -> Magnitude:
    out = ctx.mag_zero()
    for e in m:
        out = max(out, ctx.abs_elem(e))
    return out


# ---------------------------------------------------------------------------
# the properties
# ---------------------------------------------------------------------------

class _Env:
    def __init__(self, cfg: SuiteConfig, overrides=None):
        self.cfg = cfg
        self.ctx = PadicContext(cfg.p, cfg.D)
        overrides = overrides or {}
        self.norm = overrides.get("norm", mb.norm)

    def rng(self, pid: str) -> random.Random:
        return random.Random(f"{self.cfg.seed}:{pid}")


def _ok(pid, name, trials):
    return PropertyResult(pid, name, "PASS", trials)


def _fail(pid, name, trials, counterexample):
    return PropertyResult(pid, name, "FAIL", trials, counterexample)


def _skip(pid, name, why):
    return PropertyResult(pid, name, "SKIP", 0, why)


def _p01_ultrametric(env):
    pid, name = "P01", "scalar absolute value is a sharp ultrametric"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    for _ in range(n):
        x = rand_elem(ctx, rng, irrational=0.4)
        y = rand_elem(ctx, rng, irrational=0.4)
        ax, ay, axy = ctx.abs_elem(x), ctx.abs_elem(y), ctx.abs_elem(x + y)
        if axy > max(ax, ay):
            return _fail(pid, name, n, f"x={x} y={y}")
        if ax != ay and axy != max(ax, ay):
            return _fail(pid, name, n, f"sharpness: x={x} y={y}")
    return _ok(pid, name, n)


def _p02_multiplicative(env):
    pid, name = "P02", "absolute value is multiplicative"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    for _ in range(n):
        x = rand_elem(ctx, rng, irrational=0.4)
        y = rand_elem(ctx, rng, irrational=0.4)
        if ctx.abs_elem(x * y) != ctx.abs_elem(x) * ctx.abs_elem(y):
            return _fail(pid, name, n, f"x={x} y={y}")
    return _ok(pid, name, n)


def _p03_conjugate_symmetry(env):
    pid, name = "P03", "conjugation preserves the non-split absolute value"
    rng = env.rng(pid)
    ctx = derived_context(env.ctx, nonsplit_discriminant(env.ctx))
    n = env.cfg.trials
    for _ in range(n):
        x = rand_elem(ctx, rng, irrational=1.0)
        if ctx.abs_elem(x) != ctx.abs_elem(x.conj()):
            return _fail(pid, name, n, f"x={x}")
    return _ok(pid, name, n)


def _p04_magnitude_order(env):
    pid, name = "P04", "magnitude order is total and float-consistent"
    rng = env.rng(pid)
    ctx = env.ctx
    n = 1000
    mags = []
    for _ in range(40):
        c = abs(rand_unit(rng, ctx.p))
        e = Fraction(rng.randint(-6, 6), rng.choice([1, 1, 2, 3]))
        mags.append(ctx.magnitude(c, e))
    for i in range(n):
        m1, m2 = rng.choice(mags), rng.choice(mags)
        lt, eq, gt = m1 < m2, m1 == m2, m1 > m2
        if sum([lt, eq, gt]) != 1:
            return _fail(pid, name, n, f"{m1} vs {m2}")
        l1 = math.log(float(m1.coeff)) + float(m1.exp) * math.log(ctx.p)
        l2 = math.log(float(m2.coeff)) + float(m2.exp) * math.log(ctx.p)
        if abs(l1 - l2) >= 10 * math.ulp(max(abs(l1), abs(l2), 1.0)):
            if (l1 < l2) != lt:
                return _fail(pid, name, n, f"float oracle: {m1} vs {m2}")
    return _ok(pid, name, n)


def _p05_cyclotomic(env):
    pid, name = "P05", "cyclotomic valuations increase strictly toward 1"
    ctx = env.ctx
    one = ctx.one()
    prev = None
    for k in range(1, 7):
        v = ctx.cyclotomic_valuation(ctx.p ** k)
        if v >= one:
            return _fail(pid, name, 6, f"k={k}")
        if prev is not None and not v > prev:
            return _fail(pid, name, 6, f"k={k} not increasing")
        prev = v
    if ctx.cyclotomic_valuation(ctx.p + 1) != one:
        return _fail(pid, name, 7, "prime-to-p order should give 1")
    return _ok(pid, name, 7)


def _p06_chordal_ultrametric(env):
    pid, name = "P06", "chordal distance is a bounded ultrametric"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    one = ctx.one()
    for _ in range(n):
        x, y, z = (rand_point(ctx, rng) for _ in range(3))
        dxy, dyz, dxz = (chordal(ctx, x, y), chordal(ctx, y, z),
                         chordal(ctx, x, z))
        if max(dxy, dyz, dxz) > one:
            return _fail(pid, name, n, f"{x},{y},{z}: bound")
        if dxz > max(dxy, dyz):
            return _fail(pid, name, n, f"{x},{y},{z}: ultrametric")
        if chordal(ctx, y, x) != dxy:
            return _fail(pid, name, n, f"{x},{y}: symmetry")
    return _ok(pid, name, n)


def _p07_unitary_isometry(env):
    pid, name = "P07", "unit-norm maps are chordal isometries"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    for _ in range(n):
        g = rand_unitary(ctx, rng)
        for _ in range(5):
            z, w = rand_point(ctx, rng), rand_point(ctx, rng)
            if chordal(ctx, g.apply(z), g.apply(w)) != chordal(ctx, z, w):
                return _fail(pid, name, n, f"g={g} z={z} w={w}")
    return _ok(pid, name, n)


def _p08_cross_ratio(env):
    pid, name = "P08", "every map preserves the chordal cross-ratio"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    done = 0
    while done < n:
        g = rand_map(ctx, rng)
        zs = [rand_point(ctx, rng) for _ in range(4)]
        if len({zs[0], zs[2]}) < 2 or len({zs[1], zs[3]}) < 2:
            continue
        ws = [g.apply(z) for z in zs]
        try:
            before = cross_ratio_chordal(ctx, *zs)
            after = cross_ratio_chordal(ctx, *ws)
        except Exception:
            continue
        if before != after:
            return _fail(pid, name, n, f"g={g} points={list(map(str, zs))}")
        done += 1
    return _ok(pid, name, n)


def _p09_unitary_equivalences(env):
    pid, name = "P09", "unit norm <=> Lipschitz 1 <=> zero displacement <=> norm-stable products"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    one = ctx.one()
    for _ in range(n):
        g = rand_unitary(ctx, rng)
        if env.norm(ctx, g) != one:
            return _fail(pid, name, n, f"norm: g={g}")
        if mb.lipschitz_constant(ctx, g) != one and env.norm is mb.norm:
            return _fail(pid, name, n, f"lipschitz: g={g}")
        if env.norm is mb.norm and mb.gauss_displacement(ctx, g) != 0:
            return _fail(pid, name, n, f"displacement: g={g}")
        for _ in range(4):
            z, w = rand_point(ctx, rng), rand_point(ctx, rng)
            if chordal(ctx, g.apply(z), g.apply(w)) != chordal(ctx, z, w):
                return _fail(pid, name, n, f"isometry: g={g}")
        gm = g.entries()
        gi = g.inverse().entries()
        for _ in range(4):
            h = tuple(rand_elem(ctx, rng) for _ in range(4))
            nh = mat_norm(ctx, h)
            if nh.is_zero:
                continue
            if (mat_norm(ctx, mat_mul(gm, h)) != nh
                    or mat_norm(ctx, mat_mul(h, gm)) != nh
                    or mat_norm(ctx, mat_mul(mat_mul(gm, h), gi)) != nh):
                return _fail(pid, name, n, f"products: g={g} h={h}")
    return _ok(pid, name, n)


def _p10_classify_conjugation(env):
    pid, name = "P10", "classification is conjugation-invariant"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    for _ in range(n):
        g = random_map_any(ctx, rng)
        h = rand_map(ctx, rng)
        if mb.classify(ctx, g.conjugate_by(h)) is not mb.classify(ctx, g):
            return _fail(pid, name, n, f"g={g} h={h}")
    return _ok(pid, name, n)


def _p11_scale_invariance(env):
    pid, name = "P11", "norms, class and fixed points ignore matrix rescaling"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    for _ in range(n):
        g = random_map_any(ctx, rng)
        t = rand_scalar(ctx, rng)
        gs = g.scaled(t)
        if mb.norm(ctx, gs) != mb.norm(ctx, g):
            return _fail(pid, name, n, f"norm: g={g} t={t}")
        if mb.relative_difference_norm(ctx, gs) != mb.relative_difference_norm(ctx, g):
            return _fail(pid, name, n, f"M: g={g} t={t}")
        if mb.classify(ctx, gs) is not mb.classify(ctx, g):
            return _fail(pid, name, n, f"class: g={g} t={t}")
        try:
            if set(mb.fixed_points(ctx, gs)) != set(mb.fixed_points(ctx, g)):
                return _fail(pid, name, n, f"fixed points: g={g} t={t}")
        except UnsupportedExtension:
            pass
    return _ok(pid, name, n)


def _p12_lipschitz(env):
    pid, name = "P12", "Lipschitz bound holds and the witness pair is sharp"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    for _ in range(n):
        g = random_map_any(ctx, rng)
        L = mb.lipschitz_constant(ctx, g)
        for _ in range(8):
            z, w = rand_point(ctx, rng), rand_point(ctx, rng)
            if chordal(ctx, g.apply(z), g.apply(w)) > L * chordal(ctx, z, w):
                return _fail(pid, name, n, f"bound: g={g} z={z} w={w}")
        try:
            z, w = mb.lipschitz_witness(ctx, g)
        except UnsupportedExtension:
            continue
        if chordal(ctx, g.apply(z), g.apply(w)) != L * chordal(ctx, z, w):
            return _fail(pid, name, n, f"witness: g={g}")
    return _ok(pid, name, n)


def _p13_uniform_vs_matrix(env):
    pid, name = "P13", "uniform distance to identity is at most ||g - I||"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    for _ in range(n):
        g = random_map_any(ctx, rng)
        try:
            bound = mb.norm_minus_identity(ctx, g)
        except UnsupportedExtension:
            continue
        if ctx.p >= 3:
            if mb.uniform_distance_to_identity(ctx, g).value > bound:
                return _fail(pid, name, n, f"g={g}")
        else:
            for _ in range(12):
                z = rand_point(ctx, rng)
                if chordal(ctx, g.apply(z), z) > bound:
                    return _fail(pid, name, n, f"g={g} z={z}")
    return _ok(pid, name, n)


def _p14_cube_root_bracket(env):
    pid, name = "P14", "cube-root displacement brackets M within [M/2, 6M... ]"
    rng = env.rng(pid)
    try:
        ctx = derived_context(env.ctx, -3)
    except ValueError:  # pragma: no cover
        return _skip(pid, name, "no D=-3 context")
    n = env.cfg.trials
    half = Fraction(1, 2)
    for _ in range(n):
        g = random_map_any(ctx, rng)
        eps = mb.cube_root_displacement(ctx, g)
        m = mb.relative_difference_norm(ctx, g)
        if not (eps.scale(half) <= m and m <= eps.scale(6)):
            return _fail(pid, name, n, f"g={g}")
    return _ok(pid, name, n)


def _p15_reference_brackets(env):
    pid, name = "P15", "reference-triple and pole-pair displacements bracket M"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    half = Fraction(1, 2)
    for _ in range(n):
        g = random_map_any(ctx, rng)
        m = mb.relative_difference_norm(ctx, g)
        e1 = mb.reference_triple_displacement(ctx, g)
        if not (e1.scale(half) <= m and m <= e1):
            return _fail(pid, name, n, f"triple: g={g}")
        if mb.classify(ctx, g) is ElementClass.PARABOLIC:
            e2 = mb.pole_pair_displacement(ctx, g)
            if not (e2.scale(half) <= m and m <= e2):
                return _fail(pid, name, n, f"pole pair: g={g}")
    return _ok(pid, name, n)


def _p16_uniform_distance(env):
    pid, name = "P16", "sup displacement equals M (p>=3) / stays in the 2-adic bracket"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    half = Fraction(1, 2)
    for _ in range(n):
        g = random_map_any(ctx, rng)
        m = mb.relative_difference_norm(ctx, g)
        if ctx.p >= 3:
            try:
                res = mb.uniform_distance_to_identity(ctx, g)
            except UnsupportedExtension:
                continue
            if res.value != m:
                return _fail(pid, name, n, f"value: g={g}")
            if chordal(ctx, g.apply(res.witness), res.witness) != m:
                return _fail(pid, name, n, f"witness: g={g}")
            for _ in range(10):
                z = rand_point(ctx, rng)
                if chordal(ctx, g.apply(z), z) > m:
                    return _fail(pid, name, n, f"exceeded: g={g} z={z}")
        else:
            best = mb.reference_triple_displacement(ctx, g)
            for _ in range(10):
                z = rand_point(ctx, rng)
                best = max(best, chordal(ctx, g.apply(z), z))
            if not (m.scale(half) <= best and best <= m.scale(2)):
                return _fail(pid, name, n, f"bracket: g={g}")
    return _ok(pid, name, n)


def _p17_three_point_convergence(env):
    pid, name = "P17", "three-point data reconstructs the uniform limit"
    rng = env.rng(pid)
    ctx = env.ctx
    n = max(4, env.cfg.trials // 8)
    zs = (pt(0), pt(1), INFTY)
    for _ in range(n):
        f = random_map_any(ctx, rng)
        g = mb.mobius_through_three_points(*zs, *(f.apply(z) for z in zs))
        if g != f:
            return _fail(pid, name, n, f"reconstruction: f={f}")
        prev = None
        for k in range(1, 6):
            u = MobiusMap.translation(Fraction(ctx.p) ** k)
            fk = u.compose(f)
            if ctx.p >= 3:
                d = mb.uniform_distance(ctx, fk, f)
                if d != Magnitude.from_exp(ctx.p, -k):
                    return _fail(pid, name, n, f"rate: f={f} k={k}")
                if prev is not None and not d < prev:
                    return _fail(pid, name, n, f"monotone: f={f} k={k}")
                prev = d
    return _ok(pid, name, n)


def _p18_right_invariance(env):
    pid, name = "P18", "uniform distance is right-invariant"
    if env.ctx.p == 2:
        return _skip(pid, name, "exact uniform distance needs p >= 3")
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    done = 0
    while done < n:
        f, g, h = (random_map_any(ctx, rng) for _ in range(3))
        try:
            lhs = mb.uniform_distance(ctx, f.compose(h), g.compose(h))
            rhs = mb.uniform_distance(ctx, f, g)
        except UnsupportedExtension:
            continue
        if lhs != rhs:
            return _fail(pid, name, n, f"f={f} g={g} h={h}")
        done += 1
    return _ok(pid, name, n)


def _p19_tree_isometry(env):
    pid, name = "P19", "the action on the tree is an isometry"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    for _ in range(n):
        g = rand_map(ctx, rng)
        x = BerkPoint.disk(rand_scalar(ctx, rng, allow_zero=True),
                           Fraction(rng.randint(-6, 6), rng.choice([1, 2])))
        y = BerkPoint.disk(rand_scalar(ctx, rng, allow_zero=True),
                           Fraction(rng.randint(-6, 6), rng.choice([1, 2])))
        if bk.hyp_dist(ctx, bk.act(ctx, g, x), bk.act(ctx, g, y)) != \
                bk.hyp_dist(ctx, x, y):
            return _fail(pid, name, n, f"g={g} x={x} y={y}")
    return _ok(pid, name, n)


def _p20_displacement_link(env):
    pid, name = "P20", "tree displacement of the Gauss point is 2 log_p ||g||"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    for _ in range(n):
        g = rand_map(ctx, rng)
        if bk.hyp_dist(ctx, bk.act(ctx, g, GAUSS), GAUSS) != \
                mb.gauss_displacement(ctx, g):
            return _fail(pid, name, n, f"g={g}")
    return _ok(pid, name, n)


def _p21_act_composition(env):
    pid, name = "P21", "the tree action respects composition"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    for _ in range(n):
        g, h = rand_map(ctx, rng), rand_map(ctx, rng)
        x = BerkPoint.disk(rand_scalar(ctx, rng, allow_zero=True),
                           Fraction(rng.randint(-5, 5)))
        lhs = bk.act(ctx, g.compose(h), x)
        rhs = bk.act(ctx, g, bk.act(ctx, h, x))
        if not bk.same_point(ctx, lhs, rhs):
            return _fail(pid, name, n, f"g={g} h={h} x={x}")
    return _ok(pid, name, n)


def _p22_join_algebra(env):
    pid, name = "P22", "join is a semilattice and the metric is 0-hyperbolic"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials

    def rp():
        return BerkPoint.disk(rand_scalar(ctx, rng, allow_zero=True),
                              Fraction(rng.randint(-5, 5)))

    for _ in range(n):
        x, y, z, w = rp(), rp(), rp(), rp()
        if not bk.same_point(ctx, bk.join(ctx, x, y), bk.join(ctx, y, x)):
            return _fail(pid, name, n, "commutativity")
        if not bk.same_point(ctx, bk.join(ctx, x, x), x):
            return _fail(pid, name, n, "idempotence")
        lhs = bk.join(ctx, bk.join(ctx, x, y), z)
        rhs = bk.join(ctx, x, bk.join(ctx, y, z))
        if not bk.same_point(ctx, lhs, rhs):
            return _fail(pid, name, n, "associativity")
        d = bk.hyp_dist
        sums = sorted([d(ctx, x, y) + d(ctx, z, w),
                       d(ctx, x, z) + d(ctx, y, w),
                       d(ctx, x, w) + d(ctx, y, z)])
        if sums[1] != sums[2]:
            return _fail(pid, name, n, "four-point condition")
    return _ok(pid, name, n)


def _p23_unitary_gauss(env):
    pid, name = "P23", "unit norm is equivalent to fixing the Gauss point"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    for _ in range(n):
        g = rand_map(ctx, rng) if rng.random() < 0.5 else rand_unitary(ctx, rng)
        if bk.fixes_gauss(ctx, g) != mb.is_unitary(ctx, g):
            return _fail(pid, name, n, f"g={g}")
    return _ok(pid, name, n)


def _census_context(env) -> PadicContext:
    if env.ctx.p == 2:
        return derived_context(env.ctx, 5)
    if env.ctx.p == 3:
        return derived_context(env.ctx, -1)
    return env.ctx


def _census_map(cls, ctx, rng):
    """Class representative whose involution factors keep in-tower axes."""
    p = ctx.p
    if cls is ElementClass.PARABOLIC:
        n = MobiusMap.translation(rand_scalar(ctx, rng))
    else:
        if cls is ElementClass.LOXODROMIC:
            lam = FieldElem(rand_unit(rng, p) * Fraction(p) ** rng.choice([1, 2]))
        elif cls is ElementClass.WILD_ELLIPTIC:
            lam = FieldElem(p + 1)
        else:
            pool = {2: [FieldElem(Fraction(3, 2), Fraction(1, 2), 5)],
                    3: [FieldElem(1, 1, -1), FieldElem(0, 1, -1)]}.get(
                        p, [FieldElem(2)])
            lam = rng.choice(pool)
        n = MobiusMap.scaling(lam * lam)
    for _ in range(40):
        h = rand_map(ctx, rng, lo=-1, hi=1)
        g = n.conjugate_by(h)
        if mb.classify(ctx, g) is cls:
            return g
    raise AssertionError("census generation failed")  # pragma: no cover


def _p24_involution_census(env):
    pid, name = "P24", "involution factors reproduce the class geometry"
    rng = env.rng(pid)
    ctx = _census_context(env)
    n = max(6, env.cfg.trials // 4)
    classes = [ElementClass.PARABOLIC, ElementClass.LOXODROMIC,
               ElementClass.TAME_ELLIPTIC, ElementClass.WILD_ELLIPTIC]
    for cls in classes:
        for _ in range(n):
            g = _census_map(cls, ctx, rng)
            f, h = geo.factor_involutions(ctx, g)
            ef = set(mb.fixed_points(ctx, f))
            eh = set(mb.fixed_points(ctx, h))
            if ef == eh:
                return _fail(pid, name, n, f"identical endpoints: g={g}")
            shared = ef & eh
            if cls is ElementClass.PARABOLIC:
                if len(shared) != 1:
                    return _fail(pid, name, n, f"parabolic endpoints: g={g}")
                continue
            af = geo.Geodesic(*ef)
            ah = geo.Geodesic(*eh)
            ag = geo.axis(ctx, g)
            if not (geo.is_orthogonal(ctx, ag, af)
                    and geo.is_orthogonal(ctx, ag, ah)):
                return _fail(pid, name, n, f"orthogonality: g={g}")
            if ctx.p >= 3:
                met = geo.geodesics_intersection_point(ctx, af, ah) is not None
            else:
                met = geo.tailed_axes_intersect(
                    ctx, geo.tailed_axis(ctx, f), geo.tailed_axis(ctx, h))
            if met != (cls in ELLIPTIC):
                return _fail(pid, name, n, f"intersection: g={g} ({cls.value})")
    return _ok(pid, name, 4 * n)


def _p25_orthogonality_symmetric(env):
    pid, name = "P25", "orthogonality of geodesics is symmetric"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    done = 0
    while done < n:
        b = rand_scalar(ctx, rng)
        m = rand_map(ctx, rng)
        A = geo.Geodesic(m.apply(pt(0)), m.apply(INFTY))
        B = geo.Geodesic(m.apply(pt(b)), m.apply(pt(-b)))
        if set(A.endpoints()) & set(B.endpoints()):
            continue
        if geo.is_orthogonal(ctx, A, B) != geo.is_orthogonal(ctx, B, A):
            return _fail(pid, name, n, f"A={A} B={B}")
        done += 1
    return _ok(pid, name, n)


def _p26_orthogonal_intersection(env):
    pid, name = "P26", "orthogonal pairs meet once (p>=3) / not at all (p=2)"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    done = 0
    while done < n:
        b = rand_scalar(ctx, rng)
        m = rand_map(ctx, rng, lo=-1, hi=1)
        A = geo.Geodesic(m.apply(pt(0)), m.apply(INFTY))
        B = geo.Geodesic(m.apply(pt(b)), m.apply(pt(-b)))
        if set(A.endpoints()) & set(B.endpoints()):
            continue
        if not geo.is_orthogonal(ctx, A, B):
            continue
        point = geo.geodesics_intersection_point(ctx, A, B)
        if ctx.p >= 3:
            if point is None:
                return _fail(pid, name, n, f"disjoint: A={A} B={B}")
            u1 = geo.proj_to_geodesic(ctx, bk.BerkPoint.type_i(B.alpha), A)
            u2 = geo.proj_to_geodesic(ctx, bk.BerkPoint.type_i(B.beta), A)
            if not bk.same_point(ctx, u1, u2):
                return _fail(pid, name, n, f"segment overlap: A={A} B={B}")
        else:
            if point is not None:
                return _fail(pid, name, n, f"intersecting: A={A} B={B}")
        done += 1
    return _ok(pid, name, n)


def _grid_disks(ctx, rng, extra):
    p = ctx.p
    centers = [FieldElem(c) for c in
               (0, 1, -1, 2, -2, p, -p, Fraction(1, p), Fraction(-1, p),
                1 + p, p * p, Fraction(1, p * p))]
    disks = [BerkPoint.disk(c, Fraction(e))
             for c in centers for e in range(-3, 4)]
    for _ in range(extra):
        disks.append(BerkPoint.disk(rand_scalar(ctx, rng, allow_zero=True),
                                    Fraction(rng.randint(-8, 8),
                                             rng.choice([1, 2]))))
    return disks


def _p27_fixed_loci(env):
    pid, name = "P27", "fixed-locus descriptors agree with the action oracle"
    rng = env.rng(pid)
    ctx = _census_context(env)
    per_class = max(3, env.cfg.trials // 12)
    classes = [ElementClass.PARABOLIC, ElementClass.LOXODROMIC,
               ElementClass.TAME_ELLIPTIC, ElementClass.WILD_ELLIPTIC]
    n = 0
    for cls in classes:
        for _ in range(per_class):
            g = _census_map(cls, ctx, rng)
            locus = geo.fixed_locus(ctx, g)
            for x in _grid_disks(ctx, rng, 20):
                n += 1
                if geo.locus_contains(ctx, locus, x) != \
                        geo.locus_membership(ctx, g, x):
                    return _fail(pid, name, n, f"g={g} x={x}")
    return _ok(pid, name, n)


def _p28_decomposition(env):
    pid, name = "P28", "every map splits as unitary times antipodal loxodromic"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    for _ in range(n):
        g = random_map_any(ctx, rng) if rng.random() < 0.7 else \
            rand_unitary(ctx, rng)
        try:
            u, f = geo.decompose_unitary_loxodromic(ctx, g)
        except UnsupportedExtension:
            continue
        if not mb.is_unitary(ctx, u):
            return _fail(pid, name, n, f"u not unitary: g={g}")
        if u.compose(f) != g:
            return _fail(pid, name, n, f"product: g={g}")
        if not f.is_identity():
            if mb.classify(ctx, f) is not ElementClass.LOXODROMIC:
                return _fail(pid, name, n, f"f class: g={g}")
            a, b = mb.fixed_points(ctx, f)
            if geo.antipodal_witness(ctx, a, b) is None:
                return _fail(pid, name, n, f"antipodal: g={g}")
    return _ok(pid, name, n)


def _p29_unitary_gap(env):
    pid, name = "P29", "non-unitary maps sit at uniform distance 1 from every unitary"
    if env.ctx.p == 2:
        return _skip(pid, name, "exact uniform distance needs p >= 3")
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    one = ctx.one()
    done = 0
    while done < n:
        g = random_map_any(ctx, rng)
        if mb.is_unitary(ctx, g):
            continue
        u = rand_unitary(ctx, rng)
        try:
            if mb.uniform_distance(ctx, g, u) != one:
                return _fail(pid, name, n, f"g={g} u={u}")
        except UnsupportedExtension:
            continue
        z = mb.unitary_gap_witness(ctx, g, u)
        if chordal(ctx, g.apply(z), u.apply(z)) != one:
            return _fail(pid, name, n, f"witness: g={g} u={u}")
        done += 1
    return _ok(pid, name, n)


def _p30_common_fixed_point(env):
    pid, name = "P30", "all-elliptic families share a verified fixed point"
    rng = env.rng(pid)
    ctx = _census_context(env)
    n = max(4, env.cfg.trials // 8)
    built = 0
    while built < n:
        size = rng.randint(2, 4)
        family = []
        for _ in range(size):
            cls = rng.choice([ElementClass.TAME_ELLIPTIC,
                              ElementClass.WILD_ELLIPTIC])
            try:
                nml = _normal_form(cls, ctx, rng)
            except UnsupportedExtension:
                nml = _normal_form(ElementClass.WILD_ELLIPTIC, ctx, rng)
            u = rand_unitary(ctx, rng)
            family.append(nml.conjugate_by(u))
        try:
            res = gr.common_fixed_point(ctx, family)
        except NotAllElliptic:
            continue  # a product fell outside the elliptic classes; redraw
        built += 1
        if not res.found:
            return _fail(pid, name, n, f"family failed on {res.failed_on}")
        lox = random_map(ElementClass.LOXODROMIC, ctx, rng)
        try:
            gr.common_fixed_point(ctx, family + [lox])
            return _fail(pid, name, n, "loxodromic injection not detected")
        except NotAllElliptic:
            pass
    return _ok(pid, name, n)


def _p31_translation_family(env):
    pid, name = "P31", "deep translations: no common fixed point below any bound"
    ctx = env.ctx
    p = ctx.p
    gens = [MobiusMap.translation(Fraction(1, p ** k)) for k in (1, 2, 3)]
    try:
        gr.common_fixed_point(ctx, gens)
        return _fail(pid, name, 1, "parabolic family passed the elliptic check")
    except NotAllElliptic:
        pass
    loci = [geo.fixed_locus(ctx, g) for g in gens]
    n = 0
    for e in range(-3, 4):
        for c in (0, 1, p):
            x = BerkPoint.disk(FieldElem(c), Fraction(e))
            n += 1
            everywhere = all(geo.locus_contains(ctx, loc, x) for loc in loci)
            if everywhere != (e >= 3):
                return _fail(pid, name, n, f"x={x}")
    return _ok(pid, name, n)


def _p32_discreteness_flip(env):
    pid, name = "P32", "certification flips when a unitary generator is added"
    ctx = env.ctx
    p = ctx.p
    spec = gr.GroupSpec([MobiusMap.scaling(p)], 4)
    rep = gr.discreteness_report(ctx, spec)
    if rep.verdict != "DISCRETE_CERTIFIED":
        return _fail(pid, name, 1, "pure scaling group not certified")
    spec2 = gr.GroupSpec([MobiusMap.scaling(p), MobiusMap.translation(1)], 3)
    rep2 = gr.discreteness_report(ctx, spec2)
    if rep2.verdict != "NOT_CERTIFIED" or not rep2.unitary_words:
        return _fail(pid, name, 2, "unitary generator not flagged")
    return _ok(pid, name, 2)


def _p33_certified_gap(env):
    pid, name = "P33", "certified balls keep ||g - I|| at least 1"
    ctx = env.ctx
    rng = env.rng(pid)
    n = 6
    for _ in range(n):
        g = random_map(ElementClass.LOXODROMIC, ctx, rng)
        rep = gr.discreteness_report(ctx, gr.GroupSpec([g], 3))
        if rep.verdict != "DISCRETE_CERTIFIED":
            continue
        if rep.min_distance_to_identity < ctx.one():
            return _fail(pid, name, n, f"g={g}")
    return _ok(pid, name, n)


def _p34_cf_unit_case(env):
    pid, name = "P34", "unit continued fractions are isometric with unit gaps"
    rng = env.rng(pid)
    ctx = env.ctx
    n = max(3, env.cfg.trials // 12)
    one = ctx.one()
    for _ in range(n):
        length = 50
        bs = []
        for _ in range(length):
            b = rand_scalar(ctx, rng, lo=0, hi=3, allow_zero=True)
            bs.append(b)
        spec = cf.CFSpec([FieldElem(1)] * length, bs)
        cert = cf.diverges_classically_unit_case(ctx, spec)
        if not cert.applies or cert.diverges is not True:
            return _fail(pid, name, n, "certificate did not fire")
        for k in (1, 10, 25, 50):
            if not mb.is_unitary(ctx, spec.convergent_map(k)):
                return _fail(pid, name, n, f"T_{k} not unitary")
        if any(gap != one for gap in cf.gap_sequence(ctx, spec, 50)):
            return _fail(pid, name, n, "gap left 1")
    return _ok(pid, name, n)


def _p35_cf_oracle(env):
    pid, name = "P35", "convergents match independent nested evaluation"
    rng = env.rng(pid)
    ctx = env.ctx
    n = env.cfg.trials
    for _ in range(n):
        length = rng.randint(1, 12)
        a = [rand_scalar(ctx, rng, lo=-2, hi=2) for _ in range(length)]
        b = [rand_scalar(ctx, rng, lo=-2, hi=2, allow_zero=True)
             for _ in range(length)]
        spec = cf.CFSpec(a, b)
        for k in range(1, length + 1):
            if spec.convergent_value(k) != cf.nested_value(spec, k):
                return _fail(pid, name, n, f"a={list(map(str, a))} k={k}")
        for k in range(1, length):
            if spec.convergent_map(k + 1).apply(INFTY) != \
                    spec.convergent_value(k):
                return _fail(pid, name, n, f"shift identity at k={k}")
    return _ok(pid, name, n)


def _p36_tailed_axes(env):
    pid, name = "P36", "involutions carry a fixed tail at distance 1 (p=2)"
    if env.ctx.p != 2:
        return _skip(pid, name, "tailed axes exist only for p = 2")
    rng = env.rng(pid)
    ctx = derived_context(env.ctx, 5)
    n = max(5, env.cfg.trials // 4)
    for _ in range(n):
        b = rand_scalar(ctx, rng)
        m = rand_map(ctx, rng, lo=-1, hi=1)
        f = geo.involution_with_fixed_points(m.apply(pt(b)),
                                             m.apply(pt(-b)))
        T = geo.tailed_axis(ctx, f)
        if not geo.locus_membership(ctx, f, T.tail):
            return _fail(pid, name, n, f"tail not fixed: f={f}")
        if bk.hyp_dist(ctx, T.tail, T.attach) != 1:
            return _fail(pid, name, n, f"tail distance: f={f}")
    return _ok(pid, name, n)


_PROPERTIES = [
    _p01_ultrametric, _p02_multiplicative, _p03_conjugate_symmetry,
    _p04_magnitude_order, _p05_cyclotomic, _p06_chordal_ultrametric,
    _p07_unitary_isometry, _p08_cross_ratio, _p09_unitary_equivalences,
    _p10_classify_conjugation, _p11_scale_invariance, _p12_lipschitz,
    _p13_uniform_vs_matrix, _p14_cube_root_bracket, _p15_reference_brackets,
    _p16_uniform_distance, _p17_three_point_convergence,
    _p18_right_invariance, _p19_tree_isometry, _p20_displacement_link,
    _p21_act_composition, _p22_join_algebra, _p23_unitary_gauss,
    _p24_involution_census, _p25_orthogonality_symmetric,
    _p26_orthogonal_intersection, _p27_fixed_loci, _p28_decomposition,
    _p29_unitary_gap, _p30_common_fixed_point, _p31_translation_family,
    _p32_discreteness_flip, _p33_certified_gap, _p34_cf_unit_case,
    _p35_cf_oracle, _p36_tailed_axes,
]


def run_suite(config: SuiteConfig, _overrides=None) -> SuiteReport:
    """Run every property at the configured trial counts.

    Failures become FAIL entries with a counterexample string, never
    exceptions.  ``_overrides`` lets the test harness inject corrupted
    primitives to confirm the suite actually detects them.
    """
    env = _Env(config, _overrides)
    results = []
    for prop in _PROPERTIES:
        try:
            results.append(prop(env))
        except Exception as exc:  # a crash is a failure with evidence
            pid = prop.__name__[1:4].upper()
            results.append(PropertyResult(pid, prop.__name__, "FAIL", 0,
                                          f"crash: {exc!r}"))
    return SuiteReport(config, results)
