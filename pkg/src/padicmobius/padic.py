"""Exact p-adic valuation arithmetic over Q and one quadratic extension.

The working field is Q or Q(sqrt(D)) for a single squarefree non-square D.
Every absolute value, norm and metric in the package is returned as a
:class:`Magnitude`, an exact positive real of the form c * p**e with c a
positive rational (coprime to p after normalisation) and e rational.  No
floating point enters any computation; floats appear only in test oracles.

Conventions:

* ``vp(x)`` is the exponent of p in x, with ``vp(0) = +inf``.
* ``|x| = p**(-vp(x))``; for a + b*sqrt(D) in the non-split case the
  valuation is ``vp(a*a - D*b*b) / 2``.
* When D is a square in Q_p the extension is "split": Q(sqrt(D)) embeds in
  Q_p by sending sqrt(D) to the canonical Hensel root (smallest valid
  residue mod p, mod 8 for p = 2), and valuations are computed by lifting
  that root until the residue settles.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction

from .errors import ParseError, PrecisionExhausted, UnsupportedExtension

INF = math.inf

_TRIAL_LIMIT = 100_000
_MAX_ABS_D = 10 ** 15

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond any usable prime here."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _is_square_int(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def is_square_rational(q: Fraction) -> bool:
    return _is_square_int(q.numerator) and _is_square_int(q.denominator)


def sqrt_rational(q: Fraction) -> Fraction:
    """Exact square root of a rational perfect square (q >= 0)."""
    return Fraction(math.isqrt(q.numerator), math.isqrt(q.denominator))


def squarefree_part(n: int) -> int:
    """Squarefree part of a nonzero integer (sign preserved).

    Complete for |n| < 10**15: after trial division to 10**5 the remaining
    cofactor has at most two prime factors, so squarefreeness is decided by
    a perfect-square test.
    """
    if n == 0:
        raise ValueError("0 has no squarefree part")
    if abs(n) >= _MAX_ABS_D:
        raise ValueError(f"{n} too large to factor exactly")
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    d = 2
    while d * d <= n and d <= _TRIAL_LIMIT:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            if e % 2:
                out *= d
        d += 1 if d == 2 else 2
    if n > 1:
        r = math.isqrt(n)
        if r * r == n:
            pass  # n is p**2 with p prime beyond the trial limit
        else:
            out *= n  # prime, or a product of two distinct large primes
    return sign * out


def _int_vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of integer 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise ParseError(f"cannot interpret {x!r} as a rational")


def parse_rational(s: str) -> Fraction:
    s = s.strip().replace(" ", "")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {s!r}") from exc


class Magnitude:
    """Exact positive real c * p**e, plus a distinguished zero.

    The coefficient is normalised to be coprime to p, which makes structural
    equality coincide with numerical equality.  The usual total order is
    implemented exactly by clearing denominators in the exponents.
    """

    __slots__ = ("coeff", "exp", "p")

    def __init__(self, p: int, coeff, exp=0):
        coeff = as_fraction(coeff)
        exp = as_fraction(exp)
        if coeff < 0:
            raise ValueError("magnitude coefficient must be >= 0")
        if coeff != 0:
            # strip all powers of p out of the coefficient
            vn = _int_vp(coeff.numerator, p) if coeff.numerator else 0
            vd = _int_vp(coeff.denominator, p)
            if vn:
                coeff /= Fraction(p) ** vn
                exp += vn
            if vd:
                coeff *= Fraction(p) ** vd
                exp -= vd
        else:
            exp = Fraction(0)
        self.coeff = coeff
        self.exp = exp
        self.p = p

    @classmethod
    def zero(cls, p: int) -> "Magnitude":
        return cls(p, 0)

    @classmethod
    def one(cls, p: int) -> "Magnitude":
        return cls(p, 1)

    @classmethod
    def from_exp(cls, p: int, e) -> "Magnitude":
        return cls(p, 1, e)

    @property
    def is_zero(self) -> bool:
        return self.coeff == 0

    def log_p(self) -> Fraction:
        """Exact base-p logarithm; requires a pure power of p."""
        if self.is_zero:
            raise ValueError("log of zero magnitude")
        if self.coeff != 1:
            raise ValueError(f"{self} is not a pure power of {self.p}")
        return self.exp

    def _check(self, other: "Magnitude"):
        if not self.is_zero and not other.is_zero and self.p != other.p:
            raise ValueError("magnitudes from different primes")

    def _cmp(self, other: "Magnitude") -> int:
        self._check(other)
        if self.is_zero:
            return 0 if other.is_zero else -1
        if other.is_zero:
            return 1
        de = self.exp - other.exp
        if de == 0:
            lhs, rhs = self.coeff, other.coeff
        else:
            n, d = de.numerator, de.denominator
            lhs = self.coeff ** d * Fraction(self.p) ** n
            rhs = other.coeff ** d
        return (lhs > rhs) - (lhs < rhs)

    def __eq__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __hash__(self):
        return hash((self.coeff, self.exp))

    def __mul__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        self._check(other)
        if self.is_zero or other.is_zero:
            return Magnitude.zero(self.p if not self.is_zero else other.p)
        return Magnitude(self.p, self.coeff * other.coeff, self.exp + other.exp)

    def __truediv__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("division by zero magnitude")
        if self.is_zero:
            return self
        return Magnitude(self.p, self.coeff / other.coeff, self.exp - other.exp)

    def __pow__(self, n: int):
        if self.is_zero:
            if n <= 0:
                raise ZeroDivisionError
            return self
        return Magnitude(self.p, self.coeff ** n, self.exp * n)

    def sqrt(self) -> "Magnitude":
        if self.is_zero:
            return self
        if not is_square_rational(self.coeff):
            raise ValueError(f"{self} has no exact square root")
        return Magnitude(self.p, sqrt_rational(self.coeff), self.exp / 2)

    def scale(self, q) -> "Magnitude":
        """Multiply by an exact positive rational constant."""
        q = as_fraction(q)
        if q <= 0:
            raise ValueError("scale factor must be positive")
        if self.is_zero:
            return self
        return Magnitude(self.p, self.coeff * q, self.exp)

    def __float__(self):
        if self.is_zero:
            return 0.0
        return float(self.coeff) * float(self.p) ** float(self.exp)

    def __repr__(self):
        return f"Magnitude({self})"

    def __str__(self):
        if self.is_zero:
            return "0"
        return f"{self.coeff}*{self.p}^({self.exp})"


class FieldElem:
    """Element a + b*sqrt(D) of Q or of the quadratic extension Q(sqrt(D)).

    Pure ring arithmetic lives here (it only needs D); valuations live on
    :class:`PadicContext`.  Elements with b = 0 carry D = None and mix freely
    with any extension.
    """

    __slots__ = ("a", "b", "D")

    def __init__(self, a, b=0, D=None):
        a = as_fraction(a)
        b = as_fraction(b)
        if b == 0:
            D = None
        elif D is None:
            raise ValueError("irrational part requires a discriminant")
        self.a = a
        self.b = b
        self.D = D

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElem(other)
        return None

    def _join_D(self, other: "FieldElem"):
        if self.D is None:
            return other.D
        if other.D is None or other.D == self.D:
            return self.D
        raise UnsupportedExtension(
            f"cannot mix sqrt({self.D}) and sqrt({other.D}) elements"
        )

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        D = self._join_D(other)
        return FieldElem(self.a + other.a, self.b + other.b, D)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(-self.a, -self.b, self.D)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        D = self._join_D(other)
        if D is None:
            return FieldElem(self.a * other.a)
        a = self.a * other.a + Fraction(D) * self.b * other.b
        b = self.a * other.b + self.b * other.a
        return FieldElem(a, b, D)

    __rmul__ = __mul__

    def conj(self) -> "FieldElem":
        return FieldElem(self.a, -self.b, self.D)

    def field_norm(self) -> Fraction:
        """a**2 - D*b**2, the norm down to Q."""
        if self.D is None:
            return self.a * self.a
        return self.a * self.a - Fraction(self.D) * self.b * self.b

    def inverse(self) -> "FieldElem":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero field element")
        if self.b == 0:
            return FieldElem(1 / self.a)
        n = self.field_norm()
        # n != 0 because D is not a rational square
        return FieldElem(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = FieldElem(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.b != other.b or self.a != other.a:
            return False
        return self.b == 0 or self.D == other.D

    def __hash__(self):
        return hash((self.a, self.b, self.D))

    def __repr__(self):
        return f"FieldElem({self})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        root = f"sqrt({self.D})"
        if self.b == 1:
            tail = root
        elif self.b == -1:
            tail = f"-{root}"
        else:
            tail = f"{self.b}*{root}"
        if self.a == 0:
            return tail
        sign = "+" if not tail.startswith("-") else ""
        return f"{self.a}{sign}{tail}"


ZERO = FieldElem(0)
ONE = FieldElem(1)


def parse_elem(s: str, D=None) -> FieldElem:
    """Parse "a", "a+b*sqrt(D)" or "b*sqrt(D)" (signs and b=1 forms allowed)."""
    text = s.strip().replace(" ", "")
    if not text:
        raise ParseError("empty field element")
    idx = text.find("sqrt(")
    if idx < 0:
        return FieldElem(parse_rational(text))
    close = text.find(")", idx)
    if close < 0 or close != len(text) - 1:
        raise ParseError(f"bad field element {s!r}")
    try:
        disc = int(text[idx + 5:close])
    except ValueError as exc:
        raise ParseError(f"bad discriminant in {s!r}") from exc
    if D is not None and disc != D:
        raise ParseError(f"element {s!r} uses sqrt({disc}) but context has D={D}")
    head = text[:idx]
    # head is "", "-", "b*", "-b*", "a+b*", "a-b*", "a+", "a-"
    if head.endswith("*"):
        head = head[:-1]
        cut = max(head.rfind("+", 1), head.rfind("-", 1))
        if cut <= 0:
            a_s, b_s = "0", head
        else:
            a_s, b_s = head[:cut], head[cut] + head[cut + 1:]
    else:
        cut = max(head.rfind("+", 1), head.rfind("-", 1))
        if cut <= 0:
            a_s = "0"
            b_s = "-1" if head == "-" else "1" if head == "" else None
            if b_s is None:
                raise ParseError(f"bad field element {s!r}")
        else:
            a_s = head[:cut]
            rest = head[cut + 1:]
            if rest:
                raise ParseError(f"bad field element {s!r}")
            b_s = "-1" if head[cut] == "-" else "1"
    return FieldElem(parse_rational(a_s), parse_rational(b_s), disc)


class HenselRoot:
    """Canonical square root of a p-adic unit, lifted on demand.

    The canonical root is the one whose residue mod p (mod 8 for p = 2) is
    smallest among the actual roots.  ``residue(k)`` returns it mod p**k and
    extends the cached precision as needed; extension is lock-protected so
    shared contexts stay safe across threads.
    """

    __slots__ = ("p", "unit", "_k", "_r", "_roots2", "_lock")

    def __init__(self, p: int, unit: Fraction):
        self.p = p
        self.unit = unit
        self._lock = threading.Lock()
        if p == 2:
            u16 = self._unit_mod(16)
            self._roots2 = [r for r in range(1, 16, 2)
                            if (r * r - u16) % 16 == 0]
            self._k = 4
            self._r = None
        else:
            r = _tonelli_shanks(self._unit_mod(p), p)
            self._r = min(r, p - r)
            self._k = 1
            self._roots2 = None

    def _unit_mod(self, m: int) -> int:
        num = self.unit.numerator % m
        den = self.unit.denominator % m
        return num * pow(den, -1, m) % m

    @property
    def known_precision(self) -> int:
        return self._k if self.p != 2 else max(self._k - 1, 3)

    def digits(self, k: int) -> list:
        """First k p-adic digits of the canonical root."""
        r = self.residue(k)
        out = []
        for _ in range(k):
            out.append(r % self.p)
            r //= self.p
        return out

    def residue(self, k: int) -> int:
        with self._lock:
            if self.p == 2:
                return self._residue2(k)
            while self._k < k:
                new_k = 2 * self._k
                mod = self.p ** new_k
                u = self._unit_mod(mod)
                r = self._r
                # Newton step r -> (r + u/r)/2 doubles the precision
                r = (r + u * pow(r, -1, mod)) * pow(2, -1, mod) % mod
                self._r = r
                self._k = new_k
            return self._r % self.p ** k

    def _residue2(self, k: int) -> int:
        # Track the full set of square roots mod 2**m (always four of them);
        # the pair matching the canonical residue mod 8 agrees mod 2**(m-1).
        target = k + 1
        while self._k < target:
            m = self._k
            mod = 2 ** (m + 1)
            u = self._unit_mod(mod)
            nxt = []
            for r in self._roots2:
                for cand in (r, r + 2 ** m):
                    if (cand * cand - u) % mod == 0:
                        nxt.append(cand % mod)
            self._roots2 = sorted(set(nxt))
            self._k = m + 1
        mod8 = [r % 8 for r in self._roots2]
        canonical = min(m for m in mod8 if m in (1, 3, 5, 7))
        # among roots mod 2**(k+1) the canonical pair agrees mod 2**k
        picks = {r % 2 ** k for r in self._roots2 if r % 8 == canonical}
        if len(picks) != 1:  # pragma: no cover - structural invariant
            raise AssertionError("2-adic root lifting lost canonicality")
        return picks.pop()

    def scaled(self, shift: int) -> "ScaledRoot":
        return ScaledRoot(self, shift)


class ScaledRoot:
    """p**shift times a HenselRoot: the canonical root of a non-unit square."""

    __slots__ = ("root", "shift")

    def __init__(self, root: HenselRoot, shift: int):
        self.root = root
        self.shift = shift


def _tonelli_shanks(n: int, p: int) -> int:
    """Square root of n mod an odd prime p (n must be a QR)."""
    n %= p
    if n == 0:
        return 0
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    c = pow(z, q, p)
    r = pow(n, (q + 1) // 2, p)
    t = pow(n, q, p)
    m = s
    while t != 1:
        i, x = 0, t
        while x != 1:
            x = x * x % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r = r * b % p
        t = t * b * b % p
        c = b * b % p
        m = i
    return r


class PadicContext:
    """The prime p, an optional quadratic discriminant D, and a precision cap.

    All valuation-level operations are methods here; they are pure functions
    of their arguments plus (p, D), so contexts can be shared freely.
    """

    def __init__(self, p: int, D: int | None = None, precision_cap: int = 64):
        if not isinstance(p, int) or not is_prime(p):
            raise ValueError(f"p must be a prime integer, got {p}")
        if D is not None:
            if not isinstance(D, int) or D == 0:
                raise ValueError("D must be a nonzero integer")
            if _is_square_int(D):
                raise ValueError("D must not be a rational square")
            if squarefree_part(D) != D:
                raise ValueError(f"D={D} is not squarefree")
        if precision_cap < 8:
            raise ValueError("precision_cap too small")
        self.p = p
        self.D = D
        self.precision_cap = precision_cap
        self._root_cache: dict[Fraction, HenselRoot | ScaledRoot | None] = {}
        self._cache_lock = threading.Lock()

    def __repr__(self):
        return f"PadicContext(p={self.p}, D={self.D})"

    # -- scalar helpers ----------------------------------------------------

    def elem(self, x) -> FieldElem:
        if isinstance(x, FieldElem):
            if x.D is not None and x.D != self.D:
                raise UnsupportedExtension(
                    f"element over sqrt({x.D}) in a context with D={self.D}")
            return x
        if isinstance(x, str):
            return parse_elem(x, self.D)
        return FieldElem(as_fraction(x))

    def magnitude(self, coeff, exp=0) -> Magnitude:
        return Magnitude(self.p, coeff, exp)

    def one(self) -> Magnitude:
        return Magnitude.one(self.p)

    def mag_zero(self) -> Magnitude:
        return Magnitude.zero(self.p)

    # -- valuations ---------------------------------------------------------

    def vp(self, x) -> int | float:
        """Valuation of a rational; +inf for 0."""
        x = as_fraction(x)
        if x == 0:
            return INF
        return _int_vp(x.numerator, self.p) - _int_vp(x.denominator, self.p)

    def abs_q(self, x) -> Magnitude:
        v = self.vp(x)
        if v is INF:
            return self.mag_zero()
        return Magnitude.from_exp(self.p, -v)

    def sqrt_in_qp(self, x) -> HenselRoot | ScaledRoot | None:
        """Classify x as a square in Q_p; canonical root on success.

        For nonzero rational x: vp(x) must be even and the unit part must be
        a quadratic residue mod p (congruent to 1 mod 8 when p = 2).
        """
        x = as_fraction(x)
        if x == 0:
            raise ValueError("sqrt_in_qp needs x != 0")
        with self._cache_lock:
            if x in self._root_cache:
                return self._root_cache[x]
        v = self.vp(x)
        result = None
        if v % 2 == 0:
            unit = x / Fraction(self.p) ** v
            m = unit.numerator * pow(unit.denominator, -1, self.p ** 3 if self.p == 2 else self.p)
            if self.p == 2:
                if m % 8 == 1:
                    result = HenselRoot(2, unit)
            else:
                if pow(m, (self.p - 1) // 2, self.p) == 1:
                    result = HenselRoot(self.p, unit)
            if result is not None and v != 0:
                result = result.scaled(v // 2)
        with self._cache_lock:
            self._root_cache[x] = result
        return result

    def _embedded_vp(self, a: Fraction, b: Fraction) -> Fraction:
        """vp(a + b*s) where s is the canonical root of the split D."""
        root = self.sqrt_in_qp(Fraction(self.D))
        if isinstance(root, ScaledRoot):
            shift, root = root.shift, root.root
        else:
            shift = 0
        b = b * Fraction(self.p) ** shift
        den = (a.denominator * b.denominator) // math.gcd(a.denominator, b.denominator)
        A = int(a * den)
        B = int(b * den)
        k = 8
        while k <= self.precision_cap:
            r = root.residue(k)
            w = (A + B * r) % self.p ** k
            if w != 0:
                v = _int_vp(w, self.p)
                if v < k:
                    return Fraction(v - self.vp(den))
            k *= 2
        raise PrecisionExhausted(
            f"valuation of {a}+{b}*sqrt({self.D}) undetermined at cap "
            f"{self.precision_cap}")

    def val_elem(self, x) -> Fraction | float:
        x = self.elem(x)
        if x.is_zero:
            return INF
        if x.b == 0:
            return Fraction(self.vp(x.a))
        if self.D is None or x.D != self.D:
            raise UnsupportedExtension(
                f"element over sqrt({x.D}) in context D={self.D}")
        if self.sqrt_in_qp(Fraction(self.D)) is None:
            return Fraction(self.vp(x.field_norm())) / 2
        return self._embedded_vp(x.a, x.b)

    def abs_elem(self, x) -> Magnitude:
        v = self.val_elem(x)
        if v is INF:
            return self.mag_zero()
        return Magnitude.from_exp(self.p, -v)

    # -- square roots inside the tower --------------------------------------

    def sqrt_field(self, x) -> FieldElem | None:
        """Exact square root of x within Q(sqrt(D)), or None.

        Tries a rational root, a pure sqrt(D) multiple, or the generic
        (u + v*sqrt(D))**2 pattern; never leaves the tower.
        """
        x = self.elem(x)
        if x.is_zero:
            return ZERO
        if x.b == 0:
            q = x.a
            if q > 0 and is_square_rational(q):
                return FieldElem(sqrt_rational(q))
            if self.D is not None:
                q_over = q / self.D
                if q_over > 0 and is_square_rational(q_over):
                    return FieldElem(0, sqrt_rational(q_over), self.D)
            return None
        n = x.field_norm()
        if n <= 0 or not is_square_rational(n):
            return None
        s = sqrt_rational(n)
        for t in (x.a + s, x.a - s):
            u2 = t / 2
            if u2 > 0 and is_square_rational(u2):
                u = sqrt_rational(u2)
                v = x.b / (2 * u)
                cand = FieldElem(u, v, self.D)
                if cand * cand == x:
                    return cand
        return None

    def require_sqrt(self, x) -> FieldElem:
        r = self.sqrt_field(x)
        if r is None:
            x = self.elem(x)
            needed = None
            if x.is_rational and x.a != 0:
                try:
                    needed = squarefree_part(x.a.numerator * x.a.denominator)
                except ValueError:
                    needed = None
            msg = f"needs sqrt({x})"
            if needed is not None:
                msg += f"; extend the context with D={needed}"
            raise UnsupportedExtension(msg, needed=needed)
        return r

    def scalar_with_magnitude(self, e) -> FieldElem:
        """A field element t with |t| = p**e, for e in (1/2)Z when possible."""
        e = as_fraction(e)
        if e.denominator == 1:
            return FieldElem(Fraction(self.p) ** (-e))
        if e.denominator == 2 and self.D is not None:
            vD = self.vp(Fraction(self.D))
            if vD % 2 == 1:
                m = -e - Fraction(vD, 2)
                t = FieldElem(0, Fraction(self.p) ** m, self.D)
                return t
        raise UnsupportedExtension(
            f"no element of magnitude {self.p}^({e}) in the current tower")

    # -- cyclotomic data -----------------------------------------------------

    def cyclotomic_valuation(self, d: int) -> Magnitude:
        """|zeta_d - 1| for a primitive d-th root of unity.

        Equal to 1 unless d is a power of p, in which case it is
        p**(-1/(p**(k-1) * (p-1))) for d = p**k.
        """
        if d < 2:
            raise ValueError("d must be >= 2")
        k = 0
        while d % self.p == 0:
            d //= self.p
            k += 1
        if d > 1 or k == 0:
            return self.one()
        return Magnitude.from_exp(
            self.p, -Fraction(1, self.p ** (k - 1) * (self.p - 1)))
