"""Exact arithmetic in F_q (q prime) and its extensions F_{q^l}.

A ``Field`` fixes the prime q, the degree l and a monic irreducible modulus
of degree l over F_q.  The modulus is chosen deterministically as the
lexicographically smallest irreducible candidate, comparing coefficient
tuples low degree first, so two contexts built from the same (q, l) agree
element-for-element.  Elements are immutable coefficient vectors in the
power basis of the modulus; that vector view doubles as the fixed
F_q-linear identification of F_q^l with F_{q^l}.  Degree 1 reduces to F_q
itself (the formal modulus is x).
"""

from __future__ import annotations

import functools
import itertools
import random

ENUMERATION_GUARD = 1 << 20
MAX_PRIME = 1 << 16
MAX_DEGREE = 16


class GuardError(RuntimeError):
    """An operation would exceed a configured resource guard."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _poly_rem(num: list[int], div: tuple[int, ...], q: int) -> list[int]:
    """Remainder of num modulo a monic div; coefficients low degree first."""
    num = list(num)
    dd = len(div) - 1
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            num[i] = 0
            for j in range(dd):
                num[i - dd + j] = (num[i - dd + j] - c * div[j]) % q
    while num and num[-1] == 0:
        num.pop()
    return num


def _is_irreducible(poly: tuple[int, ...], q: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(poly)/2."""
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(q), repeat=d):
            if not _poly_rem(list(poly), low + (1,), q):
                return False
    return True


@functools.lru_cache(maxsize=None)
def _smallest_irreducible(q: int, l: int) -> tuple[int, ...]:
    for low in itertools.product(range(q), repeat=l):
        cand = low + (1,)
        if _is_irreducible(cand, q):
            return cand
    raise AssertionError(f"no irreducible polynomial of degree {l} over F_{q}")


class Field:
    """Arithmetic context for F_{q^l} with a deterministic modulus."""

    __slots__ = ("q", "l", "order", "modulus", "_zero", "_one")

    def __init__(self, q: int, l: int):
        if not isinstance(q, int) or not is_prime(q):
            raise ValueError(f"q must be prime, got {q!r}")
        if q > MAX_PRIME:
            raise ValueError(f"q exceeds supported bound 2^16: {q}")
        if not isinstance(l, int) or not 1 <= l <= MAX_DEGREE:
            raise ValueError(f"extension degree must be in [1, {MAX_DEGREE}], got {l!r}")
        self.q = q
        self.l = l
        self.order = q**l
        self.modulus = _smallest_irreducible(q, l)
        self._zero = Fel(self, (0,) * l)
        self._one = Fel(self, (1,) + (0,) * (l - 1))

    def __eq__(self, other):
        return isinstance(other, Field) and self.q == other.q and self.l == other.l

    def __hash__(self):
        return hash((Field, self.q, self.l))

    def __repr__(self):
        return f"Field(q={self.q}, l={self.l})"

    @property
    def zero(self) -> Fel:
        return self._zero

    @property
    def one(self) -> Fel:
        return self._one

    def __call__(self, value) -> Fel:
        """Coerce an int (base-field scalar), coefficient vector or Fel."""
        if isinstance(value, Fel):
            if value.field != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, int):
            return self.embed(value)
        coeffs = tuple(int(c) % self.q for c in value)
        if len(coeffs) != self.l:
            raise ValueError(f"expected {self.l} coordinates, got {len(coeffs)}")
        return Fel(self, coeffs)

    def embed(self, c: int) -> Fel:
        """Lift a base-field scalar into the extension as a constant."""
        return Fel(self, (c % self.q,) + (0,) * (self.l - 1))

    def from_vector(self, vec) -> Fel:
        vec = tuple(int(c) % self.q for c in vec)
        if len(vec) != self.l:
            raise ValueError(f"vector of length {len(vec)} does not match degree {self.l}")
        return Fel(self, vec)

    def to_vector(self, a: Fel) -> tuple[int, ...]:
        if a.field != self:
            raise ValueError("element belongs to a different field")
        return a.coeffs

    def elements(self) -> list[Fel]:
        """All q^l elements in lexicographic coordinate order (zero first)."""
        if self.order > ENUMERATION_GUARD:
            raise GuardError(
                f"field of size {self.order} exceeds enumeration guard {ENUMERATION_GUARD}"
            )
        return [Fel(self, c) for c in itertools.product(range(self.q), repeat=self.l)]

    def random_element(self, rng: random.Random) -> Fel:
        return Fel(self, tuple(rng.randrange(self.q) for _ in range(self.l)))


class Fel:
    """An element of F_{q^l}: a length-l coefficient tuple, low degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: tuple[int, ...]):
        # internal constructor: callers must pass reduced coefficients
        self.field = field
        self.coeffs = coeffs

    def _check(self, other) -> bool:
        if not isinstance(other, Fel):
            return False
        if self.field != other.field:
            raise ValueError("mixed-field arithmetic")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        q = self.field.q
        return Fel(self.field, tuple((a + b) % q for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        q = self.field.q
        return Fel(self.field, tuple((a - b) % q for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        q = self.field.q
        return Fel(self.field, tuple((-a) % q for a in self.coeffs))

    def __mul__(self, other):
        if not self._check(other):
            return NotImplemented
        f = self.field
        q, l = f.q, f.l
        a, b = self.coeffs, other.coeffs
        if l == 1:
            return Fel(f, ((a[0] * b[0]) % q,))
        prod = [0] * (2 * l - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        mod = f.modulus
        for i in range(2 * l - 2, l - 1, -1):
            c = prod[i] % q
            if c:
                for j in range(l):
                    prod[i - l + j] -= c * mod[j]
        return Fel(f, tuple(v % q for v in prod[:l]))

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent; invert first")
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inv(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        if not self._check(other):
            return NotImplemented
        return self * other.inv()

    def frob(self, i: int):
        """The i-fold q-power map a -> a^(q^i)."""
        if i < 0:
            raise ValueError("frobenius power must be nonnegative")
        a = self
        for _ in range(i % self.field.l):  # the map has order dividing l
            a = a**self.field.q
        return a

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, Fel)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field.q, self.field.l, self.coeffs))

    def __repr__(self):
        return f"Fel{self.coeffs}"
