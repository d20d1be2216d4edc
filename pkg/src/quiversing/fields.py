"""Scalar fields for exact linear algebra.

The default field is the rationals with arbitrary-precision arithmetic
(gmpy2.mpq when available, fractions.Fraction otherwise; both keep scalars
in canonical reduced form with positive denominator, so equality of scalars
is syntactic).  A prime field F_p is available as an alternative backend
for speed experiments.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _mpq = None


class RationalField:
    """The field of exact rational numbers p/q."""

    name = "q"

    def __init__(self) -> None:
        self._ctor = _mpq if _mpq is not None else Fraction
        self.zero = self._ctor(0)
        self.one = self._ctor(1)

    def of(self, value):
        """Coerce an int, rational scalar, or string like "3" or "-2/7"."""
        if isinstance(value, str):
            return self._ctor(value.strip())
        if isinstance(value, float):
            raise TypeError("floats are not exact; pass ints, strings or rationals")
        return self._ctor(value)

    def to_str(self, value) -> str:
        return str(value)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash(RationalField)

    def __repr__(self) -> str:
        return "QQ"


QQ = RationalField()


class FpElement:
    """An element of F_p; arithmetic stays inside one PrimeField."""

    __slots__ = ("p", "v")

    def __init__(self, p: int, v: int) -> None:
        self.p = p
        self.v = v % p

    def _check(self, other: "FpElement") -> None:
        if not isinstance(other, FpElement) or other.p != self.p:
            raise TypeError("mixed-field arithmetic")

    def __add__(self, other):
        self._check(other)
        return FpElement(self.p, self.v + other.v)

    def __sub__(self, other):
        self._check(other)
        return FpElement(self.p, self.v - other.v)

    def __mul__(self, other):
        self._check(other)
        return FpElement(self.p, self.v * other.v)

    def __truediv__(self, other):
        self._check(other)
        if other.v == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElement(self.p, self.v * pow(other.v, -1, self.p))

    def __neg__(self):
        return FpElement(self.p, -self.v)

    def __bool__(self) -> bool:
        return self.v != 0

    def __eq__(self, other) -> bool:
        return isinstance(other, FpElement) and other.p == self.p and other.v == self.v

    def __hash__(self) -> int:
        return hash((self.p, self.v))

    def __repr__(self) -> str:
        return str(self.v)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class PrimeField:
    """The prime field F_p (speed-experiment backend)."""

    name = "fp"

    def __init__(self, p: int) -> None:
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.zero = FpElement(p, 0)
        self.one = FpElement(p, 1)

    def of(self, value):
        if isinstance(value, FpElement):
            if value.p != self.p:
                raise TypeError("element of a different prime field")
            return value
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, int):
            return FpElement(self.p, value)
        if isinstance(value, float):
            raise TypeError("floats are not exact; pass ints, strings or rationals")
        # rational p/q with q invertible mod p
        num, den = value.numerator, value.denominator
        if den % self.p == 0:
            raise ZeroDivisionError(f"denominator {den} not invertible mod {self.p}")
        return FpElement(self.p, num * pow(den % self.p, -1, self.p))

    def to_str(self, value) -> str:
        return str(value.v)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash((PrimeField, self.p))

    def __repr__(self) -> str:
        return f"GF({self.p})"


_GF_CACHE: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    """Return the (cached) prime field with p elements."""
    if p not in _GF_CACHE:
        _GF_CACHE[p] = PrimeField(p)
    return _GF_CACHE[p]


def field_from_name(name: str):
    """Resolve a field selector: "q" or "fp:<prime>"."""
    if name == "q":
        return QQ
    if name.startswith("fp:"):
        return GF(int(name[3:]))
    raise ValueError(f"unknown field {name!r} (expected 'q' or 'fp:<prime>')")
