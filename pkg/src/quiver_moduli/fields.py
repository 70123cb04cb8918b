"""Coefficient fields: exact rationals and prime fields.

Symbolic work (chart ideals, normal forms) runs over the rationals with
``fractions.Fraction`` elements.  Numeric sampling runs over a prime field
``GF(p)`` whose elements wrap an integer residue and support the same
operator set, so the linear algebra helpers work over either field.
"""

from __future__ import annotations

from fractions import Fraction


class FieldError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class RationalField:
    """The field of rational numbers; elements are ``Fraction`` instances."""

    characteristic = 0
    name = "QQ"

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def of(self, x) -> Fraction:
        if isinstance(x, PrimeFieldElement):
            raise FieldError("cannot coerce a prime-field element into QQ")
        return Fraction(x)

    def random(self, rng) -> Fraction:
        return Fraction(rng.randint(-9, 9))

    def __repr__(self) -> str:
        return "QQ"

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")


class PrimeFieldElement:
    __slots__ = ("field", "value")

    def __init__(self, field: "PrimeField", value: int):
        self.field = field
        self.value = value % field.p

    def _lift(self, other) -> "PrimeFieldElement":
        if isinstance(other, PrimeFieldElement):
            if other.field.p != self.field.p:
                raise FieldError("mixed prime fields")
            return other
        if isinstance(other, int):
            return PrimeFieldElement(self.field, other)
        if isinstance(other, Fraction):
            return self.field.of(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return PrimeFieldElement(self.field, self.value + o.value)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return PrimeFieldElement(self.field, self.value - o.value)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return PrimeFieldElement(self.field, o.value - self.value)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return PrimeFieldElement(self.field, self.value * o.value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return PrimeFieldElement(self.field, -self.value)

    def __pow__(self, n: int):
        return PrimeFieldElement(self.field, pow(self.value, n, self.field.p))

    def inverse(self) -> "PrimeFieldElement":
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero in GF(p)")
        return PrimeFieldElement(self.field, pow(self.value, -1, self.field.p))

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, PrimeFieldElement):
            return self.field.p == other.field.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.value))

    def __repr__(self) -> str:
        return f"{self.value}"


class PrimeField:
    """GF(p) for a prime p, the sampling field for the numeric oracle."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    @property
    def zero(self) -> PrimeFieldElement:
        return PrimeFieldElement(self, 0)

    @property
    def one(self) -> PrimeFieldElement:
        return PrimeFieldElement(self, 1)

    def of(self, x) -> PrimeFieldElement:
        if isinstance(x, PrimeFieldElement):
            if x.field.p != self.p:
                raise FieldError("mixed prime fields")
            return x
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise FieldError(f"denominator of {x} vanishes mod {self.p}")
            return PrimeFieldElement(self, x.numerator * pow(den, -1, self.p))
        if isinstance(x, int):
            return PrimeFieldElement(self, x)
        raise FieldError(f"cannot coerce {x!r} into {self.name}")

    def random(self, rng) -> PrimeFieldElement:
        return PrimeFieldElement(self, rng.randrange(self.p))

    def __repr__(self) -> str:
        return self.name

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))


QQ = RationalField()
