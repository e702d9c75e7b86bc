"""Exact arithmetic in prime fields F_p for odd primes p >= 3.

Elements are immutable and carry their modulus.  Mixing moduli raises
:class:`ModulusMismatch` instead of silently reducing.
"""

from __future__ import annotations

from functools import lru_cache
from numbers import Integral


class ModulusMismatch(ValueError):
    """Two operands live in different prime fields."""


@lru_cache(maxsize=None)
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


def check_prime(p: int) -> int:
    """Return ``p`` if it is an odd prime, else raise ValueError."""
    if not isinstance(p, Integral) or isinstance(p, bool):
        raise ValueError(f"modulus must be an integer, got {p!r}")
    p = int(p)
    if p < 3 or not is_prime(p):
        raise ValueError(f"modulus must be an odd prime >= 3, got {p}")
    return p


class PrimeFieldElement:
    """An element of F_p stored as a reduced residue."""

    __slots__ = ("residue", "modulus")

    def __init__(self, value: int, modulus: int):
        modulus = check_prime(modulus)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "residue", int(value) % modulus)

    def __setattr__(self, name, value):
        raise AttributeError("PrimeFieldElement is immutable")

    # coercion ---------------------------------------------------------
    def _coerce(self, other) -> int:
        if isinstance(other, PrimeFieldElement):
            if other.modulus != self.modulus:
                raise ModulusMismatch(
                    f"cannot combine F_{self.modulus} with F_{other.modulus}")
            return other.residue
        if isinstance(other, Integral) and not isinstance(other, bool):
            return int(other) % self.modulus
        return NotImplemented

    def _new(self, value: int) -> PrimeFieldElement:
        return PrimeFieldElement(value, self.modulus)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._new(self.residue + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._new(self.residue - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._new(o - self.residue)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._new(self.residue * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.residue)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * fp_inv(self._new(o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._new(o) * fp_inv(self)

    def __pow__(self, n: int):
        return fp_pow(self, n)

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, PrimeFieldElement):
            if other.modulus != self.modulus:
                raise ModulusMismatch(
                    f"cannot compare F_{self.modulus} with F_{other.modulus}")
            return self.residue == other.residue
        if isinstance(other, Integral) and not isinstance(other, bool):
            return self.residue == int(other) % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.modulus))

    def __bool__(self):
        return self.residue != 0

    def __int__(self):
        return self.residue

    __index__ = __int__

    def __repr__(self):
        return f"PrimeFieldElement({self.residue}, {self.modulus})"

    def __str__(self):
        return str(self.residue)


def fp(value: int, p: int) -> PrimeFieldElement:
    """Shorthand constructor."""
    return PrimeFieldElement(value, p)


def fp_inv(a: PrimeFieldElement) -> PrimeFieldElement:
    """Multiplicative inverse; raises ZeroDivisionError for 0."""
    if a.residue == 0:
        raise ZeroDivisionError(f"0 has no inverse in F_{a.modulus}")
    return PrimeFieldElement(pow(a.residue, -1, a.modulus), a.modulus)


def fp_pow(a: PrimeFieldElement, n: int) -> PrimeFieldElement:
    if n < 0:
        return fp_pow(fp_inv(a), -n)
    return PrimeFieldElement(pow(a.residue, n, a.modulus), a.modulus)


def inv_mod(a: int, p: int) -> int:
    """Integer-level inverse used by the series kernel."""
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse in F_{p}")
    return pow(a, -1, p)


def elements(p: int):
    """All elements of F_p in residue order."""
    return [PrimeFieldElement(r, p) for r in range(p)]
