"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Values are kept in canonical form: a rational coefficient vector over the
power basis {zeta_n^0, ..., zeta_n^(phi(n)-1)} after reduction modulo the
n-th cyclotomic polynomial.  Canonical form is unique per value, so equality
is plain coefficient comparison.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .errors import ModulusMismatch, NonCoprimeResidue

Rational = int | Fraction


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    """Euler's totient of a positive integer."""
    if n < 1:
        raise ValueError(f"totient needs n >= 1, got {n}")
    result = n
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            result -= result // p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    # Exact division of integer polynomials (coefficients ascending, den monic-led).
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for shift in range(len(out) - 1, -1, -1):
        coeff = num[len(den) - 1 + shift]
        if coeff % lead:
            raise ArithmeticError("non-exact polynomial division")
        q = coeff // lead
        out[shift] = q
        if q:
            for i, d in enumerate(den):
                num[i + shift] -= q * d
    if any(num):
        raise ArithmeticError("non-exact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError(f"modulus must be positive, got {n}")
    if n == 1:
        return (-1, 1)
    poly = [0] * (n + 1)
    poly[0], poly[n] = -1, 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_div_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def power_basis_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row j is zeta_n^j expressed over the power basis, for j in 0..n-1."""
    phi = euler_phi(n)
    poly = cyclotomic_polynomial(n)
    # x^phi = -(poly without leading term), since poly is monic
    top = tuple(-c for c in poly[:phi])
    rows: list[tuple[int, ...]] = []
    current = [0] * phi
    current[0] = 1
    for _ in range(n):
        rows.append(tuple(current))
        carried = current[phi - 1]
        current = [0] + current[: phi - 1]
        if carried:
            current = [c + carried * t for c, t in zip(current, top)]
    return tuple(rows)


class Cyclotomic:
    """An element of Q(zeta_n) in canonical power-basis form."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: tuple[Fraction, ...]):
        self.n = n
        self.coeffs = coeffs

    @classmethod
    def from_rational(cls, value: Rational, n: int = 1) -> Cyclotomic:
        phi = euler_phi(n)
        coeffs = (Fraction(value),) + (Fraction(0),) * (phi - 1)
        return cls(n, coeffs)

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> Cyclotomic:
        """The root of unity zeta_n^k."""
        row = power_basis_table(n)[k % n]
        return cls(n, tuple(Fraction(c) for c in row))

    @classmethod
    def from_exponents(cls, n: int, multiplicities: dict[int, Rational]) -> Cyclotomic:
        """Sum of m * zeta_n^t over the given exponent -> multiplicity map."""
        phi = euler_phi(n)
        table = power_basis_table(n)
        acc = [Fraction(0)] * phi
        for t, m in multiplicities.items():
            if m:
                row = table[t % n]
                for i in range(phi):
                    if row[i]:
                        acc[i] += m * row[i]
        return cls(n, tuple(acc))

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def to_modulus(self, m: int) -> Cyclotomic:
        """Embed into Q(zeta_m); requires n | m."""
        if m == self.n:
            return self
        if m % self.n:
            raise ModulusMismatch(f"cannot embed modulus {self.n} into {m}")
        step = m // self.n
        return Cyclotomic.from_exponents(
            m, {a * step: c for a, c in enumerate(self.coeffs) if c}
        )

    def _align(self, other: object) -> Cyclotomic:
        if isinstance(other, Cyclotomic):
            if other.n != self.n:
                raise ModulusMismatch(
                    f"moduli {self.n} and {other.n} differ; embed into the "
                    f"compositum (e.g. to_modulus({lcm(self.n, other.n)})) first"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.from_rational(other, self.n)
        return NotImplemented

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: object) -> Cyclotomic:
        rhs = self._align(other)
        if rhs is NotImplemented:
            return NotImplemented
        return Cyclotomic(self.n, tuple(a + b for a, b in zip(self.coeffs, rhs.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> Cyclotomic:
        return Cyclotomic(self.n, tuple(-a for a in self.coeffs))

    def __sub__(self, other: object) -> Cyclotomic:
        rhs = self._align(other)
        if rhs is NotImplemented:
            return NotImplemented
        return Cyclotomic(self.n, tuple(a - b for a, b in zip(self.coeffs, rhs.coeffs)))

    def __rsub__(self, other: object) -> Cyclotomic:
        return (-self) + other

    def __mul__(self, other: object) -> Cyclotomic:
        rhs = self._align(other)
        if rhs is NotImplemented:
            return NotImplemented
        if rhs.is_rational():
            q = rhs.coeffs[0]
            return Cyclotomic(self.n, tuple(a * q for a in self.coeffs))
        if self.is_rational():
            q = self.coeffs[0]
            return Cyclotomic(self.n, tuple(a * q for a in rhs.coeffs))
        n, phi = self.n, len(self.coeffs)
        table = power_basis_table(n)
        acc = [Fraction(0)] * phi
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(rhs.coeffs):
                if not b:
                    continue
                e = i + j
                if e < phi:
                    acc[e] += a * b
                else:
                    row = table[e % n]
                    ab = a * b
                    for t in range(phi):
                        if row[t]:
                            acc[t] += ab * row[t]
        return Cyclotomic(n, tuple(acc))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Cyclotomic:
        if k < 0:
            raise ValueError("negative powers not supported")
        out = Cyclotomic.from_rational(1, self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    # -- Galois action -----------------------------------------------------

    def galois(self, r: int) -> Cyclotomic:
        """Image under zeta_n -> zeta_n^r; requires gcd(r, n) = 1."""
        n = self.n
        if gcd(r, n) != 1:
            raise NonCoprimeResidue(f"residue {r} not coprime to modulus {n}")
        if n == 1 or r % n == 1 or self.is_rational():
            return self
        return Cyclotomic.from_exponents(
            n, {(a * r) % n: c for a, c in enumerate(self.coeffs) if c}
        )

    def conjugate(self) -> Cyclotomic:
        return self.galois(self.n - 1) if self.n > 1 else self

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other: object) -> bool:
        rhs = self._align(other)
        if rhs is NotImplemented:
            return NotImplemented
        return self.coeffs == rhs.coeffs

    def __hash__(self) -> int:
        return hash((self.n, self.coeffs))

    # -- rendering -----------------------------------------------------------

    def render(self) -> str:
        """Canonical text form: rational, or c*E(n)^k terms in ascending k."""
        if self.is_rational():
            return str(self.coeffs[0])
        parts: list[str] = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
                continue
            power = f"E({self.n})" if k == 1 else f"E({self.n})^{k}"
            if c == 1:
                term = power
            elif c == -1:
                term = f"-{power}"
            else:
                term = f"{c}*{power}"
            if parts and not term.startswith("-"):
                parts.append(f"+{term}")
            else:
                parts.append(term)
        return "".join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Cyclotomic({self.n}, {self.render()})"


def root_of_unity(n: int, k: int = 1) -> Cyclotomic:
    """zeta_n^k as an exact cyclotomic value."""
    return Cyclotomic.zeta(n, k)
