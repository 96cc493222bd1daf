"""Unit groups (Z/nZ)^x and canonical names for subfields of cyclotomic fields.

A subfield F of Q(zeta_n) is the fixed field of a subgroup H of the unit
group mod n.  Its canonical name is the pair (conductor, subgroup) at the
smallest admissible modulus, which makes fields comparable across groups.
The unit group mod 1 is represented as {0}.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm, prod

from .errors import NonCoprimeModuli, NonCoprimeResidue, NotASubgroup
from .cyclotomic import euler_phi

RATIONAL = "RATIONAL"
REAL = "REAL"
IMAGINARY = "IMAGINARY"


@lru_cache(maxsize=None)
def unit_residues(n: int) -> tuple[int, ...]:
    """Sorted residues coprime to n ((0,) for n = 1)."""
    if n < 1:
        raise ValueError(f"modulus must be positive, got {n}")
    if n == 1:
        return (0,)
    return tuple(r for r in range(1, n) if gcd(r, n) == 1)


@dataclass(frozen=True)
class UnitGroup:
    """The multiplicative group of residues coprime to the modulus."""

    modulus: int
    elements: tuple[int, ...]

    @classmethod
    def of(cls, n: int) -> UnitGroup:
        return cls(n, unit_residues(n))

    @property
    def order(self) -> int:
        return len(self.elements)


def _normalize_subset(n: int, residues) -> frozenset[int]:
    return frozenset(r % n for r in residues)


def is_unit_subgroup(n: int, residues) -> bool:
    """True iff the residues form a subgroup of (Z/nZ)^x."""
    H = _normalize_subset(n, residues)
    if n == 1:
        return H == {0}
    units = set(unit_residues(n))
    if not H or not H <= units or 1 not in H:
        return False
    return all((a * b) % n in H for a in H for b in H)


@dataclass(frozen=True)
class FieldKey:
    """Canonical (conductor, unit subgroup) name of an abelian field."""

    conductor: int
    subgroup: tuple[int, ...]

    @property
    def degree(self) -> int:
        return euler_phi(self.conductor) // len(self.subgroup)

    @property
    def is_rational(self) -> bool:
        return self.conductor == 1

    def render(self) -> str:
        if self.is_rational:
            return "Q"
        inner = ",".join(str(r) for r in self.subgroup)
        return f"F(c={self.conductor}; H={{{inner}}})"

    def __str__(self) -> str:
        return self.render()


RATIONAL_FIELD = FieldKey(1, (0,))


def field_key(n: int, residues) -> FieldKey:
    """Canonicalize the fixed field of a unit subgroup mod n.

    The conductor is the smallest divisor d of n (d != 2 mod 4) such that
    the kernel of reduction mod d lies inside the subgroup; the subgroup is
    then reduced mod d.  Degree phi(n)/|H| is preserved.
    """
    H = _normalize_subset(n, residues)
    if not is_unit_subgroup(n, H):
        raise NotASubgroup(f"{sorted(H)} is not a subgroup of units mod {n}")
    if n == 1:
        return RATIONAL_FIELD
    for d in sorted(x for x in range(1, n + 1) if n % x == 0 and x % 4 != 2):
        if d == 1:
            kernel = set(unit_residues(n))
        else:
            kernel = {u for u in unit_residues(n) if u % d == 1}
        if kernel <= H:
            if d == 1:
                return RATIONAL_FIELD
            reduced = tuple(sorted({u % d for u in H}))
            key = FieldKey(d, reduced)
            assert euler_phi(n) * len(reduced) == euler_phi(d) * len(H)
            return key
    raise AssertionError("unreachable: d = n always admissible")


def field_contains(first: FieldKey, second: FieldKey) -> bool:
    """True iff first is a subfield of second (both canonical)."""
    if first.is_rational:
        return True
    if second.conductor % first.conductor:
        return False
    c = first.conductor
    image = {u % c for u in second.subgroup}
    return image <= set(first.subgroup)


@dataclass(frozen=True)
class FieldSignature:
    kind: str  # RATIONAL | REAL | IMAGINARY
    is_imaginary_quadratic: bool


def field_signature(key: FieldKey) -> FieldSignature:
    """Realness of the field: rational, real, or properly imaginary."""
    if key.is_rational:
        return FieldSignature(RATIONAL, False)
    real = (key.conductor - 1) in key.subgroup
    if real:
        return FieldSignature(REAL, False)
    return FieldSignature(IMAGINARY, key.degree == 2)


def is_real_field(key: FieldKey) -> bool:
    return field_signature(key).kind in (RATIONAL, REAL)


def galois_structure(p: int, a: int) -> tuple[int, ...]:
    """Cyclic factor orders of the unit group mod p^a (Galois group of Q_{p^a})."""
    if a < 1:
        raise ValueError(f"exponent must be >= 1, got {a}")
    if p == 2:
        if a == 1:
            return ()
        if a == 2:
            return (2,)
        return (2 ** (a - 2), 2)
    return (p ** (a - 1) * (p - 1),)


def _subgroup_count_bounded_index(elements: list[int], mul, identity, bound: int) -> int:
    # Enumerate subgroups of a rank <= 2 abelian group by closing all pairs.
    seen: set[frozenset[int]] = set()
    order = len(elements)
    for x in elements:
        for y in elements:
            sub = {identity}
            frontier = [x, y]
            while frontier:
                g = frontier.pop()
                if g in sub:
                    continue
                new = {mul(g, h) for h in sub} | {g}
                frontier.extend(new - sub)
                sub |= new
            seen.add(frozenset(sub))
    return sum(1 for s in seen if order // len(s) <= bound)


def count_bounded_subfields(p: int, a: int, d: int) -> int:
    """Number of subgroups of (Z/p^aZ)^x of index at most d."""
    if d < 1:
        raise ValueError(f"degree bound must be >= 1, got {d}")
    n = p**a
    units = unit_residues(n)
    if n <= 2:
        return 1
    # Index <= d subgroups all contain the lcm(1..d)-th powers; count in the quotient.
    L = lcm(*range(1, d + 1))
    powers = {pow(u, L, n) for u in units}
    cosets: dict[int, int] = {}
    reps: list[int] = []
    for u in units:
        key = min((u * w) % n for w in powers)
        if key not in cosets:
            cosets[key] = len(reps)
            reps.append(key)
    rep_index = {r: i for r, i in cosets.items()}

    def mul(i: int, j: int) -> int:
        v = (reps[i] * reps[j]) % n
        return rep_index[min((v * w) % n for w in powers)]

    identity = rep_index[min(powers)]
    return _subgroup_count_bounded_index(list(range(len(reps))), mul, identity, d)


@dataclass(frozen=True)
class GaloisElement:
    """An automorphism of Q(zeta_n), named by its residue r: zeta -> zeta^r."""

    modulus: int
    residue: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        if gcd(self.residue, self.modulus) != 1:
            raise NonCoprimeResidue(
                f"residue {self.residue} not coprime to modulus {self.modulus}"
            )


def crt_assemble(components: list[tuple[int, int]]) -> GaloisElement:
    """Combine (modulus, residue) pairs into one Galois element via CRT."""
    if not components:
        return GaloisElement(1, 0)
    moduli = [m for m, _ in components]
    for i, m in enumerate(moduli):
        for m2 in moduli[i + 1 :]:
            if gcd(m, m2) != 1:
                raise NonCoprimeModuli(f"moduli {m} and {m2} share a factor")
    total = prod(moduli)
    r = 0
    for m, residue in components:
        if gcd(residue, m) != 1:
            raise NonCoprimeModuli(f"residue {residue} not coprime to modulus {m}")
        rest = total // m
        r = (r + residue * rest * pow(rest, -1, m)) % total
    return GaloisElement(total, r % total if total > 1 else 0)
