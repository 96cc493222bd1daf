"""Fields of values of classes and characters, and the invariants built on them.

Class fields come from two independent routes that the suites cross-check:
from conjugacy data (the rationality stabilizer inside Aut(<g>)) and from
character values (the Galois stabilizer of a table column).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .chartable import CharacterTable, reduction_matrix
from .cyclotomic import euler_phi
from .groups import ClassData, PermGroup, rationality_stabilizer
from .residues import (
    RATIONAL_FIELD,
    FieldKey,
    field_key,
    field_signature,
    unit_residues,
)


def class_field(
    G: PermGroup, C: ClassData, k: int, stabilizer: frozenset[int] | None = None
) -> FieldKey:
    """Field of values of class k, as the fixed field of its stabilizer in
    (Z/|g|Z)^x (no character table needed)."""
    m = C.classes[k].element_order
    if stabilizer is None:
        stabilizer = rationality_stabilizer(G, C, k)
    return field_key(m, stabilizer)


def class_fields(
    G: PermGroup, C: ClassData, stabs: tuple[frozenset[int], ...] | None = None
) -> tuple[FieldKey, ...]:
    return tuple(
        class_field(G, C, k, stabs[k] if stabs else None) for k in range(C.count)
    )


@lru_cache(maxsize=16)
def _galois_coordinate_maps(e: int) -> np.ndarray:
    """Stack of phi x phi matrices: row a of map u is coords of zeta^(a*r_u)."""
    R = reduction_matrix(e)
    phi = euler_phi(e)
    units = unit_residues(e)
    maps = np.empty((len(units), phi, phi), dtype=np.int64)
    for u, r in enumerate(units):
        maps[u] = R[(np.arange(phi) * r) % e]
    maps.flags.writeable = False
    return maps


def _column_stabilizers(T: CharacterTable, C: ClassData) -> list[frozenset[int]]:
    # Galois stabilizer of each table column, computed from the values alone.
    e = T.modulus
    units = unit_residues(e)
    maps = _galois_coordinate_maps(e)
    k = T.count
    cache: dict[int, np.ndarray] = {}
    out: list[frozenset[int]] = []
    for c in range(k):
        mask = np.ones(len(units), dtype=bool)
        for i in range(k):
            vid = int(T.entry_ids[i, c])
            fixed = cache.get(vid)
            if fixed is None:
                vec = T.coords[i, c]
                if not vec[1:].any():
                    fixed = np.ones(len(units), dtype=bool)
                else:
                    images = np.einsum("a,uab->ub", vec, maps)
                    fixed = (images == vec[None, :]).all(axis=1)
                cache[vid] = fixed
            mask &= fixed
            if mask.sum() == 1:
                break
        out.append(frozenset(int(units[u]) for u in np.nonzero(mask)[0]))
    return out


def class_field_from_table(T: CharacterTable, C: ClassData, k: int) -> FieldKey:
    """Field generated by the character values on class k (table route)."""
    return class_fields_from_table(T, C)[k]


def class_fields_from_table(T: CharacterTable, C: ClassData) -> tuple[FieldKey, ...]:
    return tuple(field_key(T.modulus, stab) for stab in _column_stabilizers(T, C))


def _row_stabilizers(T: CharacterTable, C: ClassData) -> list[frozenset[int]]:
    e = T.modulus
    units = unit_residues(e)
    pm = np.array(C.power_maps, dtype=np.int64)
    k = T.count
    stabs: list[set[int]] = [set() for _ in range(k)]
    for r in units:
        perm = pm[r % e] if e > 1 else np.arange(k)
        fixed = (T.entry_ids[:, perm] == T.entry_ids).all(axis=1)
        for i in np.nonzero(fixed)[0]:
            stabs[int(i)].add(int(r))
    return [frozenset(s) for s in stabs]


def character_field(T: CharacterTable, C: ClassData, i: int) -> FieldKey:
    """Field of values of character row i (fixed field of its row stabilizer)."""
    return character_fields(T, C)[i]


def character_fields(T: CharacterTable, C: ClassData) -> tuple[FieldKey, ...]:
    return tuple(field_key(T.modulus, stab) for stab in _row_stabilizers(T, C))


@dataclass(frozen=True)
class RationalityFlags:
    rational: bool
    semi_rational: bool
    inverse_semi_rational: bool
    quadratic_rational: bool
    k_rational_degree_max: int

    def summary(self) -> str:
        if self.rational:
            return "rational"
        if self.inverse_semi_rational:
            return "inverse_semi_rational"
        parts = []
        if self.semi_rational:
            parts.append("semi_rational")
        if self.quadratic_rational:
            parts.append("quadratic_rational")
        return ",".join(parts) if parts else f"deg_max={self.k_rational_degree_max}"


def _is_inverse_semi_rational_class(
    G: PermGroup, C: ClassData, k: int, stab: frozenset[int] | None = None
) -> bool:
    m = C.classes[k].element_order
    if stab is None:
        stab = rationality_stabilizer(G, C, k)
    closed = set(stab) | {(-r) % m for r in stab}
    return closed == set(unit_residues(m)) or m == 1


def classify_rationality(
    G: PermGroup,
    C: ClassData,
    T: CharacterTable,
    cls_fields: tuple[FieldKey, ...] | None = None,
    chr_fields: tuple[FieldKey, ...] | None = None,
    stabs: tuple[frozenset[int], ...] | None = None,
) -> RationalityFlags:
    """Group-level rationality flags from class and character field degrees."""
    cls_fields = cls_fields or class_fields(G, C, stabs)
    chr_fields = chr_fields or character_fields(T, C)
    degrees = [f.degree for f in cls_fields]
    return RationalityFlags(
        rational=all(d == 1 for d in degrees),
        semi_rational=all(d <= 2 for d in degrees),
        inverse_semi_rational=all(
            _is_inverse_semi_rational_class(G, C, k, stabs[k] if stabs else None)
            for k in range(C.count)
        ),
        quadratic_rational=all(f.degree <= 2 for f in chr_fields),
        k_rational_degree_max=max(degrees),
    )


def _prime_factors(n: int) -> tuple[int, ...]:
    out = []
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return tuple(out)


@dataclass(frozen=True)
class InvariantProfile:
    order: int
    h: int
    f: int
    cl_Q: int
    irr_Q: int
    cl_R: int
    irr_R: int
    k_p: dict[int, int]
    n_inv: int
    q_of_G: FieldKey
    per_field_class_multiplicity: dict[str, int]
    per_field_char_multiplicity: dict[str, int]
    flags: RationalityFlags

    def line(self, name: str) -> str:
        return (
            f"{name} {self.order} h={self.h} f={self.f} "
            f"clQ={self.cl_Q} irrQ={self.irr_Q} {self.flags.summary()}"
        )

    def to_payload(self) -> dict:
        return {
            "order": self.order,
            "h": self.h,
            "f": self.f,
            "cl_Q": self.cl_Q,
            "irr_Q": self.irr_Q,
            "cl_R": self.cl_R,
            "irr_R": self.irr_R,
            "k_p": {str(p): c for p, c in sorted(self.k_p.items())},
            "n": self.n_inv,
            "field": self.q_of_G.render(),
            "class_fields": dict(sorted(self.per_field_class_multiplicity.items())),
            "char_fields": dict(sorted(self.per_field_char_multiplicity.items())),
            "flags": {
                "rational": self.flags.rational,
                "semi_rational": self.flags.semi_rational,
                "inverse_semi_rational": self.flags.inverse_semi_rational,
                "quadratic_rational": self.flags.quadratic_rational,
                "degree_max": self.flags.k_rational_degree_max,
            },
        }


def invariant_profile(
    G: PermGroup,
    C: ClassData,
    T: CharacterTable,
    cls_fields: tuple[FieldKey, ...] | None = None,
    chr_fields: tuple[FieldKey, ...] | None = None,
    stabs: tuple[frozenset[int], ...] | None = None,
) -> InvariantProfile:
    """All multiplicity invariants of the class/character fields."""
    cls_fields = cls_fields or class_fields(G, C, stabs)
    chr_fields = chr_fields or character_fields(T, C)
    per_class: dict[str, int] = {}
    for fkey in cls_fields:
        per_class[fkey.render()] = per_class.get(fkey.render(), 0) + 1
    per_char: dict[str, int] = {}
    for fkey in chr_fields:
        per_char[fkey.render()] = per_char.get(fkey.render(), 0) + 1

    def real_count(fields: tuple[FieldKey, ...]) -> int:
        return sum(1 for f in fields if field_signature(f).kind != "IMAGINARY")

    k_p: dict[int, int] = {}
    for p in _prime_factors(G.order):
        k_p[p] = sum(
            1
            for cls in C.classes
            if cls.element_order == 1 or set(_prime_factors(cls.element_order)) == {p}
        )

    e = G.exponent
    row_stabs = _row_stabilizers(T, C)
    common = set(unit_residues(e))
    for stab in row_stabs:
        common &= stab
    q_of_g = field_key(e, common)

    flags = classify_rationality(G, C, T, cls_fields, chr_fields, stabs)
    return InvariantProfile(
        order=G.order,
        h=max(per_class.values()),
        f=max(per_char.values()),
        cl_Q=per_class.get("Q", 0),
        irr_Q=per_char.get("Q", 0),
        cl_R=real_count(cls_fields),
        irr_R=real_count(chr_fields),
        k_p=k_p,
        n_inv=max(k_p.values(), default=0),
        q_of_G=q_of_g,
        per_field_class_multiplicity=per_class,
        per_field_char_multiplicity=per_char,
        flags=flags,
    )


def rational_element_orders(G: PermGroup, C: ClassData) -> frozenset[int]:
    """Element orders appearing on classes whose field of values is Q."""
    return frozenset(
        C.classes[k].element_order
        for k in range(C.count)
        if class_field(G, C, k) == RATIONAL_FIELD
    )


def class_field_prime_bound(
    G: PermGroup, C: ClassData, cls_fields: tuple[FieldKey, ...] | None = None
) -> tuple[int | None, ...]:
    """Per class, the smallest prime p with Q(K) inside Q(zeta_{p^3}), or None."""
    cls_fields = cls_fields or class_fields(G, C)
    out: list[int | None] = []
    for fkey in cls_fields:
        c = fkey.conductor
        if c == 1:
            out.append(2)
            continue
        primes = _prime_factors(c)
        if len(primes) == 1 and c in (primes[0], primes[0] ** 2, primes[0] ** 3):
            out.append(primes[0])
        else:
            out.append(None)
    return tuple(out)
