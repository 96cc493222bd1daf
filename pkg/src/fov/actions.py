"""The two Galois actions (on classes and on characters) and their comparisons.

For a residue r coprime to the exponent, classes move by the power map
K -> K^r and characters by value twisting, realized as row matching: the
row of chi twisted by r is (chi(K^r))_K and must reappear as a table row.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import gcd

import numpy as np

from .chartable import CharacterTable
from .errors import HypothesesNotMet, RowMatchFailure
from .groups import ClassData, PermGroup
from .invariants import character_fields, class_fields
from .residues import (
    FieldKey,
    GaloisElement,
    crt_assemble,
    field_contains,
    field_key,
    unit_residues,
)

Q8_FIELD = field_key(8, {1})


@dataclass(frozen=True)
class ActionTable:
    modulus: int
    residues: tuple[int, ...]
    class_perms: dict[int, tuple[int, ...]]
    char_perms: dict[int, tuple[int, ...]]

    @property
    def count(self) -> int:
        return len(next(iter(self.class_perms.values())))


def build_actions(T: CharacterTable, C: ClassData) -> ActionTable:
    """Class and character permutations for every residue of the exponent."""
    e = T.modulus
    units = unit_residues(e)
    k = T.count
    ids = T.entry_ids
    row_index = {ids[i].tobytes(): i for i in range(k)}
    class_perms: dict[int, tuple[int, ...]] = {}
    char_perms: dict[int, tuple[int, ...]] = {}
    for r in units:
        perm = C.power_maps[r % e] if e > 1 else tuple(range(k))
        class_perms[r] = perm
        twisted = ids[:, np.array(perm)]
        rows = []
        for i in range(k):
            match = row_index.get(twisted[i].tobytes())
            if match is None:
                raise RowMatchFailure(f"twist by {r} of row {i} is not a table row")
            rows.append(match)
        if sorted(rows) != list(range(k)):
            raise RowMatchFailure(f"twist by {r} does not permute the rows")
        char_perms[r] = tuple(rows)
    return ActionTable(e, units, class_perms, char_perms)


def _orbit_count(perms: list[tuple[int, ...]], k: int) -> int:
    parent = list(range(k))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for perm in perms:
        for a, b in enumerate(perm):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    return len({find(x) for x in range(k)})


@dataclass(frozen=True)
class BrauerReport:
    ok: bool
    fixed_counts: tuple[tuple[int, int, int], ...]  # (residue, classes, chars)
    class_orbits: int
    char_orbits: int

    def __bool__(self) -> bool:
        return self.ok


def brauer_check(A: ActionTable) -> BrauerReport:
    """Fixed-point counts must agree residue by residue, and orbit totals match."""
    rows = []
    ok = True
    for r in A.residues:
        fc = sum(1 for i, x in enumerate(A.class_perms[r]) if i == x)
        fx = sum(1 for i, x in enumerate(A.char_perms[r]) if i == x)
        rows.append((r, fc, fx))
        ok = ok and fc == fx
    k = A.count
    class_orbits = _orbit_count(list(A.class_perms.values()), k)
    char_orbits = _orbit_count(list(A.char_perms.values()), k)
    ok = ok and class_orbits == char_orbits
    return BrauerReport(ok, tuple(rows), class_orbits, char_orbits)


def _orbits_with_stabilizers(
    perms: dict[int, tuple[int, ...]], residues: tuple[int, ...], k: int
) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    seen = [False] * k
    out = []
    for start in range(k):
        if seen[start]:
            continue
        orbit = {start}
        frontier = [start]
        while frontier:
            x = frontier.pop()
            for r in residues:
                y = perms[r][x]
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
        for x in orbit:
            seen[x] = True
        stab = tuple(sorted(r for r in residues if perms[r][start] == start))
        out.append((tuple(sorted(orbit)), stab))
    return out


@dataclass(frozen=True)
class PermutationIsomorphism:
    isomorphic: bool
    pairing: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    mismatch: str | None

    def __bool__(self) -> bool:
        return self.isomorphic


def permutation_isomorphic(A: ActionTable) -> PermutationIsomorphism:
    """Abelian acting group: the two actions are permutation isomorphic iff
    the multisets of point stabilizers coincide; returns an orbit pairing."""
    k = A.count
    cls = _orbits_with_stabilizers(A.class_perms, A.residues, k)
    chs = _orbits_with_stabilizers(A.char_perms, A.residues, k)
    cls_hist = Counter(stab for _, stab in cls)
    chr_hist = Counter(stab for _, stab in chs)
    if cls_hist != chr_hist:
        diff = (cls_hist - chr_hist) + (chr_hist - cls_hist)
        sample = next(iter(diff))
        return PermutationIsomorphism(
            False, (), f"stabilizer multiset mismatch at {sample}"
        )
    by_stab_cls: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for orbit, stab in cls:
        by_stab_cls.setdefault(stab, []).append(orbit)
    by_stab_chr: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for orbit, stab in chs:
        by_stab_chr.setdefault(stab, []).append(orbit)
    pairing = []
    for stab in sorted(by_stab_cls):
        for co, xo in zip(sorted(by_stab_cls[stab]), sorted(by_stab_chr[stab])):
            pairing.append((co, xo))
    return PermutationIsomorphism(True, tuple(pairing), None)


def _multiplicative_order(r: int, n: int) -> int:
    if n == 1:
        return 1
    x, k = r % n, 1
    while x != 1:
        x = (x * r) % n
        k += 1
    return k


def _smallest_generator(subgroup: set[int], modulus: int) -> int:
    target = len(subgroup)
    for r in sorted(subgroup):
        if _multiplicative_order(r, modulus) == target:
            return r
    raise HypothesesNotMet(f"stabilizer mod {modulus} is not cyclic")


def _prime_power_split(n: int) -> list[tuple[int, int]]:
    out = []
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            a = 0
            while m % p == 0:
                m //= p
                a += 1
            out.append((p, a))
        p += 1
    if m > 1:
        out.append((m, 1))
    return out


@dataclass(frozen=True)
class SigmaConstruction:
    sigma: GaloisElement
    witness_prime: int
    tau: int  # residue generating the Galois group over F at the witness prime
    fixed_classes: frozenset[int]
    fixed_chars: frozenset[int]
    expected_classes: frozenset[int]
    expected_chars: frozenset[int]

    @property
    def identity_holds(self) -> bool:
        return (
            self.fixed_classes == self.expected_classes
            and self.fixed_chars == self.expected_chars
        )


def construct_sigma_for_field(
    G: PermGroup,
    C: ClassData,
    T: CharacterTable,
    F: FieldKey,
    cls_fields: tuple[FieldKey, ...] | None = None,
    chr_fields: tuple[FieldKey, ...] | None = None,
) -> SigmaConstruction:
    """Assemble the Galois element that fixes exactly the rational layer plus
    the classes/characters with field F, prime component by prime component.

    At the witness prime of F the component generates the Galois group over
    F; other odd components are full generators; the residue 2 component is
    a generator alongside an even witness, the identity otherwise.
    """
    if F.is_rational:
        raise HypothesesNotMet("field is rational; nothing to construct")
    if G.order % 2:
        raise HypothesesNotMet("group has odd order")
    cls_fields = cls_fields or class_fields(G, C)
    chr_fields = chr_fields or character_fields(T, C)
    if F not in cls_fields:
        raise HypothesesNotMet(f"{F.render()} is not a class field of the group")
    split = _prime_power_split(F.conductor)
    if len(split) != 1 or split[0][1] > 3:
        raise HypothesesNotMet(
            f"no witness prime: conductor {F.conductor} not in {{p, p^2, p^3}}"
        )
    p = split[0][0]

    e = G.exponent
    components: list[tuple[int, int]] = []
    tau = 1
    for q, a in _prime_power_split(e):
        c = min(3, a)
        mq = q**c
        if q == p:
            if F.conductor > mq:
                raise HypothesesNotMet(
                    f"conductor {F.conductor} exceeds the {q}-part {mq} of the exponent"
                )
            stab = {
                r for r in unit_residues(mq) if r % F.conductor in F.subgroup
            }
            tau = _smallest_generator(stab, mq)
            components.append((q**a, tau))
        elif q == 2:
            components.append((q**a, 1))
        else:
            full = set(unit_residues(mq))
            components.append((q**a, _smallest_generator(full, mq)))
    sigma = crt_assemble(components)
    r = sigma.residue % e if e > 1 else 0

    perm = C.power_maps[r] if e > 1 else (0,)
    fixed_classes = frozenset(i for i, x in enumerate(perm) if i == x)
    parr = np.array(perm)
    fixed_rows = (T.entry_ids[:, parr] == T.entry_ids).all(axis=1)
    fixed_chars = frozenset(int(i) for i in np.nonzero(fixed_rows)[0])

    if p == 2:
        base_cls = {i for i, fk in enumerate(cls_fields) if fk.is_rational}
        base_chr = {i for i, fk in enumerate(chr_fields) if fk.is_rational}
    else:
        base_cls = {i for i, fk in enumerate(cls_fields) if field_contains(fk, Q8_FIELD)}
        base_chr = {i for i, fk in enumerate(chr_fields) if field_contains(fk, Q8_FIELD)}
    expected_classes = frozenset(base_cls | {i for i, fk in enumerate(cls_fields) if fk == F})
    expected_chars = frozenset(base_chr | {i for i, fk in enumerate(chr_fields) if fk == F})
    return SigmaConstruction(
        sigma=sigma,
        witness_prime=p,
        tau=tau,
        fixed_classes=fixed_classes,
        fixed_chars=fixed_chars,
        expected_classes=expected_classes,
        expected_chars=expected_chars,
    )
