"""Permutation-group engine for fully enumerated small groups.

Permutations are image tuples on 0-based points; composition is
(p * q)(i) = p[q(i)], i.e. apply q first.  Groups are enumerated completely
(default cap 20000 elements), which keeps centralizers, normalizers and
conjugacy machinery direct and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, lcm

import numpy as np

from .errors import InvalidPermutation, OrderCapExceeded

Perm = tuple[int, ...]

DEFAULT_ORDER_CAP = 20000


def identity_perm(degree: int) -> Perm:
    return tuple(range(degree))


def compose(p: Perm, q: Perm) -> Perm:
    """Apply q, then p."""
    return tuple(p[i] for i in q)


def invert(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, image in enumerate(p):
        out[image] = i
    return tuple(out)


def validate_perm(images, degree: int) -> Perm:
    p = tuple(int(i) for i in images)
    if len(p) != degree or sorted(p) != list(range(degree)):
        raise InvalidPermutation(f"images {list(images)} are not a bijection on 0..{degree - 1}")
    return p


def perm_order(p: Perm) -> int:
    """Order = lcm of cycle lengths."""
    seen = [False] * len(p)
    result = 1
    for start in range(len(p)):
        if seen[start]:
            continue
        length, i = 0, start
        while not seen[i]:
            seen[i] = True
            i = p[i]
            length += 1
        result = lcm(result, length)
    return result


def cycle_notation(p: Perm) -> str:
    """Cycle form with fixed points omitted; identity renders as ()."""
    seen = [False] * len(p)
    cycles: list[str] = []
    for start in range(len(p)):
        if seen[start] or p[start] == start:
            seen[start] = True
            continue
        cyc, i = [], start
        while not seen[i]:
            seen[i] = True
            cyc.append(i)
            i = p[i]
        cycles.append("(" + " ".join(str(x) for x in cyc) + ")")
    return "".join(cycles) if cycles else "()"


@dataclass(frozen=True)
class PermGroup:
    degree: int
    generators: tuple[Perm, ...]
    elements: tuple[Perm, ...]
    order: int
    exponent: int
    index: dict[Perm, int] = field(compare=False, repr=False)

    def element_index(self, p: Perm) -> int:
        return self.index[p]

    def __contains__(self, p: Perm) -> bool:
        return p in self.index


def group_from_generators(degree: int, gens, cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    """Enumerate the closure of the generators under composition."""
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    generators = tuple(validate_perm(g, degree) for g in gens)
    identity = identity_perm(degree)
    elements: list[Perm] = [identity]
    index: dict[Perm, int] = {identity: 0}
    frontier = [identity]
    while frontier:
        nxt: list[Perm] = []
        for x in frontier:
            for g in generators:
                y = compose(x, g)
                if y not in index:
                    index[y] = len(elements)
                    elements.append(y)
                    if len(elements) > cap:
                        raise OrderCapExceeded(
                            f"enumeration passed cap {cap} (degree {degree})"
                        )
                    nxt.append(y)
        frontier = nxt
    exponent = 1
    for x in elements:
        exponent = lcm(exponent, perm_order(x))
    return PermGroup(degree, generators, tuple(elements), len(elements), exponent, index)


@dataclass(frozen=True)
class ConjugacyClass:
    representative: Perm
    members: frozenset[Perm]
    size: int
    element_order: int


@dataclass(frozen=True)
class ClassData:
    classes: tuple[ConjugacyClass, ...]
    class_of: dict[Perm, int] = field(compare=False, repr=False)
    power_maps: tuple[tuple[int, ...], ...] = field(repr=False)
    exponent: int

    @property
    def count(self) -> int:
        return len(self.classes)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(c.size for c in self.classes)

    @property
    def element_orders(self) -> tuple[int, ...]:
        return tuple(c.element_order for c in self.classes)

    def inverse_class(self, k: int) -> int:
        return self.power_maps[self.exponent - 1][k] if self.exponent > 1 else k

    def power_class(self, k: int, j: int) -> int:
        return self.power_maps[j % self.exponent][k]


def conjugacy_classes(G: PermGroup) -> ClassData:
    """Partition the group into conjugation orbits, with all power maps.

    Classes are ordered by (element order, class size, minimal member in
    enumeration order); the representative is that minimal member.
    """
    gen_invs = [(g, invert(g)) for g in G.generators]
    assigned = [False] * G.order
    raw: list[list[int]] = []
    for start in range(G.order):
        if assigned[start]:
            continue
        orbit = [start]
        assigned[start] = True
        queue = [G.elements[start]]
        while queue:
            x = queue.pop()
            for g, gi in gen_invs:
                y = compose(g, compose(x, gi))
                yi = G.index[y]
                if not assigned[yi]:
                    assigned[yi] = True
                    orbit.append(yi)
                    queue.append(y)
        raw.append(sorted(orbit))
    raw.sort(key=lambda orbit: (perm_order(G.elements[orbit[0]]), len(orbit), orbit[0]))
    classes = tuple(
        ConjugacyClass(
            representative=G.elements[orbit[0]],
            members=frozenset(G.elements[i] for i in orbit),
            size=len(orbit),
            element_order=perm_order(G.elements[orbit[0]]),
        )
        for orbit in raw
    )
    class_of: dict[Perm, int] = {}
    for ci, orbit in enumerate(raw):
        for i in orbit:
            class_of[G.elements[i]] = ci
    e = G.exponent
    maps = [[0] * len(classes) for _ in range(e)]
    for ci, cls in enumerate(classes):
        x = identity_perm(G.degree)
        for j in range(e):
            maps[j][ci] = class_of[x]
            x = compose(x, cls.representative)
    return ClassData(
        classes=classes,
        class_of=class_of,
        power_maps=tuple(tuple(row) for row in maps),
        exponent=e,
    )


def element_power(p: Perm, k: int) -> Perm:
    out = identity_perm(len(p))
    base = p
    k %= max(perm_order(p), 1)
    while k:
        if k & 1:
            out = compose(out, base)
        base = compose(base, base)
        k >>= 1
    return out


def rationality_stabilizer(G: PermGroup, C: ClassData, k: int) -> frozenset[int]:
    """Residues r with gcd(r, |g|) = 1 and g^r conjugate to g, for g in class k.

    This is the image of N(<g>)/C(g) inside Aut(<g>) = (Z/|g|Z)^x; it is a
    subgroup containing 1 ({0} for the identity class).
    """
    cls = C.classes[k]
    m = cls.element_order
    if m == 1:
        return frozenset({0})
    result = set()
    x = identity_perm(G.degree)
    for r in range(m):
        if gcd(r, m) == 1 and C.class_of[x] == k:
            result.add(r)
        x = compose(x, cls.representative)
    return frozenset(result)


def _element_array(G: PermGroup) -> tuple[np.ndarray, np.ndarray]:
    E = np.array(G.elements, dtype=np.int32)
    Inv = np.empty_like(E)
    np.put_along_axis(Inv, E, np.broadcast_to(np.arange(E.shape[1], dtype=np.int32), E.shape), axis=1)
    return E, Inv


def bg_order(G: PermGroup, g: Perm) -> int:
    """|N_G(<g>)| / |C_G(g)| by direct membership tests."""
    cyclic = {identity_perm(G.degree)}
    x = g
    while x not in cyclic:
        cyclic.add(x)
        x = compose(x, g)
    cyclic_bytes = {np.array(c, dtype=np.int32).tobytes() for c in cyclic}
    E, Inv = _element_array(G)
    g_arr = np.array(g, dtype=np.int32)
    # conj[r] = x_r o g o x_r^{-1}, all rows at once
    t = g_arr[Inv]
    conj = np.take_along_axis(E, t, axis=1)
    normalizer = sum(1 for r in range(E.shape[0]) if conj[r].tobytes() in cyclic_bytes)
    centralizer = int((conj == g_arr[None, :]).all(axis=1).sum())
    return normalizer // centralizer


def _closure_of(G: PermGroup, seed: set[Perm]) -> set[Perm]:
    identity = identity_perm(G.degree)
    sub = {identity}
    frontier = list(seed)
    while frontier:
        x = frontier.pop()
        if x in sub:
            continue
        new = {compose(x, h) for h in sub} | {x}
        frontier.extend(new - sub)
        sub |= new
    return sub


def _normal_closure(G: PermGroup, seeds: set[Perm], conj_gens: list[Perm]) -> set[Perm]:
    # Smallest subgroup containing seeds and closed under conjugation by conj_gens.
    conj = [(g, invert(g)) for g in conj_gens]
    sub = _closure_of(G, seeds)
    while True:
        extra = set()
        for x in sub:
            for g, gi in conj:
                y = compose(g, compose(x, gi))
                if y not in sub:
                    extra.add(y)
        if not extra:
            return sub
        sub = _closure_of(G, sub | extra)


def is_solvable(G: PermGroup) -> bool:
    """True iff the derived series reaches the trivial group."""
    gens: list[Perm] = sorted(set(G.generators)) or [identity_perm(G.degree)]
    stage_order = G.order
    while True:
        if all(compose(a, b) == compose(b, a) for a in gens for b in gens):
            return True  # abelian stage, the series ends at 1
        commutators = {
            compose(invert(a), compose(invert(b), compose(a, b)))
            for a in gens
            for b in gens
        }
        derived = _normal_closure(G, commutators, gens)
        if len(derived) == stage_order:
            return False  # perfect stage
        stage_order = len(derived)
        gens = sorted(derived)


def class_mult_coefficients(C: ClassData, G: PermGroup) -> np.ndarray:
    """Tensor a[i][j][k] = #{(x, y) in K_i x K_j : x*y = rep(K_k)}."""
    k = C.count
    a = np.zeros((k, k, k), dtype=np.int64)
    E, Inv = _element_array(G)
    elem_index = {E[r].tobytes(): r for r in range(E.shape[0])}
    cls_arr = np.array([C.class_of[x] for x in G.elements], dtype=np.int64)
    for kk, cls in enumerate(C.classes):
        z = np.array(cls.representative, dtype=np.int32)
        # y = x^{-1} z rowwise: y(i) = x^{-1}(z(i))
        y = Inv[:, z]
        j_cls = cls_arr[[elem_index[y[r].tobytes()] for r in range(E.shape[0])]]
        np.add.at(a, (cls_arr, j_cls, kk), 1)
    return a
