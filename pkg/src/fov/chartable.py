"""Exact character tables via mod-p eigenspace splitting and Fourier lifting.

The class-sum matrices act on the centre of the group algebra over F_p for a
prime p = 1 (mod exponent) with p^2 > 4|G|.  Their simultaneous eigenvectors
give the central characters mod p; root-of-unity multiplicities of each value
are recovered by discrete Fourier inversion over F_p and lifted exactly (the
lift is unique because multiplicities are bounded by the degree < p/2).
Entries are stored as integer coordinate vectors over the power basis of
Q(zeta_e), the canonical form shared with the Cyclotomic value type.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

import numpy as np

from . import modmat
from .cyclotomic import Cyclotomic, euler_phi, power_basis_table
from .errors import EigenspaceSplitFailure, LiftOutOfRange
from .groups import ClassData, PermGroup, class_mult_coefficients, cycle_notation
from .residues import unit_residues


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def dixon_prime(e: int, order: int, after: int = 0) -> int:
    """Smallest prime p = 1 (mod e) with p > 2*sqrt(order) (and p > after)."""
    p = max(2, after + 1)
    while True:
        if (p - 1) % e == 0 and p * p > 4 * order and is_prime(p):
            return p
        p += 1


@lru_cache(maxsize=None)
def _factor_set(n: int) -> tuple[int, ...]:
    out = []
    m, f = n, 2
    while f * f <= m:
        if m % f == 0:
            out.append(f)
            while m % f == 0:
                m //= f
        f += 1
    if m > 1:
        out.append(m)
    return tuple(out)


def primitive_root(p: int) -> int:
    """Smallest generator of (Z/pZ)^x for prime p."""
    if p == 2:
        return 1
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in _factor_set(p - 1)):
            return g
    raise ArithmeticError(f"no primitive root mod {p}")


def root_of_order(e: int, p: int) -> int:
    """A deterministic element of exact multiplicative order e mod p."""
    if e == 1:
        return 1
    z = pow(primitive_root(p), (p - 1) // e, p)
    assert pow(z, e, p) == 1
    return z


@lru_cache(maxsize=32)
def reduction_matrix(e: int) -> np.ndarray:
    """Row j = coordinates of zeta_e^j over the power basis (int64, e x phi)."""
    table = power_basis_table(e)
    M = np.array(table, dtype=np.int64)
    M.flags.writeable = False
    return M


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """Exact table of irreducible characters, rows sorted canonically."""

    modulus: int  # exponent of the group
    degrees: tuple[int, ...]
    coords: np.ndarray  # (k, k, phi(e)) int64 power-basis coordinates
    prime: int  # modular prime the table was computed with
    entry_ids: np.ndarray  # (k, k) int32; equal ids <=> equal values

    @property
    def count(self) -> int:
        return len(self.degrees)

    def entry(self, i: int, k: int) -> Cyclotomic:
        vec = self.coords[i, k]
        return Cyclotomic(self.modulus, tuple(Fraction(int(c)) for c in vec))

    def render_entry(self, i: int, k: int) -> str:
        return _render_int_coords(self.modulus, self.coords[i, k])

    def row_render(self, i: int) -> tuple[str, ...]:
        return tuple(_render_int_coords(self.modulus, self.coords[i, k])
                     for k in range(self.count))


def _render_int_coords(n: int, vec) -> str:
    # Same format as Cyclotomic.render, specialized to integer coordinates.
    nonzero = [(k, int(c)) for k, c in enumerate(vec) if c]
    if not nonzero or all(k == 0 for k, _ in nonzero):
        return str(int(vec[0]))
    parts: list[str] = []
    for k, c in nonzero:
        if k == 0:
            parts.append(str(c))
            continue
        power = f"E({n})" if k == 1 else f"E({n})^{k}"
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


def _split_to_lines(amat: np.ndarray, p: int) -> np.ndarray:
    """Common eigenvector matrix (rows) of the class-sum matrices mod p."""
    k = amat.shape[0]
    spaces: list[np.ndarray] = [np.eye(k, dtype=np.int64)]
    for j in range(1, k):
        if all(B.shape[1] == 1 for B in spaces):
            break
        M = amat[j] % p
        refined: list[np.ndarray] = []
        for B in spaces:
            d = B.shape[1]
            if d == 1:
                refined.append(B)
                continue
            N = modmat.solve_matrix(B, (M @ B) % p, p)
            roots = modmat.poly_roots(modmat.charpoly(N, p), p)
            taken = 0
            for lam in roots:
                shifted = (N - lam * np.eye(d, dtype=np.int64)) % p
                ns = modmat.nullspace(shifted, p)
                if ns.shape[1] == 0:
                    continue
                refined.append((B @ ns) % p)
                taken += ns.shape[1]
            if taken != d:
                raise EigenspaceSplitFailure(
                    f"matrix {j}: eigenspaces cover {taken} of {d} dims mod {p}"
                )
        spaces = refined
    if any(B.shape[1] != 1 for B in spaces):
        raise EigenspaceSplitFailure(f"common eigenspaces not all 1-dim mod {p}")
    vectors = np.concatenate([B for B in spaces], axis=1).T % p
    return vectors


def _dixon_at_prime(G: PermGroup, C: ClassData, amat: np.ndarray, p: int) -> CharacterTable:
    k = C.count
    e = G.exponent
    sizes = np.array(C.sizes, dtype=np.int64)
    inv_perm = np.array([C.inverse_class(j) for j in range(k)], dtype=np.int64)

    omega = _split_to_lines(amat, p)
    # normalize at the identity class (index 0): central character is 1 there
    if np.any(omega[:, 0] % p == 0):
        raise EigenspaceSplitFailure("eigenvector vanishes at the identity class")
    scale = np.array([modmat.mod_inv(int(v), p) for v in omega[:, 0]], dtype=np.int64)
    omega = (omega * scale[:, None]) % p

    inv_sizes = np.array([modmat.mod_inv(int(s), p) for s in sizes], dtype=np.int64)
    s_vec = (omega * omega[:, inv_perm] * inv_sizes[None, :]).sum(axis=1) % p
    degrees = []
    bound = isqrt(G.order)
    for s in s_vec:
        if s % p == 0:
            raise EigenspaceSplitFailure("degenerate norm sum in degree recovery")
        d2 = (G.order * modmat.mod_inv(int(s), p)) % p
        d = next((x for x in range(1, bound + 1) if (x * x) % p == d2), None)
        if d is None:
            raise LiftOutOfRange(f"no degree in 1..{bound} squares to {d2} mod {p}")
        degrees.append(d)
    deg_arr = np.array(degrees, dtype=np.int64)
    chi_p = (omega * deg_arr[:, None] * inv_sizes[None, :]) % p

    # Fourier inversion: recover multiplicities of zeta_m^t in each entry
    z = root_of_order(e, p)
    zpow = np.array([pow(z, t, p) for t in range(e)], dtype=np.int64)
    pm = np.array(C.power_maps, dtype=np.int64)  # (e, k)
    orders = np.array(C.element_orders, dtype=np.int64)
    expo = np.zeros((k, k, e), dtype=np.int64)
    for m in sorted(set(int(x) for x in orders)):
        cols = np.nonzero(orders == m)[0]
        zm_pows = zpow[(np.arange(m) * (e // m)) % e]
        exps = (-np.outer(np.arange(m), np.arange(m))) % m
        Vm = zm_pows[exps]  # Vm[t, s] = zeta_m^(-st) mod p
        vals = chi_p[:, pm[np.ix_(range(m), cols)]]  # (k, m, #cols)
        inv_m = modmat.mod_inv(m, p)
        mult = np.einsum("isc,ts->ict", vals, Vm) % p
        mult = (mult * inv_m) % p
        if np.any(mult > deg_arr[:, None, None]):
            raise LiftOutOfRange(f"multiplicity above degree for order {m} mod {p}")
        if np.any(mult.sum(axis=2) != deg_arr[:, None]):
            raise LiftOutOfRange(f"multiplicities of order {m} do not sum to degree")
        slots = (np.arange(m) * (e // m))
        expo[:, cols[:, None], slots[None, :]] = mult
    phi = euler_phi(e)
    coords = (expo.reshape(k * k, e) @ reduction_matrix(e)).reshape(k, k, phi)

    if not np.array_equal(coords[:, 0, 0], deg_arr) or np.any(coords[:, 0, 1:]):
        raise LiftOutOfRange("identity column disagrees with recovered degrees")

    order_idx = sorted(
        range(k),
        key=lambda i: (degrees[i], tuple(_render_int_coords(e, coords[i, c]) for c in range(k))),
    )
    coords = coords[order_idx].copy()
    coords.flags.writeable = False
    _, inverse = np.unique(coords.reshape(k * k, phi), axis=0, return_inverse=True)
    entry_ids = inverse.reshape(k, k).astype(np.int32)
    entry_ids.flags.writeable = False
    return CharacterTable(
        modulus=e,
        degrees=tuple(degrees[i] for i in order_idx),
        coords=coords,
        prime=p,
        entry_ids=entry_ids,
    )


def character_table(G: PermGroup, C: ClassData, amat: np.ndarray | None = None) -> CharacterTable:
    """Compute Irr(G) exactly; retries with the next admissible prime on
    eigenspace degeneracy."""
    if amat is None:
        amat = class_mult_coefficients(C, G)
    p = 0
    for _ in range(16):
        p = dixon_prime(G.exponent, G.order, after=p)
        try:
            return _dixon_at_prime(G, C, amat, p)
        except EigenspaceSplitFailure:
            continue
    raise EigenspaceSplitFailure(f"no admissible prime split the algebra (last {p})")


def dump_table(G: PermGroup, C: ClassData, T: CharacterTable) -> str:
    """Stable text dump: header, one class line each, one row per character."""
    lines = [f"order={G.order} exponent={G.exponent} classes={C.count}"]
    for idx, cls in enumerate(C.classes):
        rep = cycle_notation(cls.representative)
        lines.append(f"class {idx}: rep={rep} size={cls.size} order={cls.element_order}")
    for i in range(T.count):
        lines.append(f"chi {i}: " + " ".join(T.row_render(i)))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class OrthogonalityReport:
    ok: bool
    violations: tuple[str, ...]
    modulus: int  # verification prime (coordinates are certified below it)
    exhaustive: bool

    def __bool__(self) -> bool:
        return self.ok


def verify_orthogonality(T: CharacterTable, C: ClassData, exhaustive: bool = False) -> OrthogonalityReport:
    """Check both orthogonality relations exactly.

    Products are verified through evaluations at a primitive root of unity
    modulo a prime q exceeding twice any possible power-basis coordinate of
    the defect; together with Galois consistency of the evaluations this
    pins every defect coordinate to zero, so the check is exact, not
    probabilistic.  `exhaustive` additionally redoes both relations with
    rational cyclotomic arithmetic (quadratic cost, for small tables).
    """
    violations: list[str] = []
    e = T.modulus
    k = T.count
    sizes = np.array(C.sizes, dtype=np.int64)
    order = int(sizes.sum())
    inv_perm = np.array([C.inverse_class(j) for j in range(k)], dtype=np.int64)
    units = unit_residues(e)
    pm = np.array(C.power_maps, dtype=np.int64)

    if sum(d * d for d in T.degrees) != order:
        violations.append(f"degree sum: sum of squares != {order}")
    for d in T.degrees:
        if d < 1 or order % d:
            violations.append(f"degree {d} does not divide group order {order}")

    # class sizes and element orders are Galois-invariant; needed for exactness
    orders_arr = np.array(C.element_orders, dtype=np.int64)
    for w in units:
        perm = pm[w % e] if e > 1 else np.zeros(k, dtype=np.int64)
        if not np.array_equal(sizes[perm], sizes) or not np.array_equal(
            orders_arr[perm], orders_arr
        ):
            violations.append(f"class data not invariant under power map {w}")

    coeff_cap = int(np.abs(reduction_matrix(e)).max())
    n1 = int(np.abs(T.coords).sum(axis=2).max()) or 1
    bound = 2 * (coeff_cap * order * n1 * n1 + order) + 1
    q = dixon_prime(e, 0, after=max(bound, 2 * isqrt(order) + 1))
    z = root_of_order(e, q)
    zpow = np.array([pow(z, t, q) for t in range(e)], dtype=np.int64)
    phi_idx = np.arange(euler_phi(e))

    F1 = (T.coords @ zpow[phi_idx]) % q
    for w in units:
        if w in (1, 0) or e == 1:
            continue
        Fw = (T.coords @ zpow[(phi_idx * w) % e]) % q
        if not np.array_equal(Fw, F1[:, pm[w]]):
            bad = np.argwhere(Fw != F1[:, pm[w]])[0]
            violations.append(
                f"galois consistency: entry ({bad[0]},{bad[1]}) twisted by {w}"
            )
            break

    rowprod = ((F1 * sizes[None, :]) % q) @ F1[:, inv_perm].T % q
    expected_row = (np.eye(k, dtype=np.int64) * (order % q)) % q
    if not np.array_equal(rowprod % q, expected_row):
        for i, j in np.argwhere(rowprod % q != expected_row):
            violations.append(f"row orthogonality: rows {i},{j}")
            break
    colprod = F1.T @ F1[:, inv_perm] % q
    expected_col = np.diag((order // sizes) % q)
    if not np.array_equal(colprod % q, expected_col):
        for a, b in np.argwhere(colprod % q != expected_col):
            violations.append(f"column orthogonality: classes {a},{b}")
            break

    if exhaustive and not violations:
        values = [[T.entry(i, c) for c in range(k)] for i in range(k)]
        for i in range(k):
            for j in range(k):
                acc = Cyclotomic.from_rational(0, e)
                for c in range(k):
                    acc = acc + values[i][c] * values[j][C.inverse_class(c)] * int(sizes[c])
                want = order if i == j else 0
                if acc != want:
                    violations.append(f"exhaustive row orthogonality: rows {i},{j}")
        for a in range(k):
            for b in range(k):
                acc = Cyclotomic.from_rational(0, e)
                for i in range(k):
                    acc = acc + values[i][a] * values[i][C.inverse_class(b)]
                want = order // int(sizes[a]) if a == b else 0
                if acc != want:
                    violations.append(f"exhaustive column orthogonality: classes {a},{b}")

    return OrthogonalityReport(
        ok=not violations,
        violations=tuple(violations),
        modulus=q,
        exhaustive=exhaustive,
    )
