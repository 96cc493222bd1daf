"""Group corpus: built-in family constructors, file ingestion, verdict cache.

Group files are single JSON documents with fields name, source, degree,
generators (0-based image arrays) and an optional expected block whose
values are checked, never trusted.  Verdicts persist as line-delimited JSON
keyed by (spec content hash, suite id).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .analysis import GroupAnalysis
from .errors import HashMismatch, ParseError
from .groups import DEFAULT_ORDER_CAP, Perm, compose, identity_perm

EXPECTED_KEYS = ("order", "h", "f", "cl_Q", "irr_Q")


@dataclass(frozen=True)
class GroupSpec:
    name: str
    source: str  # BUILTIN | FILE
    degree: int
    generators: tuple[Perm, ...]
    expected: tuple[tuple[str, int], ...] | None = None

    def expected_map(self) -> dict[str, int]:
        return dict(self.expected) if self.expected else {}

    def to_payload(self) -> dict:
        payload: dict = {
            "name": self.name,
            "source": self.source,
            "degree": self.degree,
            "generators": [list(g) for g in self.generators],
        }
        if self.expected:
            payload["expected"] = dict(self.expected)
        return payload

    def content_hash(self) -> str:
        canon = json.dumps(self.to_payload(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()

    def analysis(self, cap: int = DEFAULT_ORDER_CAP) -> GroupAnalysis:
        return GroupAnalysis.from_generators(self.name, self.degree, self.generators, cap=cap)


def _parse_payload(payload: dict, origin: str) -> GroupSpec:
    if not isinstance(payload, dict):
        raise ParseError(f"{origin}: top level must be a JSON object")
    for field_name, kind in (("name", str), ("source", str), ("degree", int)):
        if field_name not in payload:
            raise ParseError(f"{origin}: missing field '{field_name}'")
        if not isinstance(payload[field_name], kind) or isinstance(payload[field_name], bool):
            raise ParseError(f"{origin}: field '{field_name}' must be {kind.__name__}")
    degree = payload["degree"]
    if degree < 1:
        raise ParseError(f"{origin}: degree must be >= 1, got {degree}")
    gens_raw = payload.get("generators")
    if not isinstance(gens_raw, list):
        raise ParseError(f"{origin}: field 'generators' must be a list of image arrays")
    generators: list[Perm] = []
    for gi, images in enumerate(gens_raw):
        if not isinstance(images, list) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in images
        ):
            raise ParseError(f"{origin}: generator {gi} must be an integer array")
        if len(images) != degree or sorted(images) != list(range(degree)):
            raise ParseError(
                f"{origin}: generator {gi} is not a bijection on 0..{degree - 1}"
            )
        generators.append(tuple(images))
    expected = None
    if "expected" in payload:
        block = payload["expected"]
        if not isinstance(block, dict):
            raise ParseError(f"{origin}: 'expected' must be an object")
        for key, value in block.items():
            if key not in EXPECTED_KEYS:
                raise ParseError(f"{origin}: unknown expected key '{key}'")
            if not isinstance(value, int) or isinstance(value, bool):
                raise ParseError(f"{origin}: expected '{key}' must be an integer")
        expected = tuple(sorted((k, int(v)) for k, v in block.items()))
    return GroupSpec(
        name=payload["name"],
        source=payload["source"],
        degree=degree,
        generators=tuple(generators),
        expected=expected,
    )


def ingest_group_file(path: str | Path) -> GroupSpec:
    """Parse one group file; raises ParseError with diagnostics."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ParseError(f"{p}: cannot read file ({exc})") from exc
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{p}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})") from exc
    return _parse_payload(payload, str(p))


def ingest_group_dir(path: str | Path) -> list[GroupSpec]:
    specs = [ingest_group_file(f) for f in sorted(Path(path).glob("*.json"))]
    names = [s.name for s in specs]
    dupes = {n for n in names if names.count(n) > 1}
    if dupes:
        raise ParseError(f"{path}: duplicate group names {sorted(dupes)}")
    return specs


# -- built-in constructors ---------------------------------------------------


def _cyclic_gens(n: int) -> list[Perm]:
    if n == 1:
        return []
    return [tuple((i + 1) % n for i in range(n))]


def _shift(perm: Perm, offset: int, degree: int) -> Perm:
    images = list(range(degree))
    for i, x in enumerate(perm):
        images[offset + i] = offset + x
    return tuple(images)


def _product_gens(degree1: int, gens1: list[Perm], degree2: int, gens2: list[Perm]) -> tuple[int, list[Perm]]:
    degree = degree1 + degree2
    out = [_shift(g, 0, degree) for g in gens1]
    out += [_shift(g, degree1, degree) for g in gens2]
    return degree, out


def _abelian_gens(factors: tuple[int, ...]) -> tuple[int, list[Perm]]:
    degree, gens = 0, []
    for n in factors:
        degree, gens = _product_gens(degree, gens, n, _cyclic_gens(n))
    return degree, gens


def _dihedral_gens(n: int) -> list[Perm]:
    # symmetries of the n-gon: rotation and a reflection
    rot = tuple((i + 1) % n for i in range(n))
    refl = tuple((-i) % n for i in range(n))
    return [rot, refl]


def _dicyclic_gens(n: int) -> tuple[int, list[Perm]]:
    # order 4n with a^(2n)=1, b^2=a^n, b a b^-1 = a^-1; left regular action
    order = 4 * n

    def mul(x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
        i1, j1 = x
        i2, j2 = y
        if j1 == 0:
            return ((i1 + i2) % (2 * n), j2)
        if j2 == 0:
            return ((i1 - i2) % (2 * n), 1)
        return ((i1 - i2 + n) % (2 * n), 0)

    elems = [(i, j) for i in range(2 * n) for j in range(2)]
    index = {x: t for t, x in enumerate(elems)}
    gens = []
    for g in ((1, 0), (0, 1)):
        gens.append(tuple(index[mul(g, x)] for x in elems))
    return order, gens


def _symmetric_gens(n: int) -> list[Perm]:
    if n <= 1:
        return []
    if n == 2:
        return [(1, 0)]
    transposition = (1, 0) + tuple(range(2, n))
    cycle = tuple((i + 1) % n for i in range(n))
    return [transposition, cycle]


def _alternating_gens(n: int) -> list[Perm]:
    if n <= 2:
        return []
    if n == 3:
        return [(1, 2, 0)]
    three = (1, 2, 0) + tuple(range(3, n))
    if n % 2:
        cycle = tuple((i + 1) % n for i in range(n))
    else:
        cycle = (0,) + tuple(2 + (i - 1) % (n - 1) if i >= 1 else 0 for i in range(1, n))
    return [three, cycle]


@dataclass(frozen=True)
class _Family:
    name: str
    order: int
    degree: int
    gens: tuple[Perm, ...]


def _named_families(max_order: int) -> list[_Family]:
    out: list[_Family] = []
    for n in range(1, max_order + 1):
        out.append(_Family(f"C{n}", n, n, tuple(_cyclic_gens(n))))
    for a in range(2, max_order + 1):
        for b in range(a, max_order + 1):
            if a * b > max_order or b % a:
                continue
            degree, gens = _abelian_gens((a, b))
            out.append(_Family(f"C{a}xC{b}", a * b, degree, tuple(gens)))
            for c in range(b, max_order + 1):
                if a * b * c > max_order or c % b:
                    continue
                degree3, gens3 = _abelian_gens((a, b, c))
                out.append(_Family(f"C{a}xC{b}xC{c}", a * b * c, degree3, tuple(gens3)))
    for n in range(3, max_order // 2 + 1):
        out.append(_Family(f"D{n}", 2 * n, n, tuple(_dihedral_gens(n))))
    for n in range(2, max_order // 4 + 1):
        order, gens = _dicyclic_gens(n)
        out.append(_Family(f"Q{order}", order, order, tuple(gens)))
    facts = {3: 6, 4: 24, 5: 120, 6: 720}
    for n, fact in facts.items():
        if fact <= max_order:
            out.append(_Family(f"S{n}", fact, n, tuple(_symmetric_gens(n))))
        if fact // 2 <= max_order and n >= 4:
            out.append(_Family(f"A{n}", fact // 2, n, tuple(_alternating_gens(n))))
    return out


_EXPECTED_BLOCKS: dict[str, dict[str, int]] = {
    "C1": {"order": 1, "h": 1, "f": 1, "cl_Q": 1, "irr_Q": 1},
    "C3": {"order": 3, "h": 2, "f": 2, "cl_Q": 1, "irr_Q": 1},
    "C4": {"order": 4, "h": 2, "f": 2, "cl_Q": 2, "irr_Q": 2},
    "C5": {"order": 5, "h": 4, "f": 4, "cl_Q": 1, "irr_Q": 1},
    "S3": {"order": 6, "h": 3, "f": 3, "cl_Q": 3, "irr_Q": 3},
    "D5": {"order": 10, "h": 2, "f": 2, "cl_Q": 2, "irr_Q": 2},
    "Q8": {"order": 8, "h": 5, "f": 5, "cl_Q": 5, "irr_Q": 5},
    "S4": {"order": 24, "h": 5, "f": 5, "cl_Q": 5, "irr_Q": 5},
    "A5": {"order": 60, "h": 3, "f": 3, "cl_Q": 3, "irr_Q": 3},
}


def builtin_corpus(max_order: int) -> list[GroupSpec]:
    """Built-in families filtered by order: cyclic and abelian products,
    dihedral, dicyclic, symmetric/alternating (n <= 6), and cross products."""
    if max_order < 1:
        raise ValueError(f"max_order must be >= 1, got {max_order}")
    families = [f for f in _named_families(max_order) if f.order <= max_order]
    base = {f.name: f for f in families}
    specs: dict[str, _Family] = dict(base)

    nonabelian = [
        f
        for f in families
        if f.name[0] in "DQSA" and f.order >= 6
    ]
    for f in nonabelian:
        for m in range(2, max_order // f.order + 1):
            deg, gens = _product_gens(m, _cyclic_gens(m), f.degree, list(f.gens))
            name = f"C{m}x{f.name}"
            specs[name] = _Family(name, m * f.order, deg, tuple(gens))
    for i, f1 in enumerate(nonabelian):
        for f2 in nonabelian[i:]:
            if f1.order * f2.order > max_order:
                continue
            deg, gens = _product_gens(f1.degree, list(f1.gens), f2.degree, list(f2.gens))
            name = f"{f1.name}x{f2.name}"
            specs[name] = _Family(name, f1.order * f2.order, deg, tuple(gens))

    out = []
    for fam in sorted(specs.values(), key=lambda f: (f.order, f.name)):
        expected = _EXPECTED_BLOCKS.get(fam.name, {"order": fam.order})
        out.append(
            GroupSpec(
                name=fam.name,
                source="BUILTIN",
                degree=fam.degree,
                generators=fam.gens,
                expected=tuple(sorted(expected.items())),
            )
        )
    return out


# -- verdict persistence -----------------------------------------------------


@dataclass(frozen=True)
class VerdictRecord:
    group: str
    order: int
    suite: str
    verdict: str  # PASS | FAIL | NOT_APPLICABLE
    witness: dict | None
    spec_hash: str
    version: str = __version__

    def key(self) -> tuple[str, str]:
        return (self.spec_hash, self.suite)

    def to_payload(self) -> dict:
        return {
            "group": self.group,
            "order": self.order,
            "suite": self.suite,
            "verdict": self.verdict,
            "witness": self.witness,
            "spec_hash": self.spec_hash,
            "version": self.version,
        }

    @classmethod
    def from_payload(cls, payload: dict) -> VerdictRecord:
        return cls(
            group=payload["group"],
            order=payload["order"],
            suite=payload["suite"],
            verdict=payload["verdict"],
            witness=payload.get("witness"),
            spec_hash=payload["spec_hash"],
            version=payload.get("version", "unknown"),
        )


class VerdictStore:
    """Append-only JSONL store keyed by (spec hash, suite id)."""

    def __init__(self, path: str | Path | None):
        self.path = Path(path) if path else None
        self._records: dict[tuple[str, str], VerdictRecord] = {}
        if self.path and self.path.exists():
            for lineno, line in enumerate(self.path.read_text().splitlines(), 1):
                if not line.strip():
                    continue
                try:
                    record = VerdictRecord.from_payload(json.loads(line))
                except (json.JSONDecodeError, KeyError) as exc:
                    raise ParseError(f"{self.path}:{lineno}: bad verdict record ({exc})")
                existing = self._records.get(record.key())
                if existing is not None and existing != record:
                    raise HashMismatch(
                        f"{self.path}:{lineno}: conflicting verdicts for {record.key()}"
                    )
                self._records[record.key()] = record

    def get(self, spec_hash: str, suite: str) -> VerdictRecord | None:
        return self._records.get((spec_hash, suite))

    def add(self, record: VerdictRecord) -> None:
        existing = self._records.get(record.key())
        if existing is not None:
            if existing != record:
                raise HashMismatch(f"conflicting verdict for {record.key()}")
            return
        self._records[record.key()] = record
        if self.path:
            with self.path.open("a") as fh:
                fh.write(json.dumps(record.to_payload(), sort_keys=True) + "\n")
