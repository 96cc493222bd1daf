"""Lazily computed per-group bundle shared by the suites, the CLI and tests."""

from __future__ import annotations

from functools import cached_property

from .actions import ActionTable, BrauerReport, PermutationIsomorphism, brauer_check, build_actions, permutation_isomorphic
from .chartable import CharacterTable, OrthogonalityReport, character_table, verify_orthogonality
from .groups import (
    ClassData,
    PermGroup,
    bg_order,
    conjugacy_classes,
    group_from_generators,
    is_solvable,
    rationality_stabilizer,
)
from .invariants import (
    InvariantProfile,
    class_field_prime_bound,
    class_fields,
    class_fields_from_table,
    character_fields,
    invariant_profile,
    rational_element_orders,
)
from .residues import FieldKey


class GroupAnalysis:
    """Everything derivable from one enumerated group, computed on demand."""

    def __init__(self, name: str, group: PermGroup):
        self.name = name
        self.group = group

    @classmethod
    def from_generators(cls, name: str, degree: int, generators, cap: int = 20000) -> GroupAnalysis:
        return cls(name, group_from_generators(degree, generators, cap=cap))

    @cached_property
    def classes(self) -> ClassData:
        return conjugacy_classes(self.group)

    @cached_property
    def table(self) -> CharacterTable:
        return character_table(self.group, self.classes)

    @cached_property
    def class_fields(self) -> tuple[FieldKey, ...]:
        return class_fields(self.group, self.classes, self.stabilizers)

    @cached_property
    def class_fields_via_table(self) -> tuple[FieldKey, ...]:
        return class_fields_from_table(self.table, self.classes)

    @cached_property
    def char_fields(self) -> tuple[FieldKey, ...]:
        return character_fields(self.table, self.classes)

    @cached_property
    def profile(self) -> InvariantProfile:
        return invariant_profile(
            self.group, self.classes, self.table, self.class_fields, self.char_fields
        )

    @cached_property
    def actions(self) -> ActionTable:
        return build_actions(self.table, self.classes)

    @cached_property
    def brauer(self) -> BrauerReport:
        return brauer_check(self.actions)

    @cached_property
    def perm_isomorphism(self) -> PermutationIsomorphism:
        return permutation_isomorphic(self.actions)

    @cached_property
    def orthogonality(self) -> OrthogonalityReport:
        return verify_orthogonality(self.table, self.classes)

    @cached_property
    def stabilizers(self) -> tuple[frozenset[int], ...]:
        return tuple(
            rationality_stabilizer(self.group, self.classes, k)
            for k in range(self.classes.count)
        )

    @cached_property
    def bg_orders(self) -> tuple[int, ...]:
        return tuple(
            bg_order(self.group, cls.representative) for cls in self.classes.classes
        )

    @cached_property
    def solvable(self) -> bool:
        return is_solvable(self.group)

    @cached_property
    def rational_orders(self) -> frozenset[int]:
        return rational_element_orders(self.group, self.classes)

    @cached_property
    def prime_bounds(self) -> tuple[int | None, ...]:
        return class_field_prime_bound(self.group, self.classes, self.class_fields)
