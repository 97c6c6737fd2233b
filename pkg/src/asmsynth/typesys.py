"""Intersection types over taxonomy atoms.

A type is a finite set of atoms that must all be satisfied; the empty set
is the top type. Subtyping is induced by the hierarchies: sigma <= tau iff
every atom of tau is implied by some atom of sigma. Canonical forms drop
implied atoms and fix the ordering, so they can key grammar nonterminals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import SchemaViolation, UnknownAtom
from .taxonomy import HIERARCHIES, Atom, TaxonomyContext, is_subatom, make_atom


@dataclass(frozen=True)
class TypeExpr:
    atoms: frozenset[Atom]

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)


@dataclass(frozen=True)
class CanonicalTypeExpr:
    """Minimized type: sorted, and no member implies another member."""

    atoms: tuple[Atom, ...]

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __lt__(self, other: "CanonicalTypeExpr") -> bool:
        return self.atoms < other.atoms


TOP = TypeExpr(frozenset())


def type_expr(*atoms: Atom) -> TypeExpr:
    return TypeExpr(frozenset(atoms))


def subtype_le(ctx: TaxonomyContext, sigma: TypeExpr | CanonicalTypeExpr, tau: TypeExpr | CanonicalTypeExpr) -> bool:
    """sigma <= tau iff every atom of tau is implied by some atom of sigma."""
    return all(
        any(is_subatom(ctx, a, b) for a in sigma)
        for b in tau
    )


def canonicalize(ctx: TaxonomyContext, sigma: TypeExpr | CanonicalTypeExpr) -> CanonicalTypeExpr:
    """Drop atoms implied by other members; sort by (hierarchy, name)."""
    atoms = set(sigma)
    for a in atoms:
        if not ctx.knows(a):
            raise UnknownAtom(f"atom {a.name!r} not in hierarchy {a.hierarchy!r}")
    kept = [
        b
        for b in atoms
        if not any(a != b and is_subatom(ctx, a, b) for a in atoms)
    ]
    return CanonicalTypeExpr(tuple(sorted(kept)))


def meet(
    ctx: TaxonomyContext,
    sigma: TypeExpr | CanonicalTypeExpr,
    tau: TypeExpr | CanonicalTypeExpr,
) -> CanonicalTypeExpr:
    """Conjunction of two types: canonicalized union of their atoms."""
    return canonicalize(ctx, TypeExpr(frozenset(sigma) | frozenset(tau)))


def type_to_json(sigma: TypeExpr | CanonicalTypeExpr) -> dict:
    doc: dict = {h: [] for h in HIERARCHIES}
    for atom in sigma:
        doc[atom.hierarchy].append(atom.name)
    for h in HIERARCHIES:
        doc[h] = sorted(doc[h])
    return doc


def type_from_json(doc: object) -> TypeExpr:
    if not isinstance(doc, dict):
        raise SchemaViolation("type must be an object of hierarchy arrays")
    extra = set(doc) - set(HIERARCHIES)
    if extra:
        raise SchemaViolation(f"unexpected type keys {sorted(extra)}")
    missing = set(HIERARCHIES) - set(doc)
    if missing:
        raise SchemaViolation(f"type is missing {sorted(missing)}")
    atoms = []
    for h in HIERARCHIES:
        names = doc[h]
        if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
            raise SchemaViolation(f"type entry {h!r} must be a list of strings")
        atoms.extend(make_atom(h, n) for n in names)
    return TypeExpr(frozenset(atoms))


def atoms_from_json(doc: object) -> frozenset[Atom]:
    """Parse a type document as a plain atom set (propagated-type selections)."""
    return type_from_json(doc).atoms


def check_known(ctx: TaxonomyContext, sigma: Iterable[Atom]) -> list[Atom]:
    """Atoms of sigma that the context does not know, sorted."""
    return sorted(a for a in sigma if not ctx.knows(a))
