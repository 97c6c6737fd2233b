"""The three named subtype hierarchies and their subtype relation.

Each hierarchy (formats, parts, attributes) is a DAG of named atoms; an
atom is a subtype of all of its ancestors, reflexively and transitively.
Contexts are immutable: every mutation returns a new context with the
ancestor closures recomputed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

from .errors import (
    DuplicateName,
    SchemaViolation,
    UnknownNode,
    UnknownParent,
    WouldCreateCycle,
)

HIERARCHIES = ("formats", "parts", "attributes")


class Atom(NamedTuple):
    hierarchy: str
    name: str


def make_atom(hierarchy: str, name: str) -> Atom:
    """Build an atom, enforcing the hierarchy and name rules."""
    if hierarchy not in HIERARCHIES:
        raise SchemaViolation(f"unknown hierarchy {hierarchy!r}")
    if not name or any(ord(c) < 0x20 or ord(c) == 0x7F for c in name):
        raise SchemaViolation(f"invalid atom name {name!r}")
    return Atom(hierarchy, name)


@dataclass(frozen=True)
class Taxonomy:
    """One hierarchy: a set of node names plus (child, parent) edges."""

    hierarchy: str
    nodes: frozenset[str]
    edges: frozenset[tuple[str, str]]

    def parents_of(self, name: str) -> frozenset[str]:
        return frozenset(p for c, p in self.edges if c == name)

    def children_of(self, name: str) -> frozenset[str]:
        return frozenset(c for c, p in self.edges if p == name)


def _check_taxonomy(hierarchy: str, nodes: frozenset[str], edges: frozenset[tuple[str, str]]) -> None:
    for name in nodes:
        make_atom(hierarchy, name)
    for child, parent in edges:
        if child not in nodes or parent not in nodes:
            missing = child if child not in nodes else parent
            raise UnknownParent(f"edge endpoint {missing!r} not in {hierarchy}")
    # Kahn's algorithm; leftover nodes imply a cycle.
    out_count = {n: 0 for n in nodes}
    inv: dict[str, list[str]] = {n: [] for n in nodes}
    for child, parent in edges:
        out_count[child] += 1
        inv[parent].append(child)
    ready = [n for n, k in out_count.items() if k == 0]
    seen = 0
    while ready:
        node = ready.pop()
        seen += 1
        for child in inv[node]:
            out_count[child] -= 1
            if out_count[child] == 0:
                ready.append(child)
    if seen != len(nodes):
        raise WouldCreateCycle(f"hierarchy {hierarchy!r} contains a cycle")


def make_taxonomy(hierarchy: str, nodes: Iterable[str] = (), edges: Iterable[tuple[str, str]] = ()) -> Taxonomy:
    """Validated taxonomy constructor: endpoints must exist, relation acyclic."""
    if hierarchy not in HIERARCHIES:
        raise SchemaViolation(f"unknown hierarchy {hierarchy!r}")
    node_set = frozenset(nodes)
    edge_set = frozenset((c, p) for c, p in edges)
    _check_taxonomy(hierarchy, node_set, edge_set)
    return Taxonomy(hierarchy, node_set, edge_set)


def _closures(tax: Taxonomy) -> dict[str, frozenset[str]]:
    """Reflexive-transitive ancestor sets, computed bottom-up."""
    parents: dict[str, set[str]] = {n: set() for n in tax.nodes}
    for child, parent in tax.edges:
        parents[child].add(parent)
    closure: dict[str, frozenset[str]] = {}

    def ancestors(name: str) -> frozenset[str]:
        got = closure.get(name)
        if got is None:
            acc = {name}
            for p in parents[name]:
                acc |= ancestors(p)
            got = closure[name] = frozenset(acc)
        return got

    for name in tax.nodes:
        ancestors(name)
    return closure


@dataclass(frozen=True, eq=False)
class TaxonomyContext:
    """All three hierarchies plus memoized ancestor closures."""

    taxonomies: Mapping[str, Taxonomy]
    closures: Mapping[str, Mapping[str, frozenset[str]]]

    def taxonomy(self, hierarchy: str) -> Taxonomy:
        if hierarchy not in HIERARCHIES:
            raise SchemaViolation(f"unknown hierarchy {hierarchy!r}")
        return self.taxonomies[hierarchy]

    def knows(self, atom: Atom) -> bool:
        return atom.hierarchy in self.taxonomies and atom.name in self.taxonomies[atom.hierarchy].nodes

    def closure(self, atom: Atom) -> frozenset[str]:
        """Ancestor names of the atom, including itself; unknown atoms are singletons."""
        per = self.closures.get(atom.hierarchy, {})
        return per.get(atom.name, frozenset((atom.name,)))

    def atoms(self) -> list[Atom]:
        return [
            Atom(h, n)
            for h in HIERARCHIES
            for n in sorted(self.taxonomies[h].nodes)
        ]


def make_context(*taxonomies: Taxonomy) -> TaxonomyContext:
    by_h = {h: make_taxonomy(h) for h in HIERARCHIES}
    for tax in taxonomies:
        by_h[tax.hierarchy] = tax
    return TaxonomyContext(by_h, {h: _closures(t) for h, t in by_h.items()})


def empty_context() -> TaxonomyContext:
    return make_context()


def _replace(ctx: TaxonomyContext, tax: Taxonomy) -> TaxonomyContext:
    by_h = dict(ctx.taxonomies)
    by_h[tax.hierarchy] = tax
    closures = dict(ctx.closures)
    closures[tax.hierarchy] = _closures(tax)
    return TaxonomyContext(by_h, closures)


def create_node(ctx: TaxonomyContext, atom: Atom, parents: Iterable[str] = ()) -> TaxonomyContext:
    """Add a node with edges to each named parent."""
    atom = make_atom(atom.hierarchy, atom.name)
    tax = ctx.taxonomy(atom.hierarchy)
    if atom.name in tax.nodes:
        raise DuplicateName(f"{atom.name!r} already exists in {atom.hierarchy}")
    parent_list = list(parents)
    for p in parent_list:
        if p not in tax.nodes:
            raise UnknownParent(f"parent {p!r} not in {atom.hierarchy}")
    new = make_taxonomy(
        tax.hierarchy,
        tax.nodes | {atom.name},
        tax.edges | {(atom.name, p) for p in parent_list},
    )
    return _replace(ctx, new)


def delete_node(ctx: TaxonomyContext, name: str, hierarchy: str) -> TaxonomyContext:
    """Remove a node, re-parenting its children onto its parents."""
    tax = ctx.taxonomy(hierarchy)
    if name not in tax.nodes:
        raise UnknownNode(f"{name!r} not in {hierarchy}")
    parents = tax.parents_of(name)
    children = tax.children_of(name)
    edges = {(c, p) for c, p in tax.edges if c != name and p != name}
    edges |= {(c, p) for c in children for p in parents}
    new = make_taxonomy(hierarchy, tax.nodes - {name}, edges)
    return _replace(ctx, new)


def rename_node(ctx: TaxonomyContext, old: str, new: str, hierarchy: str) -> TaxonomyContext:
    """Relabel a node; rejects collisions so edits never merge branches."""
    tax = ctx.taxonomy(hierarchy)
    if old not in tax.nodes:
        raise UnknownNode(f"{old!r} not in {hierarchy}")
    if new in tax.nodes:
        raise DuplicateName(f"{new!r} already exists in {hierarchy}")
    make_atom(hierarchy, new)
    edges = {
        (new if c == old else c, new if p == old else p)
        for c, p in tax.edges
    }
    renamed = make_taxonomy(hierarchy, (tax.nodes - {old}) | {new}, edges)
    return _replace(ctx, renamed)


def is_subatom(ctx: TaxonomyContext, a: Atom, b: Atom) -> bool:
    """True iff a is b or b is an ancestor of a in the same hierarchy."""
    if a.hierarchy != b.hierarchy:
        return False
    if a.name == b.name:
        return True
    return b.name in ctx.closure(a)


def taxonomy_to_json(tax: Taxonomy) -> dict:
    return {
        "hierarchy": tax.hierarchy,
        "nodes": sorted(tax.nodes),
        "edges": sorted([c, p] for c, p in tax.edges),
    }


def taxonomy_from_json(doc: object) -> Taxonomy:
    if not isinstance(doc, dict):
        raise SchemaViolation("taxonomy document must be an object")
    required = {"hierarchy", "nodes", "edges"}
    extra = set(doc) - required
    if extra:
        raise SchemaViolation(f"unexpected taxonomy keys {sorted(extra)}")
    missing = required - set(doc)
    if missing:
        raise SchemaViolation(f"taxonomy document is missing {sorted(missing)}")
    hierarchy = doc.get("hierarchy")
    nodes = doc.get("nodes", [])
    edges = doc.get("edges", [])
    if not isinstance(hierarchy, str):
        raise SchemaViolation("taxonomy 'hierarchy' must be a string")
    if not isinstance(nodes, list) or not all(isinstance(n, str) for n in nodes):
        raise SchemaViolation("taxonomy 'nodes' must be a list of strings")
    if len(set(nodes)) != len(nodes):
        raise DuplicateName(f"duplicate node names in {hierarchy}")
    pairs = []
    if not isinstance(edges, list):
        raise SchemaViolation("taxonomy 'edges' must be a list")
    for e in edges:
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, str) for x in e)):
            raise SchemaViolation("taxonomy edges must be [child, parent] string pairs")
        pairs.append((e[0], e[1]))
    return make_taxonomy(hierarchy, nodes, pairs)


def save_taxonomies(ctx: TaxonomyContext) -> list[dict]:
    """Canonical combined document: one entry per hierarchy, arrays sorted."""
    return [taxonomy_to_json(ctx.taxonomy(h)) for h in HIERARCHIES]


def load_taxonomies(document: object) -> TaxonomyContext:
    """Accepts a single taxonomy object or a combined list; absent hierarchies are empty."""
    entries = document if isinstance(document, list) else [document]
    seen: dict[str, Taxonomy] = {}
    for entry in entries:
        tax = taxonomy_from_json(entry)
        if tax.hierarchy in seen:
            raise SchemaViolation(f"hierarchy {tax.hierarchy!r} listed twice")
        seen[tax.hierarchy] = tax
    return make_context(*seen.values())
