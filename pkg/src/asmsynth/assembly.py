"""From terms to assemblies: occurrence trees, links, programs, and BOMs.

A term expands into an occurrence tree whose ids are dotted pre-order paths
("0", "0.0", "0.1.0"). Grouped arguments replicate their subtree once per
member joint origin. Links are the connected components of the rigid-edge
subgraph; the assembly program is the ordered instruction list (insert,
create links, move, create joints) that materializes the tree, and it can
be replayed by the bundled interpreter to recover the tree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .catalog import Catalog
from .errors import InvalidProgram, SchemaViolation
from .synthesis import Term, check_term, parse_variant_id
from .taxonomy import TaxonomyContext


@dataclass(frozen=True)
class OccNode:
    part_id: str
    config_id: str | None  # None when reconstructed from a program (root only)


@dataclass(frozen=True)
class OccEdge:
    parent: str
    parent_jo: str
    child: str
    child_jo: str
    kind: str


@dataclass(frozen=True, eq=False)
class OccurrenceTree:
    root: str
    nodes: Mapping[str, OccNode]  # pre-order insertion order
    edges: tuple[OccEdge, ...]  # pre-order of the child occurrence


def occ_sort_key(occ: str) -> tuple[int, ...]:
    """Numeric path order: "0.10" sorts after "0.2"."""
    return tuple(int(p) for p in occ.split("."))


def expand_term(ctx: TaxonomyContext, catalog: Catalog, term: Term) -> OccurrenceTree:
    """Occurrence tree of a term; grouped subtrees are deep-copied per member."""
    check_term(ctx, catalog, term)
    nodes: dict[str, OccNode] = {}
    edges: list[OccEdge] = []

    def walk(node: Term, occ: str) -> None:
        part_id, config_id, _ = parse_variant_id(node.variant_id)
        cfg = catalog.configuration(part_id, config_id)
        nodes[occ] = OccNode(part_id, config_id)
        index = 0
        for group, child in zip(cfg.arg_groups, node.children):
            child_part, child_config, _ = parse_variant_id(child.variant_id)
            for member_uuid in group.member_uuids:
                child_occ = f"{occ}.{index}"
                index += 1
                edges.append(
                    OccEdge(
                        parent=occ,
                        parent_jo=member_uuid,
                        child=child_occ,
                        child_jo=child_config,
                        kind=group.joint_kind,
                    )
                )
                walk(child, child_occ)

    walk(term, "0")
    order = sorted(nodes, key=occ_sort_key)
    return OccurrenceTree(
        root="0",
        nodes={occ: nodes[occ] for occ in order},
        edges=tuple(sorted(edges, key=lambda e: occ_sort_key(e.child))),
    )


@dataclass(frozen=True)
class LinkPartition:
    links: tuple[str, ...]
    link_of: Mapping[str, str]


def partition_links(tree: OccurrenceTree) -> LinkPartition:
    """Connected components of the rigid subgraph, ordered by smallest member."""
    parent: dict[str, str] = {occ: occ for occ in tree.nodes}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in tree.edges:
        if e.kind == "rigid":
            parent[find(e.parent)] = find(e.child)

    members: dict[str, list[str]] = {}
    for occ in tree.nodes:
        members.setdefault(find(occ), []).append(occ)
    reps = sorted(members, key=lambda r: occ_sort_key(min(members[r], key=occ_sort_key)))
    links = tuple(f"L{i}" for i in range(len(reps)))
    link_of = {}
    for link, rep in zip(links, reps):
        for occ in members[rep]:
            link_of[occ] = link
    return LinkPartition(links=links, link_of={occ: link_of[occ] for occ in tree.nodes})


@dataclass(frozen=True)
class ProgramJoint:
    kind: str
    parent: str
    parent_jo: str
    child: str
    child_jo: str


@dataclass(frozen=True)
class AssemblyProgram:
    insertions: tuple[tuple[str, int], ...]
    links: tuple[str, ...]
    moves: tuple[tuple[str, str], ...]
    joints: tuple[ProgramJoint, ...]


def compile_program(tree: OccurrenceTree, partition: LinkPartition) -> AssemblyProgram:
    """Ordered instructions: insert parts, create links, move, create joints."""
    counts: dict[str, int] = {}
    for node in tree.nodes.values():
        counts[node.part_id] = counts.get(node.part_id, 0) + 1
    insertions = tuple((pid, counts[pid]) for pid in dict.fromkeys(n.part_id for n in tree.nodes.values()))
    moves = tuple((occ, partition.link_of[occ]) for occ in tree.nodes)
    joints = tuple(
        ProgramJoint(e.kind, e.parent, e.parent_jo, e.child, e.child_jo) for e in tree.edges
    )
    return AssemblyProgram(insertions=insertions, links=partition.links, moves=moves, joints=joints)


@dataclass(frozen=True)
class BomRow:
    part_id: str
    name: str
    quantity: int
    unit_cost: float | None
    row_total: float | None


@dataclass(frozen=True)
class Bom:
    rows: tuple[BomRow, ...]
    total_known_cost: float
    cost_complete: bool


def bom_and_cost(catalog: Catalog, tree: OccurrenceTree) -> Bom:
    """Per-part quantities and costs; missing unit costs flag the total."""
    counts: dict[str, int] = {}
    for node in tree.nodes.values():
        counts[node.part_id] = counts.get(node.part_id, 0) + 1
    rows = []
    total = 0.0
    complete = True
    for part_id in sorted(counts):
        part = catalog.part(part_id)
        qty = counts[part_id]
        if part.unit_cost is None:
            complete = False
            rows.append(BomRow(part_id, part.name, qty, None, None))
        else:
            row_total = qty * part.unit_cost
            total += row_total
            rows.append(BomRow(part_id, part.name, qty, part.unit_cost, row_total))
    return Bom(rows=tuple(rows), total_known_cost=total, cost_complete=complete)


def bom_to_json(bom: Bom) -> dict:
    return {
        "rows": [
            {
                "partId": r.part_id,
                "name": r.name,
                "quantity": r.quantity,
                "unitCost": r.unit_cost,
                "rowTotal": r.row_total,
            }
            for r in bom.rows
        ],
        "totalKnownCost": bom.total_known_cost,
        "costComplete": bom.cost_complete,
    }


def program_to_json(program: AssemblyProgram) -> dict:
    return {
        "insertions": [[pid, qty] for pid, qty in program.insertions],
        "links": list(program.links),
        "moves": [[occ, link] for occ, link in program.moves],
        "joints": [[j.kind, j.parent, j.parent_jo, j.child, j.child_jo] for j in program.joints],
    }


def program_from_json(doc: object) -> AssemblyProgram:
    if not isinstance(doc, dict):
        raise SchemaViolation("program must be an object")
    extra = set(doc) - {"insertions", "links", "moves", "joints"}
    if extra:
        raise SchemaViolation(f"unexpected program keys {sorted(extra)}")

    def rows(key: str, width: int) -> list[list]:
        val = doc.get(key, [])
        if not isinstance(val, list):
            raise SchemaViolation(f"program {key!r} must be a list")
        for row in val:
            if not isinstance(row, list) or len(row) != width:
                raise SchemaViolation(f"program {key!r} rows must have {width} entries")
        return val

    insertions = []
    for pid, qty in rows("insertions", 2):
        if not isinstance(pid, str) or not isinstance(qty, int) or isinstance(qty, bool) or qty < 1:
            raise SchemaViolation("insertions must be [partId, positive count] pairs")
        insertions.append((pid, qty))
    links = doc.get("links", [])
    if not isinstance(links, list) or not all(isinstance(l, str) for l in links):
        raise SchemaViolation("program 'links' must be a list of strings")
    moves = []
    for occ, link in rows("moves", 2):
        if not isinstance(occ, str) or not isinstance(link, str):
            raise SchemaViolation("moves must be [occurrence, link] pairs")
        moves.append((occ, link))
    joints = []
    for kind, parent, pjo, child, cjo in rows("joints", 5):
        if not all(isinstance(x, str) for x in (kind, parent, pjo, child, cjo)):
            raise SchemaViolation("joints must be [kind, parent, parentJo, child, childJo] rows")
        if kind not in ("rigid", "revolute"):
            raise SchemaViolation(f"unknown joint kind {kind!r}")
        joints.append(ProgramJoint(kind, parent, pjo, child, cjo))
    return AssemblyProgram(
        insertions=tuple(insertions),
        links=tuple(links),
        moves=tuple(moves),
        joints=tuple(joints),
    )


def interpret_program(catalog: Catalog, program: AssemblyProgram) -> tuple[OccurrenceTree, LinkPartition]:
    """Replay a program against a virtual occurrence store.

    Validates the program invariants (quantities match, every occurrence
    moved exactly once onto an existing link, joints only between moved
    occurrences, tree-shaped) and reconstructs the occurrence tree. Part
    identities are recovered through the catalog's joint-origin uuids; the
    root's configuration cannot be recovered from the wire format and is
    left unset.
    """
    if len(set(l for l in program.links)) != len(program.links):
        raise InvalidProgram("duplicate link ids")
    link_set = set(program.links)
    moved: dict[str, str] = {}
    for occ, link in program.moves:
        if not occ or any(not p.isdigit() for p in occ.split(".")):
            raise InvalidProgram(f"occurrence id {occ!r} is not a dotted numeric path")
        if occ in moved:
            raise InvalidProgram(f"occurrence {occ!r} moved twice")
        if link not in link_set:
            raise InvalidProgram(f"move of {occ!r} targets unknown link {link!r}")
        moved[occ] = link
    if not moved:
        raise InvalidProgram("program moves no occurrences")

    inserted: dict[str, int] = {}
    for pid, qty in program.insertions:
        if pid in inserted:
            raise InvalidProgram(f"part {pid!r} inserted twice")
        inserted[pid] = qty

    if len(program.joints) != len(moved) - 1:
        raise InvalidProgram(f"{len(program.joints)} joints cannot connect {len(moved)} occurrences")

    part_of: dict[str, str] = {}
    config_of: dict[str, str | None] = {occ: None for occ in moved}

    def learn(occ: str, part_id: str) -> None:
        before = part_of.get(occ)
        if before is not None and before != part_id:
            raise InvalidProgram(f"occurrence {occ!r} is both {before!r} and {part_id!r}")
        part_of[occ] = part_id

    children: dict[str, list[str]] = {occ: [] for occ in moved}
    has_parent: set[str] = set()
    for j in program.joints:
        if j.parent not in moved or j.child not in moved:
            raise InvalidProgram("joint references an occurrence that was never moved")
        if j.child in has_parent:
            raise InvalidProgram(f"occurrence {j.child!r} has two parents")
        has_parent.add(j.child)
        learn(j.parent, catalog.owner_of(j.parent_jo))
        learn(j.child, catalog.owner_of(j.child_jo))
        config_of[j.child] = j.child_jo
        children[j.parent].append(j.child)

    roots = [occ for occ in moved if occ not in has_parent]
    if len(roots) != 1:
        raise InvalidProgram(f"program has {len(roots)} roots")
    root = roots[0]

    # Reachability doubles as the connectivity check given |joints| = n - 1.
    seen: set[str] = set()
    stack = [root]
    while stack:
        occ = stack.pop()
        if occ in seen:
            raise InvalidProgram("joints contain a cycle")
        seen.add(occ)
        stack.extend(children[occ])
    if seen != set(moved):
        raise InvalidProgram("joints do not connect all moved occurrences")

    if len(moved) == 1:
        if len(inserted) != 1 or next(iter(inserted.values())) != 1:
            raise InvalidProgram("single-occurrence program must insert exactly one part")
        part_of[root] = next(iter(inserted))

    counts: dict[str, int] = {}
    for occ in moved:
        pid = part_of.get(occ)
        if pid is None:
            raise InvalidProgram(f"part of occurrence {occ!r} is not determined by any joint")
        counts[pid] = counts.get(pid, 0) + 1
    if counts != inserted:
        raise InvalidProgram(f"insertions {inserted} do not match occurrence counts {counts}")

    order = sorted(moved, key=occ_sort_key)
    nodes = {occ: OccNode(part_of[occ], config_of[occ]) for occ in order}
    edges = tuple(
        OccEdge(j.parent, j.parent_jo, j.child, j.child_jo, j.kind)
        for j in sorted(program.joints, key=lambda j: occ_sort_key(j.child))
    )
    tree = OccurrenceTree(root=root, nodes=nodes, edges=edges)

    partition = partition_links(tree)
    if partition.links != program.links:
        raise InvalidProgram("program links do not match the rigid partition")
    for occ, link in program.moves:
        if partition.link_of[occ] != link:
            raise InvalidProgram(f"occurrence {occ!r} moved to {link!r}, expected {partition.link_of[occ]}")
    return tree, partition
