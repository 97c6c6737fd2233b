"""Typed-combinator synthesis: inhabitation to a tree grammar plus enumeration.

Every part configuration becomes a combinator whose argument types are the
configuration's required types and whose result is its provided type. A
request's propagated atoms are routed through combinator variants: an atom
the combinator does not itself provide must be assigned to exactly one
argument, re-demanding it from the sub-assembly plugged in there.

Inhabitation is a demand-driven fixpoint over canonical types; the result
is a regular tree grammar whose nonterminals are canonical types. Terms are
enumerated smallest-first with a deterministic tie order, so repeated runs
are byte-identical.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .catalog import Catalog
from .errors import IllTypedTerm, InvalidRequest, SchemaViolation, UnknownAtomInRequest
from .taxonomy import HIERARCHIES, Atom, TaxonomyContext, make_atom
from .typesys import (
    CanonicalTypeExpr,
    TypeExpr,
    atoms_from_json,
    canonicalize,
    check_known,
    meet,
    subtype_le,
    type_from_json,
    type_to_json,
)

DEFAULT_LIMIT = 100
DEFAULT_PROPAGATED_CAP = 4
DEFAULT_LIMIT_CAP = 2000

_HIER_LETTER = {h: h[0] for h in HIERARCHIES}
_LETTER_HIER = {h[0]: h for h in HIERARCHIES}


@dataclass(frozen=True)
class ArgSpec:
    """One argument slot of a combinator, mirroring a configuration arg group."""

    required: CanonicalTypeExpr
    multiplicity: int
    joint_kind: str
    member_uuids: tuple[str, ...]


@dataclass(frozen=True)
class Combinator:
    part_id: str
    config_id: str
    args: tuple[ArgSpec, ...]
    result: CanonicalTypeExpr
    root_uuid: str

    @property
    def arity(self) -> int:
        return len(self.args)


@dataclass(frozen=True)
class Request:
    target: TypeExpr
    propagated: frozenset[Atom] = frozenset()
    sizes: tuple[int, ...] | None = None
    limit: int = DEFAULT_LIMIT


def make_request(
    ctx: TaxonomyContext,
    target: TypeExpr,
    propagated: Iterable[Atom] = (),
    sizes: Iterable[int] | None = None,
    limit: int = DEFAULT_LIMIT,
    propagated_cap: int = DEFAULT_PROPAGATED_CAP,
    limit_cap: int | None = DEFAULT_LIMIT_CAP,
) -> Request:
    """Validated request constructor."""
    prop = frozenset(propagated)
    if not len(target):
        raise InvalidRequest("request target must not be empty")
    for a in sorted(target):
        if a.hierarchy == "formats":
            raise InvalidRequest(f"request target may not contain formats atom {a.name!r}")
    unknown = check_known(ctx, target) + check_known(ctx, prop)
    if unknown:
        a = unknown[0]
        raise UnknownAtomInRequest(f"request references unknown atom {a.name!r} in {a.hierarchy}")
    if len(prop) > propagated_cap:
        raise InvalidRequest(f"at most {propagated_cap} propagated atoms are supported, got {len(prop)}")
    size_tuple: tuple[int, ...] | None = None
    if sizes is not None:
        size_list = sorted(set(sizes))
        if not size_list or any(not isinstance(s, int) or s < 1 for s in size_list):
            raise InvalidRequest("sizes must be a non-empty set of positive integers")
        size_tuple = tuple(size_list)
    if not isinstance(limit, int) or limit < 1:
        raise InvalidRequest(f"limit must be a positive integer, got {limit!r}")
    if limit_cap is not None and limit > limit_cap:
        raise InvalidRequest(f"limit must be at most {limit_cap}, got {limit}")
    return Request(target=target, propagated=prop, sizes=size_tuple, limit=limit)


def request_from_json(
    ctx: TaxonomyContext,
    doc: object,
    propagated_cap: int = DEFAULT_PROPAGATED_CAP,
    limit_cap: int | None = DEFAULT_LIMIT_CAP,
) -> Request:
    if not isinstance(doc, dict):
        raise SchemaViolation("request must be an object")
    extra = set(doc) - {"target", "propagated", "sizes", "limit"}
    if extra:
        raise SchemaViolation(f"unexpected request keys {sorted(extra)}")
    if "target" not in doc:
        raise SchemaViolation("request is missing 'target'")
    target = type_from_json(doc["target"])
    raw_prop = doc.get("propagated")
    propagated = frozenset() if raw_prop is None else atoms_from_json(raw_prop)
    sizes = doc.get("sizes")
    if sizes is not None:
        if not isinstance(sizes, list) or not all(isinstance(s, int) and not isinstance(s, bool) for s in sizes):
            raise SchemaViolation("request 'sizes' must be a list of integers or null")
    limit = doc.get("limit", DEFAULT_LIMIT)
    if not isinstance(limit, int) or isinstance(limit, bool):
        raise SchemaViolation("request 'limit' must be an integer")
    return make_request(ctx, target, propagated, sizes, limit, propagated_cap, limit_cap)


def request_to_json(request: Request) -> dict:
    return {
        "target": type_to_json(request.target),
        "propagated": type_to_json(TypeExpr(request.propagated)),
        "sizes": list(request.sizes) if request.sizes is not None else None,
        "limit": request.limit,
    }


def combinators_from_catalog(ctx: TaxonomyContext, catalog: Catalog) -> tuple[Combinator, ...]:
    """One combinator per configuration, ordered by (partId, configId)."""
    out = []
    for cfg in catalog.all_configurations():
        out.append(
            Combinator(
                part_id=cfg.part_id,
                config_id=cfg.config_id,
                args=tuple(
                    ArgSpec(g.required, g.multiplicity, g.joint_kind, g.member_uuids) for g in cfg.arg_groups
                ),
                result=cfg.provided,
                root_uuid=cfg.config_id,
            )
        )
    out.sort(key=lambda c: (c.part_id, c.config_id))
    return tuple(out)


def format_variant_id(part_id: str, config_id: str, assignment: Sequence[tuple[Atom, int]]) -> str:
    """Stable node label: partId/configId/assignmentKey."""
    if not assignment:
        key = "-"
    else:
        key = ",".join(
            f"{_HIER_LETTER[a.hierarchy]}:{a.name}@{i}" for a, i in sorted(assignment)
        )
    return f"{part_id}/{config_id}/{key}"


def parse_variant_id(variant_id: str) -> tuple[str, str, tuple[tuple[Atom, int], ...]]:
    pieces = variant_id.split("/")
    if len(pieces) != 3:
        raise SchemaViolation(f"malformed variant id {variant_id!r}")
    part_id, config_id, key = pieces
    if key == "-":
        return part_id, config_id, ()
    assignment = []
    for chunk in key.split(","):
        try:
            atom_part, idx = chunk.rsplit("@", 1)
            letter, name = atom_part.split(":", 1)
            assignment.append((make_atom(_LETTER_HIER[letter], name), int(idx)))
        except (ValueError, KeyError) as exc:
            raise SchemaViolation(f"malformed variant id {variant_id!r}") from exc
    return part_id, config_id, tuple(assignment)


@dataclass(frozen=True)
class CombinatorVariant:
    """A combinator with propagated atoms routed to specific arguments."""

    variant_id: str
    combinator: Combinator
    assignment: tuple[tuple[Atom, int], ...]
    args: tuple[CanonicalTypeExpr, ...]
    result: CanonicalTypeExpr


def propagate_variants(ctx: TaxonomyContext, c: Combinator, demanded: Iterable[Atom]) -> list[CombinatorVariant]:
    """Rewrites of c that make it produce every demanded atom.

    Atoms the result already covers need no routing; every other demanded
    atom is assigned to exactly one argument, one variant per total
    assignment, in lexicographic assignment order. An arity-0 combinator
    cannot source a residual atom, so it yields no variants.
    """
    demanded = sorted(set(demanded))
    intrinsic = [p for p in demanded if subtype_le(ctx, c.result, TypeExpr(frozenset((p,))))]
    residual = [p for p in demanded if p not in intrinsic]
    if residual and c.arity == 0:
        return []
    result = meet(ctx, c.result, TypeExpr(frozenset(demanded)))
    variants = []
    for choice in itertools.product(range(c.arity), repeat=len(residual)):
        assignment = tuple(sorted(zip(residual, choice)))
        routed: dict[int, set[Atom]] = {}
        for atom, idx in assignment:
            routed.setdefault(idx, set()).add(atom)
        args = tuple(
            meet(ctx, spec.required, TypeExpr(frozenset(routed.get(i, ()))))
            for i, spec in enumerate(c.args)
        )
        variants.append(
            CombinatorVariant(
                variant_id=format_variant_id(c.part_id, c.config_id, assignment),
                combinator=c,
                assignment=assignment,
                args=args,
                result=result,
            )
        )
    return variants


@dataclass(frozen=True)
class Production:
    variant_id: str
    children: tuple[CanonicalTypeExpr, ...]


@dataclass(frozen=True, eq=False)
class TreeGrammar:
    """Regular tree grammar over combinator variants, keyed by canonical types."""

    start: CanonicalTypeExpr
    rules: Mapping[CanonicalTypeExpr, tuple[Production, ...]]
    variants: Mapping[str, CombinatorVariant]

    def variant(self, variant_id: str) -> CombinatorVariant:
        return self.variants[variant_id]


def _demand(ctx: TaxonomyContext, nt: CanonicalTypeExpr, propagated: frozenset[Atom]) -> list[Atom]:
    """Propagated atoms a nonterminal insists on (covered by one of its atoms)."""
    return sorted(p for p in propagated if subtype_le(ctx, nt, TypeExpr(frozenset((p,)))))


def inhabit(ctx: TaxonomyContext, combinators: Sequence[Combinator], request: Request) -> TreeGrammar:
    """Demand-driven inhabitation, pruned to productive and reachable rules."""
    start = canonicalize(ctx, TypeExpr(frozenset(request.target) | request.propagated))
    rules: dict[CanonicalTypeExpr, list[Production]] = {}
    variants: dict[str, CombinatorVariant] = {}
    todo = [start]
    while todo:
        nt = todo.pop()
        if nt in rules:
            continue
        rules[nt] = []
        demanded = _demand(ctx, nt, request.propagated)
        for c in combinators:
            for v in propagate_variants(ctx, c, demanded):
                if not subtype_le(ctx, v.result, nt):
                    continue
                children = tuple(canonicalize(ctx, t) for t in v.args)
                rules[nt].append(Production(v.variant_id, children))
                variants[v.variant_id] = v
                todo.extend(children)
    return _prune(start, rules, variants)


def _prune(
    start: CanonicalTypeExpr,
    rules: dict[CanonicalTypeExpr, list[Production]],
    variants: dict[str, CombinatorVariant],
) -> TreeGrammar:
    productive: set[CanonicalTypeExpr] = set()
    changed = True
    while changed:
        changed = False
        for nt, prods in rules.items():
            if nt in productive:
                continue
            if any(all(ch in productive for ch in p.children) for p in prods):
                productive.add(nt)
                changed = True

    kept: dict[CanonicalTypeExpr, tuple[Production, ...]] = {}
    reachable: set[CanonicalTypeExpr] = set()
    todo = [start]
    while todo:
        nt = todo.pop()
        if nt in reachable or nt not in productive:
            continue
        reachable.add(nt)
        prods = tuple(p for p in rules[nt] if all(ch in productive for ch in p.children))
        kept[nt] = prods
        for p in prods:
            todo.extend(p.children)

    used = {p.variant_id for prods in kept.values() for p in prods}
    return TreeGrammar(
        start=start,
        rules=kept,
        variants={vid: v for vid, v in variants.items() if vid in used},
    )


@dataclass(frozen=True)
class Term:
    variant_id: str
    children: tuple["Term", ...] = ()


def term_to_json(term: Term) -> dict:
    return {"variant": term.variant_id, "children": [term_to_json(c) for c in term.children]}


def term_from_json(doc: object) -> Term:
    if not isinstance(doc, dict) or set(doc) - {"variant", "children"}:
        raise SchemaViolation("term must be {variant, children}")
    variant = doc.get("variant")
    if not isinstance(variant, str):
        raise SchemaViolation("term 'variant' must be a string")
    children = doc.get("children", [])
    if not isinstance(children, list):
        raise SchemaViolation("term 'children' must be a list")
    return Term(variant, tuple(term_from_json(c) for c in children))


def _flatten(term: Term, acc: list[str]) -> list[str]:
    acc.append(term.variant_id)
    for c in term.children:
        _flatten(c, acc)
    return acc


def term_sort_key(term: Term) -> tuple[str, ...]:
    """Pre-order variant-id sequence; the deterministic tie order."""
    return tuple(_flatten(term, []))


def term_part_count(catalog: Catalog, term: Term) -> int:
    """Multiplicity-weighted part count: grouped children count once per member."""
    part_id, config_id, _ = parse_variant_id(term.variant_id)
    cfg = catalog.configuration(part_id, config_id)
    total = 1
    for group, child in zip(cfg.arg_groups, term.children):
        total += group.multiplicity * term_part_count(catalog, child)
    return total


def check_term(ctx: TaxonomyContext, catalog: Catalog, term: Term, _path: tuple[int, ...] = ()) -> CanonicalTypeExpr:
    """Independent bottom-up re-typing from the unmodified catalog.

    Verifies each child against its argument type (required type plus the
    atoms the variant routed there) and returns the node's type: the
    configuration's provided type plus the routed atoms the children were
    just verified to supply.
    """
    part_id, config_id, assignment = parse_variant_id(term.variant_id)
    try:
        cfg = catalog.configuration(part_id, config_id)
    except Exception as exc:
        raise IllTypedTerm(f"unknown configuration {part_id!r}/{config_id!r}", _path) from exc
    if len(term.children) != len(cfg.arg_groups):
        raise IllTypedTerm(
            f"{part_id!r}/{config_id!r} expects {len(cfg.arg_groups)} arguments, got {len(term.children)}",
            _path,
        )
    routed: dict[int, set[Atom]] = {}
    for atom, idx in assignment:
        if not 0 <= idx < len(cfg.arg_groups):
            raise IllTypedTerm(f"assignment routes {atom.name!r} to missing argument {idx}", _path)
        routed.setdefault(idx, set()).add(atom)
    for i, (group, child) in enumerate(zip(cfg.arg_groups, term.children)):
        child_type = check_term(ctx, catalog, child, _path + (i,))
        expected = meet(ctx, group.required, TypeExpr(frozenset(routed.get(i, ()))))
        if not subtype_le(ctx, child_type, expected):
            raise IllTypedTerm(
                f"argument {i} of {part_id!r}/{config_id!r} has type "
                f"{[a.name for a in child_type]}, needs {[a.name for a in expected]}",
                _path + (i,),
            )
    assigned = TypeExpr(frozenset(a for a, _ in assignment))
    return meet(ctx, cfg.provided, assigned)


def _production_multiplicities(grammar: TreeGrammar, prod: Production) -> tuple[int, ...]:
    return tuple(spec.multiplicity for spec in grammar.variants[prod.variant_id].combinator.args)


def count_terms(grammar: TreeGrammar, part_count: int) -> int:
    """Exact number of derivable terms of the given weighted part count."""
    if grammar.start not in grammar.rules:
        return 0
    memo: dict[tuple[CanonicalTypeExpr, int], int] = {}

    def count(nt: CanonicalTypeExpr, size: int) -> int:
        # Child sizes are strictly smaller, so the recursion terminates even
        # on cyclic grammars.
        if size < 1:
            return 0
        key = (nt, size)
        got = memo.get(key)
        if got is not None:
            return got
        total = 0
        for prod in grammar.rules[nt]:
            mults = _production_multiplicities(grammar, prod)
            total += _ways(prod.children, mults, size - 1, count)
        memo[key] = total
        return total

    def _ways(children, mults, budget, count_fn, j=0):
        if j == len(children):
            return 1 if budget == 0 else 0
        total = 0
        m = mults[j]
        for s in range(1, budget // m + 1):
            c = count_fn(children[j], s)
            if c:
                rest = _ways(children, mults, budget - m * s, count_fn, j + 1)
                if rest:
                    total += c * rest
        return total

    return count(grammar.start, part_count)


def _has_cycle(grammar: TreeGrammar) -> bool:
    """True when some nonterminal can reach itself (the language is infinite)."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color: dict[CanonicalTypeExpr, int] = {nt: WHITE for nt in grammar.rules}

    def visit(nt: CanonicalTypeExpr) -> bool:
        color[nt] = GRAY
        for prod in grammar.rules[nt]:
            for ch in prod.children:
                if color[ch] == GRAY:
                    return True
                if color[ch] == WHITE and visit(ch):
                    return True
        color[nt] = BLACK
        return False

    return any(visit(nt) for nt in grammar.rules if color[nt] == WHITE)


def _max_term_size(grammar: TreeGrammar) -> int:
    """Largest derivable part count; only meaningful for acyclic grammars."""
    memo: dict[CanonicalTypeExpr, int] = {}

    def biggest(nt: CanonicalTypeExpr) -> int:
        got = memo.get(nt)
        if got is None:
            got = memo[nt] = max(
                1 + sum(m * biggest(ch) for ch, m in zip(p.children, _production_multiplicities(grammar, p)))
                for p in grammar.rules[nt]
            )
        return got

    return biggest(grammar.start)


def _terms_of(
    grammar: TreeGrammar,
    memo: dict[tuple[CanonicalTypeExpr, int], tuple[Term, ...]],
    nt: CanonicalTypeExpr,
    size: int,
) -> tuple[Term, ...]:
    """All terms of one exact weighted size, in the deterministic order."""
    key = (nt, size)
    got = memo.get(key)
    if got is not None:
        return got
    found: list[Term] = []
    for prod in grammar.rules[nt]:
        mults = _production_multiplicities(grammar, prod)

        def fill(j: int, budget: int, chosen: tuple[Term, ...]):
            if j == len(prod.children):
                if budget == 0:
                    found.append(Term(prod.variant_id, chosen))
                return
            m = mults[j]
            for s in range(1, budget // m + 1):
                for sub in _terms_of(grammar, memo, prod.children[j], s):
                    fill(j + 1, budget - m * s, chosen + (sub,))

        fill(0, size - 1, ())
    found.sort(key=term_sort_key)
    result = tuple(found)
    memo[key] = result
    return result


def enumerate_terms(grammar: TreeGrammar, request: Request) -> list[Term]:
    """The request's result terms, sizes ascending, deterministic within a size.

    With explicit sizes, the limit is split into one quota per size:
    floor(limit / #sizes) each, remainder to the smallest sizes first.
    Quotas are fixed; a size with too few terms does not donate its slack.
    """
    if grammar.start not in grammar.rules:
        return []
    memo: dict[tuple[CanonicalTypeExpr, int], tuple[Term, ...]] = {}
    if request.sizes is not None:
        sizes = request.sizes
        base, rem = divmod(request.limit, len(sizes))
        out: list[Term] = []
        for i, size in enumerate(sizes):
            quota = base + (1 if i < rem else 0)
            out.extend(_terms_of(grammar, memo, grammar.start, size)[:quota])
        return out

    out = []
    bound = None if _has_cycle(grammar) else _max_term_size(grammar)
    size = 1
    while len(out) < request.limit and (bound is None or size <= bound):
        for term in _terms_of(grammar, memo, grammar.start, size):
            out.append(term)
            if len(out) == request.limit:
                break
        size += 1
    return out
