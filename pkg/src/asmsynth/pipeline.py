"""End-to-end synthesis runs: request in, compiled result bundles out."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .assembly import (
    AssemblyProgram,
    Bom,
    LinkPartition,
    OccurrenceTree,
    bom_and_cost,
    compile_program,
    expand_term,
    partition_links,
)
from .catalog import Catalog
from .synthesis import (
    Request,
    Term,
    check_term,
    combinators_from_catalog,
    enumerate_terms,
    inhabit,
    term_part_count,
    term_to_json,
)
from .taxonomy import TaxonomyContext
from .typesys import CanonicalTypeExpr, type_to_json


@dataclass(frozen=True, eq=False)
class SynthesisResult:
    """One enumerated term with everything derived from it, compiled eagerly."""

    term: Term
    checked_type: CanonicalTypeExpr
    part_count: int
    tree: OccurrenceTree
    partition: LinkPartition
    program: AssemblyProgram
    bom: Bom


def synthesize(ctx: TaxonomyContext, catalog: Catalog, request: Request) -> list[SynthesisResult]:
    """Inhabit, enumerate, re-check every term, and compile it to an assembly."""
    combinators = combinators_from_catalog(ctx, catalog)
    grammar = inhabit(ctx, combinators, request)
    results = []
    for term in enumerate_terms(grammar, request):
        checked = check_term(ctx, catalog, term)
        tree = expand_term(ctx, catalog, term)
        partition = partition_links(tree)
        results.append(
            SynthesisResult(
                term=term,
                checked_type=checked,
                part_count=term_part_count(catalog, term),
                tree=tree,
                partition=partition,
                program=compile_program(tree, partition),
                bom=bom_and_cost(catalog, tree),
            )
        )
    return results


def result_entry_to_json(result: SynthesisResult) -> dict:
    return {
        "type": type_to_json(result.checked_type),
        "partCount": result.part_count,
        "term": term_to_json(result.term),
    }


def results_to_json(results: list[SynthesisResult]) -> list[dict]:
    return [result_entry_to_json(r) for r in results]


def json_text(doc: object) -> str:
    """Canonical serialization used for every artifact file."""
    return json.dumps(doc, indent=2) + "\n"
