"""Typed-component assembly synthesis.

Parts annotated with taxonomy atoms become typed combinators; inhabitation
produces a tree grammar of all assemblies satisfying a request, and each
enumerated term compiles into an occurrence tree, link partition, ordered
assembly program, bill of materials, and posable kinematic model.
"""

from .assembly import (
    AssemblyProgram,
    Bom,
    BomRow,
    LinkPartition,
    OccEdge,
    OccNode,
    OccurrenceTree,
    ProgramJoint,
    bom_and_cost,
    bom_to_json,
    compile_program,
    expand_term,
    interpret_program,
    occ_sort_key,
    partition_links,
    program_from_json,
    program_to_json,
)
from .bundled import toyarm_dir
from .catalog import (
    ArgGroup,
    Catalog,
    Configuration,
    Diagnostic,
    JointOrigin,
    Part,
    derive_configurations,
    load_catalog,
    load_part,
    load_workspace,
    make_catalog,
    part_from_json,
    part_to_json,
    remove_part,
    save_part,
    set_cost,
    upsert_part,
    validate_part,
    with_context,
)
from .errors import (
    AngleCountMismatch,
    AsmSynthError,
    DuplicateName,
    DuplicateUuid,
    IllTypedTerm,
    InvalidPart,
    InvalidProgram,
    InvalidRequest,
    NegativeCost,
    NonUnitQuaternion,
    SchemaViolation,
    UnknownAtom,
    UnknownAtomInRequest,
    UnknownJointOrigin,
    UnknownNode,
    UnknownParent,
    UnknownPart,
    WouldCreateCycle,
)
from .kinematics import (
    FLIP,
    JointAxis,
    Pose,
    PosedAssembly,
    compose,
    dof,
    export_scene,
    export_urdf,
    forward_kinematics,
    identity,
    invert,
    load_scene,
    mate_child_pose,
    pose,
    pose_from_json,
    pose_to_json,
    reexport_scene,
    rot_x,
    rot_y,
    rot_z,
    transform_point,
    translate,
)
from .pipeline import (
    SynthesisResult,
    json_text,
    result_entry_to_json,
    results_to_json,
    synthesize,
)
from .server import create_app, serve
from .synthesis import (
    Combinator,
    CombinatorVariant,
    Production,
    Request,
    Term,
    TreeGrammar,
    check_term,
    combinators_from_catalog,
    count_terms,
    enumerate_terms,
    format_variant_id,
    inhabit,
    make_request,
    parse_variant_id,
    propagate_variants,
    request_from_json,
    request_to_json,
    term_from_json,
    term_part_count,
    term_sort_key,
    term_to_json,
)
from .taxonomy import (
    HIERARCHIES,
    Atom,
    Taxonomy,
    TaxonomyContext,
    create_node,
    delete_node,
    empty_context,
    is_subatom,
    load_taxonomies,
    make_atom,
    make_context,
    make_taxonomy,
    rename_node,
    save_taxonomies,
    taxonomy_from_json,
    taxonomy_to_json,
)
from .typesys import (
    TOP,
    CanonicalTypeExpr,
    TypeExpr,
    canonicalize,
    meet,
    subtype_le,
    type_expr,
    type_from_json,
    type_to_json,
)

__version__ = "0.1.0"
