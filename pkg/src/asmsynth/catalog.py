"""Part repository: typed joint origins, derived configurations, JSON I/O.

A part carries a set of joint origins; each is a local frame annotated with
a provided type, a required type, or both. Every provided joint origin roots
one configuration of the part: a way of using it whose arguments are the
part's other required joint origins, grouped so that grouped arguments
receive identical sub-assemblies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping

from .errors import (
    DuplicateUuid,
    InvalidPart,
    NegativeCost,
    SchemaViolation,
    UnknownAtom,
    UnknownJointOrigin,
    UnknownPart,
)
from .kinematics import Pose, pose_from_json, pose_to_json
from .taxonomy import TaxonomyContext, load_taxonomies
from .typesys import (
    TOP,
    CanonicalTypeExpr,
    TypeExpr,
    canonicalize,
    check_known,
    meet,
    type_from_json,
    type_to_json,
)

JOINT_KINDS = ("rigid", "revolute")


@dataclass(frozen=True)
class JointOrigin:
    """A part-local frame offering and/or demanding a mating type."""

    uuid: str
    label: str
    frame: Pose
    provides: TypeExpr | None = None
    requires: TypeExpr | None = None
    joint_kind: str = "rigid"
    group_id: str | None = None


@dataclass(frozen=True)
class Part:
    part_id: str
    name: str
    part_types: TypeExpr
    unit_cost: float | None
    joint_origins: tuple[JointOrigin, ...]


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    part_id: str
    message: str
    jo_uuid: str | None = None


@dataclass(frozen=True)
class ArgGroup:
    """One argument slot of a configuration; grouped members share the subtree."""

    group_key: str
    required: CanonicalTypeExpr
    joint_kind: str
    member_uuids: tuple[str, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.member_uuids)


@dataclass(frozen=True)
class Configuration:
    """A part rooted at one of its provided joint origins."""

    part_id: str
    config_id: str  # uuid of the root provided joint origin
    provided: CanonicalTypeExpr
    arg_groups: tuple[ArgGroup, ...]


def validate_part(ctx: TaxonomyContext, part: Part) -> list[Diagnostic]:
    """All problems with a part; errors make it unusable, warnings do not."""
    out: list[Diagnostic] = []

    def err(message: str, jo: str | None = None) -> None:
        out.append(Diagnostic("error", part.part_id, message, jo))

    unknown = check_known(ctx, part.part_types)
    for a in unknown:
        err(f"partTypes atom {a.name!r} not in {a.hierarchy} hierarchy")
    for a in sorted(part.part_types):
        if a.hierarchy == "formats":
            err(f"partTypes may not contain formats atom {a.name!r}")
    if part.unit_cost is not None and part.unit_cost < 0:
        err(f"unitCost {part.unit_cost} is negative")

    seen: set[str] = set()
    groups: dict[str, list[JointOrigin]] = {}
    for jo in part.joint_origins:
        if jo.uuid in seen:
            err(f"duplicate joint origin uuid {jo.uuid!r}", jo.uuid)
        seen.add(jo.uuid)
        if jo.provides is None and jo.requires is None:
            err("joint origin has neither provides nor requires", jo.uuid)
        if jo.provides is not None and jo.requires is not None:
            err("joint origin has both provides and requires", jo.uuid)
        if jo.joint_kind not in JOINT_KINDS:
            err(f"unknown joint kind {jo.joint_kind!r}", jo.uuid)
        for side, expr in (("provides", jo.provides), ("requires", jo.requires)):
            if expr is None:
                continue
            for a in check_known(ctx, expr):
                err(f"{side} atom {a.name!r} not in {a.hierarchy} hierarchy", jo.uuid)
        if jo.group_id is not None:
            if jo.requires is None:
                err(f"grouped joint origin {jo.uuid!r} has no requires", jo.uuid)
            groups.setdefault(jo.group_id, []).append(jo)

    for gid, members in sorted(groups.items()):
        if len(members) < 2:
            continue
        head = members[0]
        # Agreement is only checkable once all members resolved; unknown atoms
        # and missing requires were already reported above.
        checkable = [m for m in members if m.requires is not None and not check_known(ctx, m.requires)]
        if len(checkable) == len(members):
            canon = {canonicalize(ctx, m.requires) for m in members}
            if len(canon) > 1:
                err(f"group {gid!r} members disagree on required type")
        if any(m.joint_kind != head.joint_kind for m in members[1:]):
            err(f"group {gid!r} members disagree on joint kind")

    if not any(jo.provides is not None for jo in part.joint_origins):
        out.append(
            Diagnostic("warning", part.part_id, "part has no provided joint origin; it can never be used")
        )
    return out


def derive_configurations(ctx: TaxonomyContext, part: Part) -> list[Configuration]:
    """One configuration per provided joint origin, deterministically ordered."""
    problems = [d for d in validate_part(ctx, part) if d.severity == "error"]
    if problems:
        raise InvalidPart(f"part {part.part_id!r} has validation errors", problems)

    configs: list[Configuration] = []
    roots = sorted((jo for jo in part.joint_origins if jo.provides is not None), key=lambda jo: jo.uuid)
    for root in roots:
        grouped: dict[str, list[JointOrigin]] = {}
        for jo in part.joint_origins:
            if jo.requires is None or jo.uuid == root.uuid:
                continue
            grouped.setdefault(jo.group_id if jo.group_id is not None else jo.uuid, []).append(jo)
        arg_groups = []
        for key, members in grouped.items():
            uuids = tuple(sorted(m.uuid for m in members))
            arg_groups.append(
                ArgGroup(
                    group_key=key,
                    required=canonicalize(ctx, members[0].requires),
                    joint_kind=members[0].joint_kind,
                    member_uuids=uuids,
                )
            )
        arg_groups.sort(key=lambda g: (g.group_key, g.member_uuids[0]))
        configs.append(
            Configuration(
                part_id=part.part_id,
                config_id=root.uuid,
                provided=meet(ctx, root.provides, part.part_types),
                arg_groups=tuple(arg_groups),
            )
        )
    return configs


@dataclass(frozen=True, eq=False)
class Catalog:
    """Immutable part repository with derived configuration and uuid indexes."""

    ctx: TaxonomyContext
    parts: Mapping[str, Part]
    configurations: Mapping[str, tuple[Configuration, ...]]
    jo_index: Mapping[str, tuple[str, JointOrigin]]

    def part(self, part_id: str) -> Part:
        got = self.parts.get(part_id)
        if got is None:
            raise UnknownPart(f"no part {part_id!r} in catalog")
        return got

    def joint_origin(self, uuid: str) -> JointOrigin:
        got = self.jo_index.get(uuid)
        if got is None:
            raise UnknownJointOrigin(f"no joint origin {uuid!r} in catalog")
        return got[1]

    def owner_of(self, uuid: str) -> str:
        """Part id owning a joint origin uuid."""
        got = self.jo_index.get(uuid)
        if got is None:
            raise UnknownJointOrigin(f"no joint origin {uuid!r} in catalog")
        return got[0]

    def configuration(self, part_id: str, config_id: str) -> Configuration:
        for cfg in self.configurations.get(part_id, ()):
            if cfg.config_id == config_id:
                return cfg
        raise UnknownPart(f"no configuration {part_id!r}/{config_id!r} in catalog")

    def all_configurations(self) -> list[Configuration]:
        return [cfg for pid in self.parts for cfg in self.configurations[pid]]


def make_catalog(ctx: TaxonomyContext, parts: Iterable[Part]) -> Catalog:
    """Validate parts together and index them; rejects cross-part uuid clashes."""
    by_id: dict[str, Part] = {}
    for part in parts:
        if part.part_id in by_id:
            raise InvalidPart(f"duplicate part id {part.part_id!r}")
        by_id[part.part_id] = part
    by_id = dict(sorted(by_id.items()))

    jo_index: dict[str, tuple[str, JointOrigin]] = {}
    for part in by_id.values():
        for jo in part.joint_origins:
            if jo.uuid in jo_index:
                raise DuplicateUuid(
                    f"joint origin uuid {jo.uuid!r} appears in both "
                    f"{jo_index[jo.uuid][0]!r} and {part.part_id!r}"
                )
            jo_index[jo.uuid] = (part.part_id, jo)

    configs = {pid: tuple(derive_configurations(ctx, part)) for pid, part in by_id.items()}
    return Catalog(ctx, by_id, configs, jo_index)


def set_cost(catalog: Catalog, part_id: str, cost: float) -> Catalog:
    if cost < 0:
        raise NegativeCost(f"cost {cost} for {part_id!r} is negative")
    part = catalog.part(part_id)
    return upsert_part(catalog, replace(part, unit_cost=float(cost)))


def upsert_part(catalog: Catalog, part: Part) -> Catalog:
    parts = dict(catalog.parts)
    parts[part.part_id] = part
    return make_catalog(catalog.ctx, parts.values())


def remove_part(catalog: Catalog, part_id: str) -> Catalog:
    parts = dict(catalog.parts)
    if part_id not in parts:
        raise UnknownPart(f"no part {part_id!r} in catalog")
    del parts[part_id]
    return make_catalog(catalog.ctx, parts.values())


def with_context(catalog: Catalog, ctx: TaxonomyContext) -> Catalog:
    """Revalidate the same parts against a different taxonomy context."""
    return make_catalog(ctx, catalog.parts.values())


def _opt_type_to_json(expr: TypeExpr | None) -> dict | None:
    return None if expr is None else type_to_json(expr)


def part_to_json(part: Part) -> dict:
    """Canonical part document: joint origins sorted by uuid, types sorted."""
    return {
        "partId": part.part_id,
        "name": part.name,
        "partTypes": type_to_json(part.part_types),
        "unitCost": part.unit_cost,
        "jointOrigins": [
            {
                "uuid": jo.uuid,
                "label": jo.label,
                "frame": pose_to_json(jo.frame),
                "provides": _opt_type_to_json(jo.provides),
                "requires": _opt_type_to_json(jo.requires),
                "jointKind": jo.joint_kind,
                "groupId": jo.group_id,
            }
            for jo in sorted(part.joint_origins, key=lambda j: j.uuid)
        ],
    }


_PART_KEYS = {"partId", "name", "partTypes", "unitCost", "jointOrigins"}
_JO_KEYS = {"uuid", "label", "frame", "provides", "requires", "jointKind", "groupId"}


def _require_str(doc: dict, key: str, where: str) -> str:
    val = doc.get(key)
    if not isinstance(val, str) or not val:
        raise SchemaViolation(f"{where} {key!r} must be a non-empty string")
    return val


def part_from_json(doc: object) -> Part:
    if not isinstance(doc, dict):
        raise SchemaViolation("part document must be an object")
    extra = set(doc) - _PART_KEYS
    if extra:
        raise SchemaViolation(f"unexpected part keys {sorted(extra)}")
    part_id = _require_str(doc, "partId", "part")
    name = _require_str(doc, "name", "part")
    raw_types = doc.get("partTypes")
    part_types = TOP if raw_types is None else type_from_json(raw_types)
    cost = doc.get("unitCost")
    if cost is not None and not isinstance(cost, (int, float)):
        raise SchemaViolation("part 'unitCost' must be a number or null")
    if cost is not None and cost < 0:
        raise SchemaViolation(f"part 'unitCost' must be non-negative, got {cost}")
    jos_doc = doc.get("jointOrigins", [])
    if not isinstance(jos_doc, list):
        raise SchemaViolation("part 'jointOrigins' must be a list")
    jos = []
    for jd in jos_doc:
        if not isinstance(jd, dict):
            raise SchemaViolation("joint origin must be an object")
        extra = set(jd) - _JO_KEYS
        if extra:
            raise SchemaViolation(f"unexpected joint origin keys {sorted(extra)}")
        uuid = _require_str(jd, "uuid", "joint origin")
        label = jd.get("label", "")
        if not isinstance(label, str):
            raise SchemaViolation("joint origin 'label' must be a string")
        frame = pose_from_json(jd.get("frame"))
        provides = jd.get("provides")
        requires = jd.get("requires")
        kind = jd.get("jointKind", "rigid")
        if kind not in JOINT_KINDS:
            raise SchemaViolation(f"joint origin 'jointKind' must be one of {list(JOINT_KINDS)}")
        group = jd.get("groupId")
        if group is not None and (not isinstance(group, str) or not group):
            raise SchemaViolation("joint origin 'groupId' must be a non-empty string or null")
        jos.append(
            JointOrigin(
                uuid=uuid,
                label=label,
                frame=frame,
                provides=None if provides is None else type_from_json(provides),
                requires=None if requires is None else type_from_json(requires),
                joint_kind=kind,
                group_id=group,
            )
        )
    return Part(
        part_id=part_id,
        name=name,
        part_types=part_types,
        unit_cost=None if cost is None else float(cost),
        joint_origins=tuple(jos),
    )


def load_part(ctx: TaxonomyContext, doc: object) -> Part:
    """Parse and resolve a part document against the taxonomies."""
    part = part_from_json(doc)
    unknown = check_known(ctx, part.part_types)
    for jo in part.joint_origins:
        for expr in (jo.provides, jo.requires):
            if expr is not None:
                unknown.extend(check_known(ctx, expr))
    if unknown:
        a = sorted(unknown)[0]
        raise UnknownAtom(f"part {part.part_id!r} references unknown atom {a.name!r} in {a.hierarchy}")
    return part


def save_part(part: Part) -> str:
    return json.dumps(part_to_json(part), indent=2) + "\n"


def load_catalog(ctx: TaxonomyContext, directory: Path | str) -> Catalog:
    """Aggregate every *.json part file in a directory."""
    directory = Path(directory)
    parts = []
    for path in sorted(directory.glob("*.json")):
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise SchemaViolation(f"{path.name}: invalid JSON ({exc})") from exc
        parts.append(load_part(ctx, doc))
    return make_catalog(ctx, parts)


def load_workspace(data_dir: Path | str) -> tuple[TaxonomyContext, Catalog]:
    """Load a data directory: taxonomies.json plus a parts/ subdirectory."""
    data_dir = Path(data_dir)
    tax_path = data_dir / "taxonomies.json"
    if tax_path.exists():
        ctx = load_taxonomies(json.loads(tax_path.read_text()))
    else:
        ctx = load_taxonomies([])
    parts_dir = data_dir / "parts"
    if parts_dir.is_dir():
        catalog = load_catalog(ctx, parts_dir)
    else:
        catalog = make_catalog(ctx, ())
    return ctx, catalog
