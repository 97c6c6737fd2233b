from __future__ import annotations

import json

import pytest

from asmsynth import (
    DuplicateUuid,
    InvalidPart,
    JointOrigin,
    NegativeCost,
    Part,
    SchemaViolation,
    UnknownAtom,
    delete_node,
    load_part,
    make_atom,
    make_catalog,
    make_context,
    make_taxonomy,
    part_from_json,
    part_to_json,
    pose,
    remove_part,
    save_part,
    set_cost,
    type_expr,
    upsert_part,
    validate_part,
    with_context,
)

CTX = make_context(
    make_taxonomy("formats", ["plug", "socket"], []),
    make_taxonomy("parts", ["Widget", "Gadget"], []),
    make_taxonomy("attributes", ["Shiny"], []),
)

PLUG = type_expr(make_atom("formats", "plug"))
SOCKET = type_expr(make_atom("formats", "socket"))
WIDGET = type_expr(make_atom("parts", "Widget"))


def jo(uuid, *, provides=None, requires=None, kind="rigid", group=None):
    return JointOrigin(
        uuid, uuid, pose(), provides=provides, requires=requires,
        joint_kind=kind, group_id=group,
    )


def widget(part_id="w1", cost=1.0, jos=None, types=WIDGET):
    if jos is None:
        jos = (jo("w1-root", provides=PLUG),)
    return Part(part_id, part_id.title(), types, cost, tuple(jos))


def errors_of(part):
    return [d for d in validate_part(CTX, part) if d.severity == "error"]


def test_valid_part_has_no_errors():
    assert errors_of(widget()) == []


def test_joint_origin_needs_exactly_one_role():
    both = widget(jos=[jo("a", provides=PLUG, requires=SOCKET)])
    neither = widget(jos=[jo("a")])
    assert errors_of(both)
    assert errors_of(neither)


def test_unknown_atoms_reported_with_joint_origin():
    bad = widget(jos=[jo("a", provides=type_expr(make_atom("formats", "nope")))])
    diags = errors_of(bad)
    assert diags and diags[0].jo_uuid == "a"
    assert "nope" in diags[0].message


def test_part_types_reject_format_atoms():
    bad = widget(types=type_expr(make_atom("parts", "Widget"), make_atom("formats", "plug")))
    assert errors_of(bad)


def test_negative_cost_rejected():
    assert errors_of(widget(cost=-2.0))


def test_duplicate_uuid_within_part_rejected():
    bad = widget(jos=[jo("a", provides=PLUG), jo("a", requires=SOCKET)])
    assert errors_of(bad)


def test_group_members_must_agree():
    mismatched_type = widget(
        jos=[
            jo("r", provides=PLUG),
            jo("g1", requires=SOCKET, group="g"),
            jo("g2", requires=PLUG, group="g"),
        ]
    )
    mismatched_kind = widget(
        jos=[
            jo("r", provides=PLUG),
            jo("g1", requires=SOCKET, kind="rigid", group="g"),
            jo("g2", requires=SOCKET, kind="revolute", group="g"),
        ]
    )
    provider_in_group = widget(jos=[jo("r", provides=PLUG, group="g")])
    assert errors_of(mismatched_type)
    assert errors_of(mismatched_kind)
    assert errors_of(provider_in_group)


def test_part_without_provider_warns_but_passes():
    sink = widget(jos=[jo("a", requires=SOCKET)])
    diags = validate_part(CTX, sink)
    assert [d.severity for d in diags] == ["warning"]
    catalog = make_catalog(CTX, [sink])
    assert catalog.configurations["w1"] == ()


def test_configurations_one_per_provider():
    part = widget(
        jos=[
            jo("root-b", provides=PLUG),
            jo("root-a", provides=SOCKET),
            jo("need", requires=SOCKET),
        ]
    )
    catalog = make_catalog(CTX, [part])
    configs = catalog.configurations["w1"]
    assert [c.config_id for c in configs] == ["root-a", "root-b"]
    for c in configs:
        assert len(c.arg_groups) == 1
        assert c.arg_groups[0].member_uuids == ("need",)


def test_configuration_provided_type_includes_part_types():
    part = widget(types=type_expr(make_atom("parts", "Widget"), make_atom("attributes", "Shiny")))
    catalog = make_catalog(CTX, [part])
    (config,) = catalog.configurations["w1"]
    assert set(config.provided.atoms) == {
        make_atom("formats", "plug"),
        make_atom("parts", "Widget"),
        make_atom("attributes", "Shiny"),
    }


def test_grouped_requirements_collapse_with_multiplicity():
    part = widget(
        jos=[
            jo("r", provides=PLUG),
            jo("n2", requires=SOCKET, group="pair"),
            jo("n1", requires=SOCKET, group="pair"),
            jo("solo", requires=PLUG),
        ]
    )
    catalog = make_catalog(CTX, [part])
    (config,) = catalog.configurations["w1"]
    assert [g.group_key for g in config.arg_groups] == ["pair", "solo"]
    pair = config.arg_groups[0]
    assert pair.multiplicity == 2
    assert pair.member_uuids == ("n1", "n2")


def test_make_catalog_rejects_duplicate_part_ids():
    with pytest.raises(InvalidPart):
        make_catalog(CTX, [widget(), widget()])


def test_make_catalog_rejects_uuid_reuse_across_parts():
    a = widget("w1", jos=[jo("shared", provides=PLUG)])
    b = widget("w2", jos=[jo("shared", provides=PLUG)])
    with pytest.raises(DuplicateUuid):
        make_catalog(CTX, [a, b])


def test_catalog_lookup_helpers():
    part = widget()
    catalog = make_catalog(CTX, [part])
    assert catalog.part("w1") is part
    assert catalog.owner_of("w1-root") == "w1"
    assert catalog.joint_origin("w1-root").uuid == "w1-root"
    assert catalog.configuration("w1", "w1-root").provided
    with pytest.raises(Exception):
        catalog.part("missing")


def test_set_cost_and_negative_guard():
    catalog = make_catalog(CTX, [widget()])
    catalog = set_cost(catalog, "w1", 7.5)
    assert catalog.part("w1").unit_cost == 7.5
    with pytest.raises(NegativeCost):
        set_cost(catalog, "w1", -1.0)


def test_upsert_and_remove_part():
    catalog = make_catalog(CTX, [widget()])
    other = widget("w2", jos=[jo("w2-root", provides=SOCKET)])
    catalog = upsert_part(catalog, other)
    assert sorted(catalog.parts) == ["w1", "w2"]
    replacement = widget(cost=99.0)
    catalog = upsert_part(catalog, replacement)
    assert catalog.part("w1").unit_cost == 99.0
    catalog = remove_part(catalog, "w1")
    assert sorted(catalog.parts) == ["w2"]


def test_with_context_revalidates_catalog():
    catalog = make_catalog(CTX, [widget()])
    smaller = delete_node(CTX, "plug", "formats")
    with pytest.raises(InvalidPart):
        with_context(catalog, smaller)


def test_part_json_round_trip_and_key_order():
    part = widget(
        jos=[
            jo("b-need", requires=SOCKET, kind="revolute"),
            jo("a-root", provides=PLUG),
        ]
    )
    doc = part_to_json(part)
    assert list(doc) == ["partId", "name", "partTypes", "unitCost", "jointOrigins"]
    assert [j["uuid"] for j in doc["jointOrigins"]] == ["a-root", "b-need"]
    assert list(doc["jointOrigins"][0]) == [
        "uuid", "label", "frame", "provides", "requires", "jointKind", "groupId",
    ]
    again = part_to_json(part_from_json(doc))
    assert again == doc


def test_part_json_rejects_malformed_documents():
    doc = part_to_json(widget())
    broken = dict(doc)
    broken["extra"] = 1
    with pytest.raises(SchemaViolation):
        part_from_json(broken)
    missing = {k: v for k, v in doc.items() if k != "name"}
    with pytest.raises(SchemaViolation):
        part_from_json(missing)
    negative = dict(doc)
    negative["unitCost"] = -3
    with pytest.raises(SchemaViolation):
        part_from_json(negative)
    bad_kind = json.loads(json.dumps(doc))
    bad_kind["jointOrigins"][0]["jointKind"] = "spherical"
    with pytest.raises(SchemaViolation):
        part_from_json(bad_kind)


def test_load_part_rejects_unknown_atoms():
    doc = part_to_json(
        widget(jos=[jo("a", provides=type_expr(make_atom("formats", "mystery")))])
    )
    with pytest.raises(UnknownAtom):
        load_part(CTX, doc)


def test_save_part_is_stable_text():
    part = widget()
    text = save_part(part)
    assert text.endswith("\n")
    assert save_part(part_from_json(json.loads(text))) == text


def test_toy_catalog_loads_cleanly(toy_ctx, toy_catalog):
    assert len(toy_catalog.parts) == 9
    for part in toy_catalog.parts.values():
        assert [d for d in validate_part(toy_ctx, part) if d.severity == "error"] == []
    motor = toy_catalog.configurations["motor-basic"]
    assert len(motor) == 1
    assert motor[0].arg_groups[0].joint_kind == "revolute"
