"""Build the toy robot-arm workspace from scratch and write it to disk.

Walks through the full annotation workflow: define the three taxonomies,
annotate each part's joint origins with provided and required types, and
save everything as a workspace directory (taxonomies.json + parts/). The
bundled data shipped with the package is generated by exactly this script.

Run:  python3 demos/build_toyarm_catalog.py [out_dir]
"""

import json
import math
import sys
from pathlib import Path

from asmsynth import (
    JointOrigin,
    Part,
    json_text,
    load_taxonomies,
    make_atom,
    make_catalog,
    pose,
    rot_x,
    save_part,
    save_taxonomies,
    type_expr,
    validate_part,
)

# Three hierarchies. formats describe mating geometry (what physically
# connects to what); parts and attributes describe intent and properties.
TAXONOMIES = [
    {
        "hierarchy": "formats",
        "nodes": ["bolt-iface", "motor-flange", "rotor-mount", "uni-plate", "world-mount"],
        "edges": [
            ["motor-flange", "bolt-iface"],
            ["rotor-mount", "bolt-iface"],
            ["uni-plate", "motor-flange"],  # a universal plate fits either seat
            ["uni-plate", "rotor-mount"],
            ["world-mount", "bolt-iface"],
        ],
    },
    {
        "hierarchy": "parts",
        "nodes": [
            "Actuator", "Arm", "ArmBase", "Bracket", "Effector",
            "Extension", "Gripper", "Motor", "Structural", "VacuumTool",
        ],
        "edges": [
            ["ArmBase", "Structural"],
            ["Bracket", "Structural"],
            ["Extension", "Structural"],
            ["Gripper", "Effector"],
            ["Motor", "Actuator"],
            ["VacuumTool", "Effector"],
        ],
    },
    {
        "hierarchy": "attributes",
        "nodes": ["Aluminum", "Capability", "HighTorque", "Material", "SelfRotate", "Steel"],
        "edges": [
            ["Aluminum", "Material"],
            ["HighTorque", "Capability"],
            ["SelfRotate", "Capability"],
            ["Steel", "Material"],
        ],
    },
]


def fmt(name):
    return make_atom("formats", name)


def par(name):
    return make_atom("parts", name)


def attr(name):
    return make_atom("attributes", name)


# Frame conventions: part-local origin at the bottom mating face; provided
# frames point z out of the part (down, a half-turn about x), required
# frames point z out of the receiving face.
DOWN = (0.0, 1.0, 0.0, 0.0)
SIDE = rot_x(-math.pi / 2).quaternion  # z toward +y, for the elbow seat


def toyarm_parts():
    return [
        Part(
            "base-plate", "Base plate", type_expr(par("Arm"), par("ArmBase")), 20.0,
            (
                JointOrigin("base-root", "Floor mount", pose((0, 0, 0), DOWN), provides=type_expr(fmt("world-mount"))),
                JointOrigin("base-seat", "Motor seat", pose((0, 0, 12)), requires=type_expr(fmt("motor-flange"))),
            ),
        ),
        Part(
            "motor-basic", "Compact motor", type_expr(par("Motor"), attr("Steel")), 25.0,
            (
                JointOrigin("mb-flange", "Stator flange", pose((0, 0, 0), DOWN), provides=type_expr(fmt("motor-flange"))),
                JointOrigin("mb-rotor", "Rotor face", pose((0, 0, 40)), requires=type_expr(fmt("rotor-mount")), joint_kind="revolute"),
            ),
        ),
        Part(
            "motor-strong", "High-torque motor", type_expr(par("Motor"), attr("Steel"), attr("HighTorque")), 60.0,
            (
                JointOrigin("ms-flange", "Stator flange", pose((0, 0, 0), DOWN), provides=type_expr(fmt("motor-flange"))),
                JointOrigin("ms-rotor", "Rotor face", pose((0, 0, 55)), requires=type_expr(fmt("rotor-mount")), joint_kind="revolute"),
            ),
        ),
        Part(
            "bracket-straight", "Straight bracket", type_expr(par("Bracket"), attr("Aluminum")), 8.0,
            (
                JointOrigin("bs-foot", "Rotor foot", pose((0, 0, 0), DOWN), provides=type_expr(fmt("rotor-mount"))),
                JointOrigin("bs-seat", "Motor seat", pose((0, 0, 30)), requires=type_expr(fmt("motor-flange"))),
            ),
        ),
        Part(
            "bracket-elbow", "Elbow bracket", type_expr(par("Bracket"), attr("Aluminum")), 9.5,
            (
                JointOrigin("be-foot", "Rotor foot", pose((0, 0, 0), DOWN), provides=type_expr(fmt("rotor-mount"))),
                JointOrigin("be-seat", "Side motor seat", pose((0, 25, 25), SIDE), requires=type_expr(fmt("motor-flange"))),
            ),
        ),
        Part(
            "bracket-rotate", "Slew bracket", type_expr(par("Bracket"), attr("SelfRotate")), 30.0,
            (
                JointOrigin("br-foot", "Rotor foot", pose((0, 0, 0), DOWN), provides=type_expr(fmt("rotor-mount"))),
                JointOrigin("br-seat", "Motor seat", pose((0, 0, 20)), requires=type_expr(fmt("motor-flange"))),
            ),
        ),
        Part(
            "link-ext", "Extension tube", type_expr(par("Extension"), attr("Aluminum")), 12.0,
            (
                JointOrigin("le-base", "Tube base", pose((0, 0, 0), DOWN), provides=type_expr(fmt("motor-flange"))),
                JointOrigin("le-top", "Tube top", pose((0, 0, 60)), requires=type_expr(fmt("motor-flange"))),
            ),
        ),
        Part(
            "gripper", "Parallel gripper", type_expr(par("Gripper")), 45.0,
            (
                JointOrigin("gr-mount", "Mount plate", pose((0, 0, 0), DOWN), provides=type_expr(fmt("rotor-mount"))),
            ),
        ),
        Part(
            "suction-cup", "Suction cup", type_expr(par("VacuumTool")), 18.0,
            (
                JointOrigin("sc-mount", "Mount plate", pose((0, 0, 0), DOWN), provides=type_expr(fmt("rotor-mount"))),
            ),
        ),
    ]


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("toyarm-data")
    ctx = load_taxonomies(TAXONOMIES)
    parts = toyarm_parts()
    for part in parts:
        diags = validate_part(ctx, part)
        assert not diags, diags
    make_catalog(ctx, parts)  # raises if anything is inconsistent

    (out / "parts").mkdir(parents=True, exist_ok=True)
    (out / "taxonomies.json").write_text(json_text(save_taxonomies(ctx)))
    for part in parts:
        (out / "parts" / f"{part.part_id}.json").write_text(save_part(part))
    print(f"wrote workspace with {len(parts)} parts to {out}")


if __name__ == "__main__":
    main()
