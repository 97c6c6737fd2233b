"""Rigid-body poses, frame mating, forward kinematics and scene/URDF export.

Units are millimeters and radians. Quaternions are scalar-first (w, x, y, z)
and kept unit-length; serialization canonicalizes the sign so w >= 0.

Two typed frames mate by anti-aligning their z-axes and aligning their
x-axes: the child is placed so its joint-origin frame equals the parent's
joint-origin frame composed with a rotation of pi about x, then a rotation
of theta about the (shared) z-axis for revolute joints.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .errors import AngleCountMismatch, NonUnitQuaternion, SchemaViolation

if TYPE_CHECKING:  # pragma: no cover
    from .assembly import AssemblyProgram, LinkPartition, OccurrenceTree
    from .catalog import Catalog

UNIT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Pose:
    translation: np.ndarray  # (3,) mm
    quaternion: np.ndarray  # (w, x, y, z), unit


def pose(translation: Sequence[float] = (0.0, 0.0, 0.0), quaternion: Sequence[float] = (1.0, 0.0, 0.0, 0.0)) -> Pose:
    t = np.asarray(translation, dtype=float).reshape(3).copy()
    q = np.asarray(quaternion, dtype=float).reshape(4).copy()
    n = float(np.linalg.norm(q))
    if abs(n - 1.0) > 1e-6:
        raise NonUnitQuaternion(f"|q| = {n}")
    q /= n
    t.setflags(write=False)
    q.setflags(write=False)
    return Pose(t, q)


def identity() -> Pose:
    return pose()


def translate(x: float, y: float, z: float) -> Pose:
    return pose((x, y, z))


def _axis_rot(theta: float, axis: int) -> Pose:
    q = [math.cos(theta / 2.0), 0.0, 0.0, 0.0]
    q[1 + axis] = math.sin(theta / 2.0)
    return pose(quaternion=q)


def rot_x(theta: float) -> Pose:
    return _axis_rot(theta, 0)


def rot_y(theta: float) -> Pose:
    return _axis_rot(theta, 1)


def rot_z(theta: float) -> Pose:
    return _axis_rot(theta, 2)


def _qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ]
    )


def _qconj(q: np.ndarray) -> np.ndarray:
    return np.array([q[0], -q[1], -q[2], -q[3]])


def _qrot(q: np.ndarray, v: np.ndarray) -> np.ndarray:
    # q * (0, v) * q^-1, unit q assumed
    w = q[0]
    u = q[1:]
    return v + 2.0 * np.cross(u, np.cross(u, v) + w * v)


def compose(a: Pose, b: Pose) -> Pose:
    """Apply b in a's frame: the transform mapping b-local points to a's parent frame."""
    q = _qmul(a.quaternion, b.quaternion)
    q = q / np.linalg.norm(q)
    t = a.translation + _qrot(a.quaternion, b.translation)
    return pose(t, q)


def invert(a: Pose) -> Pose:
    qc = _qconj(a.quaternion)
    return pose(-_qrot(qc, a.translation), qc)


def transform_point(a: Pose, v: Sequence[float]) -> np.ndarray:
    return a.translation + _qrot(a.quaternion, np.asarray(v, dtype=float))


FLIP = rot_x(math.pi)


def mate_child_pose(parent_world: Pose, parent_jo_local: Pose, child_jo_local: Pose, theta: float = 0.0) -> Pose:
    """World pose of a child whose joint-origin frame mates the parent's.

    At theta = 0 the two joint-origin frames coincide in origin with
    anti-parallel z and parallel x; theta spins the child about the
    mated z-axis.
    """
    mated = compose(compose(parent_world, parent_jo_local), FLIP)
    if theta != 0.0:
        mated = compose(mated, rot_z(theta))
    return compose(mated, invert(child_jo_local))


@dataclass(frozen=True)
class JointAxis:
    """World-frame rotation axis and pivot of one revolute joint."""

    joint_index: int
    axis: tuple[float, float, float]
    pivot: tuple[float, float, float]


@dataclass(frozen=True, eq=False)
class PosedAssembly:
    tree: "OccurrenceTree"
    poses: dict[str, Pose]
    joint_axes: tuple[JointAxis, ...]


def dof(tree: "OccurrenceTree") -> int:
    """Degrees of freedom: the number of revolute edges."""
    return sum(1 for e in tree.edges if e.kind == "revolute")


def forward_kinematics(
    catalog: "Catalog",
    tree: "OccurrenceTree",
    program: "AssemblyProgram",
    angles: Sequence[float] = (),
) -> PosedAssembly:
    """Pose every occurrence, consuming one angle per revolute program joint.

    The root occurrence is pinned at identity. Rigid joints mate at
    theta = 0; revolute joints consume angles in program-joint order.
    """
    n_rev = sum(1 for j in program.joints if j.kind == "revolute")
    angles = list(angles)
    if len(angles) != n_rev:
        raise AngleCountMismatch(f"expected {n_rev} angles, got {len(angles)}")
    poses: dict[str, Pose] = {tree.root: identity()}
    axes: list[JointAxis] = []
    next_angle = iter(angles)
    for idx, joint in enumerate(program.joints):
        parent_pose = poses[joint.parent]
        parent_frame = catalog.joint_origin(joint.parent_jo).frame
        child_frame = catalog.joint_origin(joint.child_jo).frame
        theta = next(next_angle) if joint.kind == "revolute" else 0.0
        poses[joint.child] = mate_child_pose(parent_pose, parent_frame, child_frame, theta)
        if joint.kind == "revolute":
            mated = compose(compose(parent_pose, parent_frame), FLIP)
            axis = _qrot(mated.quaternion, np.array([0.0, 0.0, 1.0]))
            axes.append(JointAxis(idx, tuple(axis / np.linalg.norm(axis)), tuple(mated.translation)))
    return PosedAssembly(tree, poses, tuple(axes))


def _clean(x: float) -> float:
    return float(x) + 0.0  # normalizes -0.0


def _canonical_quaternion(q: np.ndarray) -> list[float]:
    vals = [float(v) for v in q]
    for v in vals:
        if v != 0.0:
            if v < 0.0:
                vals = [-x for x in vals]
            break
    return [_clean(v) for v in vals]


def pose_to_json(p: Pose) -> dict:
    return {
        "origin": [_clean(v) for v in p.translation],
        "quaternion": _canonical_quaternion(p.quaternion),
    }


def pose_from_json(doc: object) -> Pose:
    if not isinstance(doc, dict) or set(doc) - {"origin", "quaternion"}:
        raise SchemaViolation("frame must be {origin, quaternion}")
    origin = doc.get("origin")
    quat = doc.get("quaternion")
    if not (isinstance(origin, list) and len(origin) == 3):
        raise SchemaViolation("frame origin must be [x, y, z]")
    if not (isinstance(quat, list) and len(quat) == 4):
        raise SchemaViolation("frame quaternion must be [w, x, y, z]")
    return pose(origin, quat)


def export_scene(posed: PosedAssembly) -> str:
    """Flat JSON placement list, one entry per occurrence in pre-order."""
    entries = []
    for occ in posed.tree.nodes:
        p = posed.poses[occ]
        entries.append(
            {
                "occ": occ,
                "partId": posed.tree.nodes[occ].part_id,
                **pose_to_json(p),
            }
        )
    return json.dumps(entries, indent=2) + "\n"


def load_scene(text: str) -> list[dict]:
    doc = json.loads(text)
    if not isinstance(doc, list):
        raise SchemaViolation("scene must be a list")
    return doc


def reexport_scene(entries: list[dict]) -> str:
    """Round-trip helper: serialize a parsed scene back to canonical bytes."""
    out = []
    for e in entries:
        out.append(
            {
                "occ": e["occ"],
                "partId": e["partId"],
                **pose_to_json(pose(e["origin"], e["quaternion"])),
            }
        )
    return json.dumps(out, indent=2) + "\n"


def _rpy_from_quaternion(q: np.ndarray) -> tuple[float, float, float]:
    """Fixed-axis roll/pitch/yaw (URDF convention) of a unit quaternion."""
    w, x, y, z = (float(v) for v in q)
    sinp = 2.0 * (w * y - z * x)
    sinp = max(-1.0, min(1.0, sinp))
    pitch = math.asin(sinp)
    if abs(sinp) >= 1.0 - 1e-12:
        # gimbal lock: fold yaw into roll
        roll = 2.0 * math.atan2(x, w)
        yaw = 0.0
    else:
        roll = math.atan2(2.0 * (w * x + y * z), 1.0 - 2.0 * (x * x + y * y))
        yaw = math.atan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z))
    return roll, pitch, yaw


def _fmt(x: float) -> str:
    return format(_clean(round(x, 9)), ".9g")


def _origin_xml(p: Pose, indent: str) -> str:
    r, pch, y = _rpy_from_quaternion(p.quaternion)
    xyz = " ".join(_fmt(v) for v in p.translation)
    rpy = " ".join(_fmt(v) for v in (r, pch, y))
    return f'{indent}<origin xyz="{xyz}" rpy="{rpy}"/>'


def export_urdf(
    posed: PosedAssembly,
    partition: "LinkPartition",
    catalog: "Catalog",
    name: str = "assembly",
) -> str:
    """URDF document: one link per partition link, one joint per revolute edge.

    Visual elements reference `package://parts/<partId>.stl` as opaque mesh
    names, posed relative to their link frame. Each link's frame is the
    mated joint frame that attaches it (the root link sits at the root
    occurrence pose).
    """
    tree = posed.tree
    link_frames: dict[str, Pose] = {partition.link_of[tree.root]: posed.poses[tree.root]}
    rev_edges = []
    for e in tree.edges:
        if e.kind == "revolute":
            child_link = partition.link_of[e.child]
            frame = compose(posed.poses[e.child], catalog.joint_origin(e.child_jo).frame)
            link_frames[child_link] = frame
            rev_edges.append(e)

    lines = ['<?xml version="1.0"?>', f'<robot name="{name}">']
    for link in partition.links:
        lines.append(f'  <link name="{link}">')
        frame_inv = invert(link_frames[link])
        for occ in tree.nodes:
            if partition.link_of[occ] != link:
                continue
            rel = compose(frame_inv, posed.poses[occ])
            part_id = tree.nodes[occ].part_id
            lines.append("    <visual>")
            lines.append(_origin_xml(rel, "      "))
            lines.append("      <geometry>")
            lines.append(f'        <mesh filename="package://parts/{part_id}.stl"/>')
            lines.append("      </geometry>")
            lines.append("    </visual>")
        lines.append("  </link>")
    for i, e in enumerate(rev_edges):
        parent_link = partition.link_of[e.parent]
        child_link = partition.link_of[e.child]
        joint_rel = compose(invert(link_frames[parent_link]), link_frames[child_link])
        lines.append(f'  <joint name="J{i}" type="revolute">')
        lines.append(f'    <parent link="{parent_link}"/>')
        lines.append(f'    <child link="{child_link}"/>')
        lines.append(_origin_xml(joint_rel, "    "))
        lines.append('    <axis xyz="0 0 1"/>')
        lines.append(f'    <limit lower="{_fmt(-math.pi)}" upper="{_fmt(math.pi)}" effort="1" velocity="1"/>')
        lines.append("  </joint>")
    lines.append("</robot>")
    return "\n".join(lines) + "\n"
