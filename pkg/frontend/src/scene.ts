// Renders a posed placement list as a 2.5D SVG drawing. No meshes exist in
// the artifact, so the picture is the kinematic structure itself: one marker
// per occurrence colored by rigid link, connection lines per joint, and an
// arrow along every revolute axis.

import type { PartDoc, ProgramDoc, SceneEntry } from "./api.js";

type Vec3 = [number, number, number];
type Quat = [number, number, number, number]; // [w, x, y, z]

function qmul(a: Quat, b: Quat): Quat {
  const [aw, ax, ay, az] = a;
  const [bw, bx, by, bz] = b;
  return [
    aw * bw - ax * bx - ay * by - az * bz,
    aw * bx + ax * bw + ay * bz - az * by,
    aw * by - ax * bz + ay * bw + az * bx,
    aw * bz + ax * by - ay * bx + az * bw,
  ];
}

function qrot(q: Quat, v: Vec3): Vec3 {
  const [w, x, y, z] = q;
  const [vx, vy, vz] = v;
  // v' = v + 2 * cross(q.xyz, cross(q.xyz, v) + w * v)
  const cx = y * vz - z * vy + w * vx;
  const cy = z * vx - x * vz + w * vy;
  const cz = x * vy - y * vx + w * vz;
  return [
    vx + 2 * (y * cz - z * cy),
    vy + 2 * (z * cx - x * cz),
    vz + 2 * (x * cy - y * cx),
  ];
}

function add(a: Vec3, b: Vec3): Vec3 {
  return [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
}

function scale(v: Vec3, s: number): Vec3 {
  return [v[0] * s, v[1] * s, v[2] * s];
}

// Isometric-style projection, z up on screen.
const COS30 = Math.cos(Math.PI / 6);
const SIN30 = Math.sin(Math.PI / 6);

function project(p: Vec3): [number, number] {
  return [(p[0] - p[1]) * COS30, (p[0] + p[1]) * SIN30 - p[2]];
}

const LINK_PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

export function linkColor(linkIndex: number): string {
  return LINK_PALETTE[linkIndex % LINK_PALETTE.length] as string;
}

function fmt(n: number): string {
  const v = n.toFixed(2);
  return v === "-0.00" ? "0.00" : v;
}

export interface SceneModel {
  entries: SceneEntry[];
  program: ProgramDoc;
  partsById: Map<string, PartDoc>;
}

/** Deterministic SVG markup for one posed assembly. */
export function renderScene(model: SceneModel): string {
  const { entries, program, partsById } = model;
  const byOcc = new Map(entries.map((e) => [e.occ, e]));
  const linkOf = new Map(program.moves);
  const linkIndex = new Map(program.links.map((link, i) => [link, i]));

  const points: [number, number][] = [];
  const shapes: string[] = [];

  const projected = (occ: string): [number, number] | null => {
    const entry = byOcc.get(occ);
    if (!entry) {
      return null;
    }
    const p = project(entry.origin);
    points.push(p);
    return p;
  };

  for (const [kind, parent, , child] of program.joints) {
    const a = projected(parent);
    const b = projected(child);
    if (!a || !b) {
      continue;
    }
    const cls = kind === "revolute" ? "joint revolute" : "joint rigid";
    const dash = kind === "rigid" ? ' stroke-dasharray="4 3"' : "";
    shapes.push(
      `<line class="${cls}" x1="${fmt(a[0])}" y1="${fmt(a[1])}" x2="${fmt(b[0])}" y2="${fmt(b[1])}" stroke="#555" stroke-width="1.5"${dash}/>`,
    );
  }

  // Revolute axis arrows: the axis is the z direction of the child's mated
  // joint-origin frame, drawn from that frame's position.
  for (const [kind, , , child, childJo] of program.joints) {
    if (kind !== "revolute") {
      continue;
    }
    const entry = byOcc.get(child);
    const part = entry ? partsById.get(entry.partId) : undefined;
    const jo = part?.jointOrigins.find((j) => j.uuid === childJo);
    if (!entry || !jo) {
      continue;
    }
    const base = add(entry.origin, qrot(entry.quaternion, jo.frame.origin));
    const dir = qrot(qmul(entry.quaternion, jo.frame.quaternion), [0, 0, 1]);
    const tip = add(base, scale(dir, 18));
    const a = project(base);
    const b = project(tip);
    points.push(a, b);
    shapes.push(
      `<line class="axis" x1="${fmt(a[0])}" y1="${fmt(a[1])}" x2="${fmt(b[0])}" y2="${fmt(b[1])}" stroke="#c33" stroke-width="2" marker-end="url(#arrow)"/>`,
    );
  }

  for (const entry of entries) {
    const p = project(entry.origin);
    points.push(p);
    const link = linkOf.get(entry.occ) ?? "";
    const color = linkColor(linkIndex.get(link) ?? 0);
    // orientation whisker along the occurrence frame's x axis, so pure
    // rotations (a coaxial stack spinning in place) stay visible
    const tip = project(add(entry.origin, qrot(entry.quaternion, [12, 0, 0])));
    points.push(tip);
    shapes.push(
      `<line class="whisker" x1="${fmt(p[0])}" y1="${fmt(p[1])}" x2="${fmt(tip[0])}" y2="${fmt(tip[1])}" stroke="${color}" stroke-width="1"/>`,
      `<circle class="occ" data-occ="${entry.occ}" data-link="${link}" cx="${fmt(p[0])}" cy="${fmt(p[1])}" r="5" fill="${color}"><title>${entry.partId} (${entry.occ}) on ${link}</title></circle>`,
    );
  }

  const xs = points.map((p) => p[0]);
  const ys = points.map((p) => p[1]);
  const pad = 24;
  const minX = Math.min(0, ...xs) - pad;
  const minY = Math.min(0, ...ys) - pad;
  const width = Math.max(1, ...xs.map((x) => x - minX)) + pad;
  const height = Math.max(1, ...ys.map((y) => y - minY)) + pad;

  return (
    `<svg xmlns="http://www.w3.org/2000/svg" class="scene" viewBox="${fmt(minX)} ${fmt(minY)} ${fmt(width)} ${fmt(height)}">` +
    `<defs><marker id="arrow" viewBox="0 0 10 10" refX="8" refY="5" markerWidth="6" markerHeight="6" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="#c33"/></marker></defs>` +
    shapes.join("") +
    `</svg>`
  );
}
