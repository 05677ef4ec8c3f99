"""Stereographic images of the torus and its asymptotic lines (OBJ / CSV)."""

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import PoleSingularity
from .flow import Branch, integrate_line
from .surface import perturbed_point

POLE_TOL = 1e-9


def stereographic(p):
    """Project S^3 minus (0,0,0,1) to R^3: (x1, x2, x3) / (1 - x4)."""
    p = np.asarray(p, dtype=float)
    denom = 1.0 - p[..., 3]
    if np.any(np.abs(denom) < POLE_TOL):
        raise PoleSingularity("point within 1e-9 of the projection pole")
    return p[..., :3] / denom[..., None]


def inverse_stereographic(x):
    x = np.asarray(x, dtype=float)
    r2 = np.sum(x * x, axis=-1)[..., None]
    return np.concatenate([2.0 * x, r2 - 1.0], axis=-1) / (r2 + 1.0)


@dataclass
class ProjectedMesh:
    vertices: np.ndarray
    quads: np.ndarray
    polylines: list = field(default_factory=list)

    def validate(self):
        if not np.all(np.isfinite(self.vertices)):
            raise ValueError("non-finite vertex coordinates")
        n = len(self.vertices)
        if self.quads.size and (self.quads.min() < 0 or self.quads.max() >= n):
            raise ValueError("quad index out of range")
        for line in self.polylines:
            if len(line) and (min(line) < 0 or max(line) >= n):
                raise ValueError("polyline index out of range")

    def write_obj(self, path):
        with open(path, "w", newline="\n") as fh:
            for x, y, z in self.vertices:
                fh.write(f"v {x:.17g} {y:.17g} {z:.17g}\n")
            for q in self.quads + 1:
                fh.write("f {} {} {} {}\n".format(*q))
            for line in self.polylines:
                fh.write("l " + " ".join(str(i + 1) for i in line) + "\n")


def torus_mesh(eps, h, n, allow_large_eps=False):
    """n x n quad mesh of the projected surface, wrapping in both directions."""
    if n < 8:
        raise ValueError("grid size must be at least 8")
    t = 2.0 * np.pi * np.arange(n) / n
    U, V = np.meshgrid(t, t, indexing="ij")
    verts = stereographic(perturbed_point(U, V, eps, h, allow_large_eps)).reshape(-1, 3)
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    i1, j1 = (i + 1) % n, (j + 1) % n
    quads = np.stack([i * n + j, i1 * n + j, i1 * n + j1, i * n + j1], axis=-1).reshape(-1, 4)
    mesh = ProjectedMesh(verts, quads)
    mesh.validate()
    return mesh


def export_mesh(eps, h, n, path, allow_large_eps=False):
    mesh = torus_mesh(eps, h, n, allow_large_eps)
    mesh.write_obj(path)
    return mesh


def project_curve(curve, h):
    u, v = curve.uv()
    return stereographic(perturbed_point(u, v, curve.eps, h))


def write_polylines_csv(lines, path):
    """Header ``x,y,z``; one row per vertex; a blank line between polylines."""
    with open(path, "w", newline="") as fh:
        fh.write("x,y,z\n")
        for k, pts in enumerate(lines):
            if k:
                fh.write("\n")
            for x, y, z in pts:
                fh.write(f"{x:.17g},{y:.17g},{z:.17g}\n")


def read_polylines_csv(path):
    lines, cur = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        if next(reader) != ["x", "y", "z"]:
            raise ValueError(f"{path}: expected header 'x,y,z'")
        for row in reader:
            if not row:
                if cur:
                    lines.append(np.array(cur))
                cur = []
            else:
                cur.append([float(x) for x in row])
    if cur:
        lines.append(np.array(cur))
    return lines


def export_lines(eps, h, branch, starts, span, path, opts=None):
    """Integrate, project and write asymptotic lines.

    ``starts`` are chart points (u0, v0). Writes ``path`` as CSV and the same
    polylines as OBJ ``l`` records next to it (suffix ``.obj``). Returns the
    projected polylines.
    """
    branch = Branch.from_arg(branch)
    lines = [project_curve(integrate_line(u0, v0, branch, eps, h, span, opts), h) for u0, v0 in starts]
    path = Path(path)
    write_polylines_csv(lines, path)
    verts = np.concatenate(lines) if lines else np.zeros((0, 3))
    offsets = np.cumsum([0] + [len(x) for x in lines])
    mesh = ProjectedMesh(verts, np.zeros((0, 4), dtype=int),
                         [list(range(offsets[k], offsets[k + 1])) for k in range(len(lines))])
    mesh.validate()
    mesh.write_obj(path.with_suffix(".obj"))
    return lines


def endpoint_gap(line):
    return float(math.dist(line[0], line[-1]))
