#!/usr/bin/env python3
"""Writes the hand-built fixtures and checks them independently of the library.

Meshes with annotations (small enough for the exact oracle):
  p3_small       pseudo-projective space P3, 55 cells
  rp2_pair       two copies of the 6-vertex RP^2 glued along a 3-cycle, 56 cells
  twodisk_small  disks of degree 2 and 3 on one circle, 80 cells

Closed surfaces with homology computed by sympy:
  rp2_6, torus_7, klein_9

Run with --check to compare against the committed files instead of writing.
"""

import argparse
import itertools
import json
import sys
from pathlib import Path

from sympy import Matrix, ZZ, GF
from sympy.matrices.normalforms import smith_normal_form
from sympy.polys.matrices import DomainMatrix

HERE = Path(__file__).resolve().parent

RP2_6 = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
         (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]


def torus_7():
    out = []
    for i in range(7):
        out.append((i, (i + 1) % 7, (i + 3) % 7))
        out.append((i, (i + 2) % 7, (i + 3) % 7))
    return out


def klein_9():
    # 3x3 grid, (a, 3) ~ (3 - a, 0) and (3, b) ~ (0, b)
    def vid(a, b):
        if b == 3:
            a, b = 3 - a, 0
        return 3 * (a % 3) + b

    out = []
    for a in range(3):
        for b in range(3):
            out.append((vid(a, b), vid(a + 1, b), vid(a + 1, b + 1)))
            out.append((vid(a, b), vid(a, b + 1), vid(a + 1, b + 1)))
    return out


# --- complexes -----------------------------------------------------------------

def closure(triangles):
    tris = sorted({tuple(sorted(t)) for t in triangles})
    assert len(tris) == len(triangles), "duplicate triangle"
    for t in tris:
        assert len(set(t)) == 3, f"degenerate triangle {t}"
    edges = sorted({e for t in tris for e in itertools.combinations(t, 2)})
    verts = sorted({v for t in tris for v in t})
    return verts, edges, tris


def check_closed_surface(triangles):
    verts, edges, tris = closure(triangles)
    for e in edges:
        n = sum(1 for t in tris if set(e) <= set(t))
        assert n == 2, f"edge {e} has {n} faces"
    for v in verts:
        # the link of v must be one cycle
        link = [tuple(x for x in t if x != v) for t in tris if v in t]
        adj = {}
        for a, b in link:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        assert all(len(n) == 2 for n in adj.values()), f"link of {v} is not a cycle"
        seen, stack = set(), [next(iter(adj))]
        while stack:
            x = stack.pop()
            if x not in seen:
                seen.add(x)
                stack.extend(adj[x])
        assert len(seen) == len(adj), f"link of {v} is disconnected"


def boundary(verts, edges, tris):
    vi = {v: i for i, v in enumerate(verts)}
    ei = {e: i for i, e in enumerate(edges)}
    d1 = [[0] * len(edges) for _ in verts]
    for j, (a, b) in enumerate(edges):
        d1[vi[a]][j] -= 1
        d1[vi[b]][j] += 1
    d2 = [[0] * len(tris) for _ in edges]
    for j, (a, b, c) in enumerate(tris):
        d2[ei[(a, b)]][j] += 1
        d2[ei[(a, c)]][j] -= 1
        d2[ei[(b, c)]][j] += 1
    return d1, d2


def divisors(m):
    if not m or not m[0]:
        return []
    s = smith_normal_form(Matrix(m), domain=ZZ)
    return [abs(int(s[i, i])) for i in range(min(s.shape)) if s[i, i] != 0]


def rank_mod(m, p):
    if not m or not m[0]:
        return 0
    return DomainMatrix.from_Matrix(Matrix(m)).convert_to(GF(p)).rank()


def homology(verts, edges, tris):
    d1, d2 = boundary(verts, edges, tris)
    assert (Matrix(d1) * Matrix(d2)).is_zero_matrix
    s1, s2 = divisors(d1), divisors(d2)
    n0, n1, n2 = len(verts), len(edges), len(tris)
    out = {"d1": d1, "d2": d2, "snf_d1": s1, "snf_d2": s2}
    r1, r2 = len(s1), len(s2)
    out["Z"] = {"betti": [n0 - r1, n1 - r1 - r2, n2 - r2], "torsion": [d for d in s2 if d > 1]}
    out["Q"] = out["Z"]["betti"]
    for p in (2, 3, 5):
        q1, q2 = rank_mod(d1, p), rank_mod(d2, p)
        out[f"F{p}"] = [n0 - q1, n1 - q1 - q2, n2 - q2]
    return out


# --- annotated stratifold meshes ------------------------------------------------

def p3_faces(c, x, y):
    """Disk whose 9-edge boundary wraps three times around the circle c."""
    b = [c[k % 3] for k in range(9)]
    out = []
    for k in range(3):
        out.append((x[k], b[3 * k], b[3 * k + 1]))
        out.append((x[k], b[3 * k + 1], b[3 * k + 2]))
    out += [(b[2], b[3], y[0]), (b[5], b[6], y[1]), (b[8], b[0], y[2])]
    out += [(x[0], b[2], y[0]), (y[0], b[3], x[1]), (x[1], b[5], y[1]),
            (y[1], b[6], x[2]), (x[2], b[8], y[2]), (y[2], b[0], x[0])]
    out += [(x[0], y[0], x[1]), (x[1], y[1], x[2]), (x[2], y[2], x[0]), (x[0], x[1], x[2])]
    return out


def rp2_disk_faces(circle, rest):
    """RP^2 cut open along the 3-cycle (1, 2, 4): a disk of degree 2."""
    names = {1: circle[0], 2: circle[1], 4: circle[2], 3: rest[0], 5: rest[1], 6: rest[2]}
    return [tuple(names[v] for v in t) for t in RP2_6]


def annotate(surfaces, circle, circle_id):
    """surfaces: list of face lists. The circle vertices are the only boundary."""
    faces = [f for s in surfaces for f in s]
    verts, edges, tris = closure(faces)
    cset = set(circle)
    circle_edges = {tuple(sorted(e)) for e in itertools.combinations(circle, 2)}
    surf_of_face = {}
    for i, s in enumerate(surfaces):
        for f in s:
            surf_of_face[tuple(sorted(f))] = i
    lines = ["# roles"]
    role = {}
    for v in verts:
        lines.append(f"vrole {v} {'B' if v in cset else 'I'}")
    for e in edges:
        a, b = e
        if e in circle_edges:
            r = "B"
        elif a in cset and b in cset:
            r = "X"
        elif a in cset or b in cset:
            r = "D"
        else:
            r = "I"
        role[e] = r
        lines.append(f"erole {a} {b} {r}")
    lines.append("# circles")
    for v in circle:
        lines.append(f"circ v {v} {circle_id}")
    for e in sorted(circle_edges):
        lines.append(f"circ e {e[0]} {e[1]} {circle_id}")
    lines.append("# surfaces")
    for v in verts:
        if v in cset:
            continue
        s = {surf_of_face[t] for t in tris if v in t}
        assert len(s) == 1
        lines.append(f"surf v {v} {s.pop()}")
    for e in edges:
        if e in circle_edges:
            continue
        s = {surf_of_face[t] for t in tris if set(e) <= set(t)}
        assert len(s) == 1, f"edge {e} touches several surfaces"
        lines.append(f"surf e {e[0]} {e[1]} {s.pop()}")
    for t in tris:
        lines.append(f"surf t {t[0]} {t[1]} {t[2]} {surf_of_face[t]}")
    lines.append("# polygons")
    # polygons: faces of one surface joined across I and D edges
    parent = {t: t for t in tris}

    def find(t):
        while parent[t] != t:
            t = parent[t]
        return t

    for e in edges:
        if role[e] not in "ID":
            continue
        cof = [t for t in tris if set(e) <= set(t)]
        for t in cof[1:]:
            if surf_of_face[t] == surf_of_face[cof[0]]:
                parent[find(t)] = find(cof[0])
    number = {}
    for t in tris:
        s = surf_of_face[t]
        key = find(t)
        if key not in number:
            number[key] = sum(1 for k in number if surf_of_face[k] == s)
        lines.append(f"poly t {t[0]} {t[1]} {t[2]} {s} {number[key]}")
    mesh = [f"# {len(verts)} vertices, {len(edges)} edges, {len(tris)} triangles"]
    mesh += [f"v {v}" for v in verts] + [f"e {a} {b}" for a, b in edges] + [f"t {a} {b} {c}" for a, b, c in tris]
    for e in circle_edges:
        sheets = [sum(1 for t in s if set(e) <= set(t)) for s in surfaces]
        assert all(n >= 2 for n in sheets)
    return "\n".join(mesh) + "\n", "\n".join(lines) + "\n", len(verts) + len(edges) + len(tris)


def spec(surfaces):
    return json.dumps({"circles": ["c"], "surfaces": [
        {"genus": 0, "attachments": [{"circle": "c", "degree": d}]} for d in surfaces]}) + "\n"


def build():
    files = {}
    c = (0, 1, 2)
    mesh, ann, cells = annotate([p3_faces(c, (3, 4, 5), (6, 7, 8))], c, "c")
    assert cells == 55
    files["p3_small.mesh"], files["p3_small.ann"], files["p3.json"] = mesh, ann, spec([3])

    mesh, ann, cells = annotate([rp2_disk_faces(c, (3, 4, 5)), rp2_disk_faces(c, (6, 7, 8))], c, "c")
    assert cells == 56
    files["rp2_pair.mesh"], files["rp2_pair.ann"], files["rp2_pair.json"] = mesh, ann, spec([2, 2])

    mesh, ann, cells = annotate([rp2_disk_faces(c, (3, 4, 5)), p3_faces(c, (6, 7, 8), (9, 10, 11))], c, "c")
    assert cells == 80
    files["twodisk_small.mesh"], files["twodisk_small.ann"], files["twodisks.json"] = mesh, ann, spec([2, 3])

    for name, tris in (("rp2_6", RP2_6), ("torus_7", torus_7()), ("klein_9", klein_9())):
        check_closed_surface(tris)
        verts, edges, faces = closure(tris)
        files[f"{name}.mesh"] = "\n".join([f"v {v}" for v in verts] + [f"e {a} {b}" for a, b in edges] +
                                          [f"t {a} {b} {c}" for a, b, c in faces]) + "\n"
        h = homology(verts, edges, faces)
        h["vertices"], h["edges"], h["triangles"] = verts, [list(e) for e in edges], [list(t) for t in faces]
        files[f"{name}.homology.json"] = json.dumps(h, sort_keys=True) + "\n"
    return files


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args()
    files = build()
    bad = 0
    for name, text in sorted(files.items()):
        path = HERE / name
        if args.check:
            if not path.exists() or path.read_text() != text:
                print(f"stale: {name}")
                bad += 1
        else:
            path.write_text(text)
    if args.check:
        print("fixtures up to date" if not bad else f"{bad} stale fixture(s)")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
