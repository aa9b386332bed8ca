#!/usr/bin/env python3
"""Generate unstructured Gmsh meshes for the poisson_gmsh and maxwell_gmsh cases.

Writes hexagon_L<l>.msh (regular hexagon with unit circumradius, vertices at
angles i*pi/3 from the y axis) and cube_L<l>.msh (unit cube) with maximal
element size 2^-l, in MSH 4.1 ASCII format.

Usage: gen_gmsh_meshes.py OUTDIR [--hex-levels 1..6] [--cube-levels 1..3]
"""
import argparse
import math
import os
import sys


def level_range(text):
    a, b = text.split("..")
    return range(int(a), int(b) + 1)


def hexagon(gmsh, h):
    pts = [gmsh.model.geo.addPoint(math.sin(i * math.pi / 3), math.cos(i * math.pi / 3), 0, h) for i in range(6)]
    lines = [gmsh.model.geo.addLine(pts[i], pts[(i + 1) % 6]) for i in range(6)]
    loop = gmsh.model.geo.addCurveLoop(lines)
    surf = gmsh.model.geo.addPlaneSurface([loop])
    gmsh.model.geo.synchronize()
    gmsh.model.addPhysicalGroup(1, lines, 1)
    gmsh.model.addPhysicalGroup(2, [surf], 1)
    gmsh.model.mesh.generate(2)


def cube(gmsh, h):
    gmsh.model.occ.addBox(0, 0, 0, 1, 1, 1)
    gmsh.model.occ.synchronize()
    gmsh.model.mesh.setSize(gmsh.model.getEntities(0), h)
    gmsh.model.addPhysicalGroup(2, [s[1] for s in gmsh.model.getEntities(2)], 1)
    gmsh.model.addPhysicalGroup(3, [v[1] for v in gmsh.model.getEntities(3)], 1)
    gmsh.model.mesh.generate(3)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("outdir")
    ap.add_argument("--hex-levels", default="1..6", type=level_range)
    ap.add_argument("--cube-levels", default="1..3", type=level_range)
    ap.add_argument("--seed", default=0, type=int, help="Gmsh random factor seed offset (0 keeps defaults)")
    args = ap.parse_args()
    try:
        import gmsh
    except (ImportError, OSError) as exc:
        sys.exit(f"gmsh python module unavailable: {exc}")
    os.makedirs(args.outdir, exist_ok=True)
    gmsh.initialize()
    gmsh.option.setNumber("General.Terminal", 0)
    gmsh.option.setNumber("Mesh.MshFileVersion", 4.1)
    # Delaunay in 2D: the default frontal algorithm reproduces a regular
    # pattern on the hexagon.
    gmsh.option.setNumber("Mesh.Algorithm", 5)
    for name, build, levels in (("hexagon", hexagon, args.hex_levels), ("cube", cube, args.cube_levels)):
        for l in levels:
            h = 2.0 ** -l
            gmsh.model.add(f"{name}{l}")
            gmsh.option.setNumber("Mesh.MeshSizeMax", h)
            if args.seed:
                gmsh.option.setNumber("Mesh.RandomSeed", args.seed)
            build(gmsh, h)
            path = os.path.join(args.outdir, f"{name}_L{l}.msh")
            gmsh.write(path)
            gmsh.model.remove()
            print(path)
    gmsh.finalize()


if __name__ == "__main__":
    main()
