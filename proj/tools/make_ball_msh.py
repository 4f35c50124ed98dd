#!/usr/bin/env python3
"""Write a tetrahedral ball mesh in MSH 2.2 ASCII for the bench-sphere command.

Builds a Kuhn-split cube grid on [-1,1]^3 and maps it radially onto the ball:
each vertex moves to distance R * max|v_i| from the origin along its own ray,
which sends the cube's concentric shells to spheres. Straight tet facets make
the meshed volume slightly smaller than the exact ball; M >= 10 keeps the
deficit under 2 percent.

usage: make_ball_msh.py out.msh [M] [R]
       (defaults M=10, R=sqrt(2)/2)
"""

import math
import sys


def main() -> None:
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    path = sys.argv[1]
    M = int(sys.argv[2]) if len(sys.argv) > 2 else 10
    R = float(sys.argv[3]) if len(sys.argv) > 3 else math.sqrt(2.0) / 2.0
    if M < 2 or M % 2 != 0:
        sys.exit("M must be even and >= 2 so a vertex sits at the center")

    n = M + 1
    vid = lambda i, j, k: (k * n + j) * n + i
    verts = []
    for k in range(n):
        for j in range(n):
            for i in range(n):
                v = (2.0 * i / M - 1.0, 2.0 * j / M - 1.0, 2.0 * k / M - 1.0)
                s = max(abs(c) for c in v)
                r = math.sqrt(sum(c * c for c in v))
                scale = R * s / r if r > 0 else 0.0
                verts.append(tuple(c * scale for c in v))

    # Kuhn split: six tets per grid cube, all sharing the main diagonal
    paths = [
        (0, 1, 3, 7), (0, 1, 5, 7), (0, 2, 3, 7),
        (0, 2, 6, 7), (0, 4, 5, 7), (0, 4, 6, 7),
    ]
    corner = lambda i, j, k, c: vid(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1))
    tets = []
    for k in range(M):
        for j in range(M):
            for i in range(M):
                for p in paths:
                    tet = [corner(i, j, k, c) for c in p]
                    a, b, c, d = (verts[t] for t in tet)
                    u = [b[x] - a[x] for x in range(3)]
                    v = [c[x] - a[x] for x in range(3)]
                    w = [d[x] - a[x] for x in range(3)]
                    det = (u[0] * (v[1] * w[2] - v[2] * w[1])
                           - u[1] * (v[0] * w[2] - v[2] * w[0])
                           + u[2] * (v[0] * w[1] - v[1] * w[0]))
                    if det < 0:
                        tet[2], tet[3] = tet[3], tet[2]
                    tets.append(tet)

    vol = 0.0
    for tet in tets:
        a, b, c, d = (verts[t] for t in tet)
        u = [b[x] - a[x] for x in range(3)]
        v = [c[x] - a[x] for x in range(3)]
        w = [d[x] - a[x] for x in range(3)]
        vol += abs(u[0] * (v[1] * w[2] - v[2] * w[1])
                   - u[1] * (v[0] * w[2] - v[2] * w[0])
                   + u[2] * (v[0] * w[1] - v[1] * w[0])) / 6.0

    with open(path, "w") as f:
        f.write("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n")
        f.write("$Nodes\n%d\n" % len(verts))
        for i, v in enumerate(verts, 1):
            f.write("%d %.16g %.16g %.16g\n" % (i, v[0], v[1], v[2]))
        f.write("$EndNodes\n$Elements\n%d\n" % len(tets))
        for i, t in enumerate(tets, 1):
            f.write("%d 4 2 1 1 %d %d %d %d\n" % (i, t[0] + 1, t[1] + 1, t[2] + 1, t[3] + 1))
        f.write("$EndElements\n")

    exact = 4.0 / 3.0 * math.pi * R ** 3
    print("wrote %s: %d vertices, %d tets, volume %.6g (ball %.6g, deficit %.2f%%)"
          % (path, len(verts), len(tets), vol, exact, 100.0 * (1.0 - vol / exact)))


if __name__ == "__main__":
    main()
