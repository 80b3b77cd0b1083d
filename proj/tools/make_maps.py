#!/usr/bin/env python3
"""Regenerates the bundled ground-truth maps (ASCII PGM + .meta sidecar).

Truth maps are fully known: free space is 255, walls are 0.
"""
import argparse
import os

FREE, WALL = 255, 0


def grid(w, h, fill=FREE):
    return [[fill] * w for _ in range(h)]


def hline(g, row, c0, c1, v=WALL):
    for c in range(c0, c1 + 1):
        g[row][c] = v


def vline(g, col, r0, r1, v=WALL):
    for r in range(r0, r1 + 1):
        g[r][col] = v


def border(g):
    h, w = len(g), len(g[0])
    hline(g, 0, 0, w - 1)
    hline(g, h - 1, 0, w - 1)
    vline(g, 0, 0, h - 1)
    vline(g, w - 1, 0, h - 1)


def office(size=100):
    """Multi-room office: central corridor cross, eight rooms with doors."""
    g = grid(size, size)
    border(g)
    lo, hi = 45, 54  # corridor band, rows and cols 45..54 stay free

    # Corridor walls with door gaps into each room.
    doors = [12, 37, 62, 87]  # door center columns/rows
    for wall_row in (lo - 1, hi + 1):
        hline(g, wall_row, 1, size - 2)
        for d in doors:
            for c in range(d - 2, d + 3):
                g[wall_row][c] = FREE
    for wall_col in (lo - 1, hi + 1):
        vline(g, wall_col, 1, lo - 2)
        vline(g, wall_col, hi + 2, size - 2)
        for d in doors:
            for r in range(d - 2, d + 3):
                g[r][wall_col] = FREE

    # Room partitions in the top and bottom banks.
    for part_col in (24, 74):
        vline(g, part_col, 1, lo - 2)
        vline(g, part_col, hi + 2, size - 2)
    # Side-wing partitions, with doors near each end.
    for part_row in (22, 77):
        hline(g, part_row, 1, lo - 2)
        hline(g, part_row, hi + 2, size - 2)
        for c in list(range(18, 23)) + list(range(78, 83)):
            g[part_row][c] = FREE

    # Keep the corridor cross free of leftovers.
    for r in range(lo, hi + 1):
        for c in range(1, size - 1):
            g[r][c] = FREE
    for c in range(lo, hi + 1):
        for r in range(1, size - 1):
            g[r][c] = FREE
    return g


def ward(size=80):
    """Dense small rooms off a single corridor: hospital-ward topology."""
    g = grid(size, size)
    border(g)
    lo, hi = 36, 43  # horizontal corridor band

    for wall_row in (lo - 1, hi + 1):
        hline(g, wall_row, 1, size - 2)
    # Room partitions every 16 cells, doors through the corridor walls.
    for part_col in range(16, size - 1, 16):
        vline(g, part_col, 1, lo - 2)
        vline(g, part_col, hi + 2, size - 2)
    for door in range(8, size - 1, 16):
        for c in range(door - 2, door + 3):
            g[lo - 1][c] = FREE
            g[hi + 1][c] = FREE
    # Second row of rooms in each bank.
    for part_row in (18, 61):
        hline(g, part_row, 1, size - 2)
        for door in range(8, size - 1, 16):
            for c in range(door - 1, door + 2):
                g[part_row][c] = FREE
    for r in range(lo, hi + 1):
        for c in range(1, size - 1):
            g[r][c] = FREE
    return g


def save(g, path, resolution):
    h, w = len(g), len(g[0])
    with open(path, "w") as f:
        f.write("P2\n# ground truth map\n%d %d\n255\n" % (w, h))
        for row in g:
            f.write(" ".join(str(v) for v in row) + "\n")
    with open(os.path.splitext(path)[0] + ".meta", "w") as f:
        f.write("resolution %s\norigin_x 0.0\norigin_y 0.0\n" % resolution)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="maps")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    save(office(), os.path.join(args.out, "office.pgm"), 0.25)
    save(ward(), os.path.join(args.out, "ward.pgm"), 0.25)
    print("wrote office.pgm and ward.pgm to", args.out)


if __name__ == "__main__":
    main()
