#!/usr/bin/env python3
"""Builds the back-projection golden fixture.

Writes a small depth/mask frame pair plus a camera model, then derives the
expected per-instance PLY files with an independent transcription of the
geometric pipeline: hole filling to fixpoint, depth-to-color reprojection,
mask rectification, and pinhole back-projection. Instance regions are kept
at or below the outlier-removal neighbor count so the statistical filter
passes them through unchanged.

Run from this directory: python3 generate_fixture.py
"""

import json
import struct

W, H = 24, 18
FX = FY = 40.0
CX, CY = 12.3, 8.7
DEPTH_SCALE = 0.001


def lcg_values(n, seed=20240817):
    x = seed
    out = []
    for _ in range(n):
        x = (x * 1103515245 + 12345) % (1 << 31)
        out.append(900 + (x % 200))
    return out


def build_frame():
    depth = [0] * (W * H)
    mask = [0] * (W * H)
    values = iter(lcg_values(W * H))
    # label 1: 5x4 block (20 px), label 2: 6x3 block (18 px)
    for v in range(4, 8):
        for u in range(3, 8):
            depth[v * W + u] = next(values)
            mask[v * W + u] = 1
    for v in range(10, 13):
        for u in range(12, 18):
            depth[v * W + u] = next(values)
            mask[v * W + u] = 2
    # some background depth outside the masks
    for v in range(H):
        for u in range(W):
            if mask[v * W + u] == 0 and (u + v) % 3 == 0:
                depth[v * W + u] = next(values)
    # holes inside the masked regions, to be filled from neighbors
    depth[5 * W + 5] = 0
    depth[6 * W + 4] = 0
    depth[11 * W + 14] = 0
    return depth, mask


def fill_holes(depth):
    depth = list(depth)
    changed = True
    while changed:
        changed = False
        prev = list(depth)
        for v in range(H):
            for u in range(W):
                if prev[v * W + u] != 0:
                    continue
                best = 0
                for dv in (-1, 0, 1):
                    for du in (-1, 0, 1):
                        if du == 0 and dv == 0:
                            continue
                        nu, nv = u + du, v + dv
                        if 0 <= nu < W and 0 <= nv < H:
                            n = prev[nv * W + nu]
                            if n != 0 and (best == 0 or n < best):
                                best = n
                if best:
                    depth[v * W + u] = best
                    changed = True
    return depth


def align_identity(depth):
    """Reprojection with identity extrinsics and matching intrinsics."""
    out = [0] * (W * H)
    for v in range(H):
        for u in range(W):
            raw = depth[v * W + u]
            if raw == 0:
                continue
            z = raw * DEPTH_SCALE
            x = (u - CX) * z / FX
            y = (v - CY) * z / FY
            uc = round(FX * x / z + CX)
            vc = round(FY * y / z + CY)
            if not (0 <= uc < W and 0 <= vc < H):
                continue
            mapped = round(z / DEPTH_SCALE)
            cell = out[vc * W + uc]
            if cell == 0 or mapped < cell:
                out[vc * W + uc] = mapped
    return out


def backproject(depth, mask):
    clouds = {}
    for v in range(H):
        for u in range(W):
            raw = depth[v * W + u]
            label = mask[v * W + u]
            if raw == 0 or label == 0:
                continue
            z = raw * DEPTH_SCALE
            clouds.setdefault(label, []).append(((u - CX) * z / FX, (v - CY) * z / FY, z))
    return clouds


def write_pgm16(path, values):
    with open(path, "wb") as f:
        f.write(f"P5\n{W} {H}\n65535\n".encode())
        for v in values:
            f.write(struct.pack(">H", v))


def write_pgm8(path, values):
    with open(path, "wb") as f:
        f.write(f"P5\n{W} {H}\n255\n".encode())
        f.write(bytes(values))


def write_ply(path, points):
    header = (
        "ply\n"
        "format binary_little_endian 1.0\n"
        f"element vertex {len(points)}\n"
        "property float x\nproperty float y\nproperty float z\n"
        "end_header\n"
    )
    with open(path, "wb") as f:
        f.write(header.encode())
        for p in points:
            f.write(struct.pack("<fff", *p))


def main():
    depth, mask = build_frame()
    write_pgm16("frame_depth.pgm", depth)
    write_pgm8("frame_mask.pgm", mask)
    with open("camera.json", "w") as f:
        json.dump(
            {
                "depth_intrinsics": {"fx": FX, "fy": FY, "cx": CX, "cy": CY},
                "color_intrinsics": {"fx": FX, "fy": FY, "cx": CX, "cy": CY},
                "extrinsics": [1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1],
                "depth_scale": DEPTH_SCALE,
            },
            f,
            indent=2,
        )
        f.write("\n")

    rectified = align_identity(fill_holes(depth))
    clouds = backproject(rectified, mask)
    aggregate = []
    for label in sorted(clouds):
        write_ply(f"expected_instance_{label}.ply", clouds[label])
        aggregate.extend(clouds[label])
    write_ply("expected_aggregate.ply", aggregate)
    print("instances:", {k: len(v) for k, v in clouds.items()}, "aggregate:", len(aggregate))


if __name__ == "__main__":
    main()
