#!/usr/bin/env python3
"""Writes the demo trajectories, landmarks, scenarios and scripted replies under data/.

Timestamps follow the retime rule (segment length / mean endpoint speed), so
retiming a generated trajectory leaves it unchanged.
"""
import math
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "data"

LANDMARKS = {
    "mouth": (0.60, 0.00, 0.50),
    "left shoulder": (0.75, 0.18, 0.35),
    "right shoulder": (0.75, -0.18, 0.35),
    "left elbow": (0.55, 0.25, 0.15),
    "right elbow": (0.55, -0.25, 0.15),
    "left wrist": (0.35, 0.15, 0.10),
    "right wrist": (0.35, -0.15, 0.10),
}


def fmt(v):
    return repr(round(v, 6))


def timed(points, vels, forces):
    t = [0.0]
    for i in range(1, len(points)):
        seg = math.dist(points[i - 1], points[i])
        t.append(t[-1] + seg / (0.5 * (vels[i - 1] + vels[i])))
    return t


def write_traj(name, points, vels, forces):
    points = [tuple(round(c, 6) for c in p) for p in points]
    ts = timed(points, vels, forces)
    lines = []
    for t, p, v, f in zip(ts, points, vels, forces):
        lines.append(f"- {{t: {t!r}, pos: [{fmt(p[0])}, {fmt(p[1])}, {fmt(p[2])}], vel: {v!r}, force: {f!r}}}")
    (OUT / name).write_text("\n".join(lines) + "\n")


def feeding():
    # Bowl to just in front of the mouth along a raised arc.
    n = 12
    start, end = (0.30, 0.05, 0.05), (0.55, 0.0, 0.47)
    pts = []
    for i in range(n):
        s = i / (n - 1)
        x = start[0] + (end[0] - start[0]) * s
        y = start[1] + (end[1] - start[1]) * s
        z = start[2] + (end[2] - start[2]) * s + 0.08 * math.sin(math.pi * s)
        pts.append((x, y, z))
    vels = [0.02 + 0.01 * (i % 3) / 2 for i in range(n)]
    forces = [0.5] * n
    write_traj("feeding_trajectory.yaml", pts, vels, forces)


def scratching():
    # Strokes over the left forearm, 0.15 m above the elbow at the closest point.
    ex, ey, ez = LANDMARKS["left elbow"]
    xs = [0.47, 0.51, 0.55, 0.59, 0.63, 0.59, 0.55, 0.51, 0.47]
    pts = [(x, ey, ez + 0.15) for x in xs]
    write_traj("scratching_trajectory.yaml", pts, [0.03] * len(pts), [2.0] * len(pts))


def landmarks():
    lines = [f"{k}: [{fmt(v[0])}, {fmt(v[1])}, {fmt(v[2])}]" for k, v in LANDMARKS.items()]
    (OUT / "landmarks.yaml").write_text("\n".join(lines) + "\n")


def main():
    OUT.mkdir(exist_ok=True)
    feeding()
    scratching()
    landmarks()


if __name__ == "__main__":
    main()
