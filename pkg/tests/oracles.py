"""Independent reference implementations used by the tests.

They deliberately avoid the package's own math: rotations are explicit 3x3
matrices in numpy, intervals are counted on a grid, dependency checks are
brute-force pair scans.
"""

from __future__ import annotations

import math
import re

import numpy as np

Z = np.array([0.0, 0.0, 1.0])


def rx(deg):
    c, s = math.cos(math.radians(deg)), math.sin(math.radians(deg))
    return np.array([[1, 0, 0], [0, c, -s], [0, s, c]])


def ry(deg):
    # positive pitch lifts +X toward +Z
    c, s = math.cos(math.radians(deg)), math.sin(math.radians(deg))
    return np.array([[c, 0, -s], [0, 1, 0], [s, 0, c]])


def rz(deg):
    c, s = math.cos(math.radians(deg)), math.sin(math.radians(deg))
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])


def rot(pitch, yaw, roll):
    return rz(yaw) @ ry(pitch) @ rx(roll)


def axis_angle(axis, deg):
    k = np.asarray(axis, float)
    K = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    t = math.radians(deg)
    return np.eye(3) + math.sin(t) * K + (1 - math.cos(t)) * K @ K


def unit(v):
    v = np.asarray(v, float)
    return v / np.linalg.norm(v)


def aim_angles(origin, target):
    """(pitch, yaw) in degrees from a direction, via arcsin for pitch."""
    d = np.asarray(target, float) - np.asarray(origin, float)
    d = d / np.linalg.norm(d)
    return math.degrees(math.asin(max(-1.0, min(1.0, d[2])))), math.degrees(math.atan2(d[1], d[0]))


def angle_diff(a, b):
    return abs((a - b + 180.0) % 360.0 - 180.0)


# -- position templates ---------------------------------------------------------


def ots(p_f, p_t, h_f, h_t, h_off, d_side, d_back):
    p_f, p_t = np.asarray(p_f, float), np.asarray(p_t, float)
    f = unit(p_t - p_f)
    r = unit(np.cross(Z, f))
    pos = p_f - f * d_back + r * d_side + np.array([0, 0, p_f[2] + h_f + h_off])
    target = ((p_f + [0, 0, p_f[2] + h_f]) + (p_t + [0, 0, p_t[2] + h_t])) / 2
    return pos, target


def pov(p_f, p_t, h_f, h_t, fwd, side):
    p_f, p_t = np.asarray(p_f, float), np.asarray(p_t, float)
    f = unit(p_t - p_f)
    r = unit(np.cross(Z, f))
    return p_f + [0, 0, h_f] + f * fwd + r * side, p_t + [0, 0, h_t]


def on_axis(p_f, p_t, h_f, h_t):
    b_f, b_t = np.asarray(p_f, float) + [0, 0, h_f], np.asarray(p_t, float) + [0, 0, h_t]
    return (b_f + b_t) / 2, b_t


def side_profile(p, pitch, yaw, roll, h, side, dist):
    right = rot(pitch, yaw, roll) @ np.array([-1.0, 0, 0])
    b = np.asarray(p, float) + [0, 0, h]
    return b + (-right if side == "left" else right) * dist, b


def establishing(p1, p2, side, dist, lift):
    p1, p2 = np.asarray(p1, float), np.asarray(p2, float)
    r = unit(np.cross(Z, unit(p2 - p1)))
    mid = (p1 + p2) / 2 + [0, 0, lift]
    return mid + (-r if side == "left" else r) * dist, mid


def generic_focus(p, actor_yaw, dist, pitch, yaw, h):
    """Yaw-only actor: spherical coordinates around the facing direction."""
    heading = rz(actor_yaw + yaw) @ np.array([1.0, 0, 0])
    d = math.cos(math.radians(pitch)) * heading + math.sin(math.radians(pitch)) * Z
    target = np.asarray(p, float) + [0, 0, h]
    return target + d * dist, target


# -- movement templates -----------------------------------------------------------


def dolly(pos, target, ratio):
    pos, target = np.asarray(pos, float), np.asarray(target, float)
    return target + (pos - target) * ratio


def orbit(pos, target, angle, clockwise, duration, fps=30):
    n = int(np.floor(np.float64(duration) * fps + 1e-9))
    total = angle if clockwise else -angle
    pos, target = np.asarray(pos, float), np.asarray(target, float)
    keys = [pos]
    for i in range(1, n + 1):
        keys.append(target + rz(total * i / n) @ (pos - target))
    return keys


# -- benchmark oracles --------------------------------------------------------------


def grid_coverage(intervals, duration, step=0.001):
    """Covered fraction of [0, D) sampled at 1 ms cell midpoints."""
    n = int(round(duration / step))
    mids = (np.arange(n) + 0.5) * step
    covered = np.zeros(n, bool)
    for s, e in intervals:
        covered |= (mids >= s) & (mids < e)
    return covered.mean() if n else 1.0


def brute_dc(calls, edges):
    """Exhaustive pair scan: every edge against every (earlier, later) pair."""
    applicable = violations = 0
    for e in edges:
        to_idx = [j for j, c in enumerate(calls) if c["tool"] == e["to_tool"]]
        if e["kind"] == "precedence":
            if not to_idx:
                continue
            applicable += 1
            j0 = min(to_idx)
            if not any(calls[i]["tool"] == e["from_tool"] for i in range(len(calls)) if i < j0):
                violations += 1
            continue
        src = e.get("bind_from") or e["bind_on"]
        for j in to_idx:
            if e["bind_on"] not in calls[j]["args"]:
                continue
            vals = calls[j]["args"][e["bind_on"]]
            for v in vals if isinstance(vals, list) else [vals]:
                applicable += 1
                ok = False
                for i in range(j):
                    c = calls[i]
                    if c["tool"] == e["from_tool"] and src in c["args"]:
                        pv = c["args"][src]
                        if v in (pv if isinstance(pv, list) else [pv]):
                            ok = True
                if not ok:
                    violations += 1
    return 1.0 if applicable == 0 else 1 - violations / applicable


def linear_scan(rows, filters):
    """Reference query evaluation over raw row dicts.

    ``/p/`` is a case-insensitive regex search, a leading comparison
    operator is numeric, anything else is case-insensitive equality on the
    value's text.  Missing values never match.
    """

    def text(v):
        return ("true" if v else "false") if isinstance(v, bool) else str(v)

    ops = {">": lambda a, b: a > b, ">=": lambda a, b: a >= b, "<": lambda a, b: a < b,
           "<=": lambda a, b: a <= b, "=": lambda a, b: a == b}
    out = []
    for row in rows:
        keep = True
        for field, expr in filters.items():
            v = row.get(field)
            if v is None:
                keep = False
            elif len(expr) >= 2 and expr[0] == "/" and expr[-1] == "/":
                keep = re.search(expr[1:-1], text(v), re.IGNORECASE) is not None
            elif expr.lstrip()[:1] in "<>=" and expr.strip():
                body = expr.strip()
                op = body[:2] if body[:2] in (">=", "<=") else body[:1]
                keep = ops[op](float(v), float(body[len(op):]))
            else:
                keep = text(v).casefold() == expr.casefold()
            if not keep:
                break
        if keep:
            out.append(row)
    return out


def enumerate_temporal(doc, eps, delta):
    """(checks, violations) counted straight off a raw snapshot dict."""
    checks = violations = 0
    for b in doc["bindings"]:
        tracks = b.get("tracks") or {}
        for kind in ("animation", "audio"):
            secs = sorted(tracks.get(kind, []), key=lambda s: (s["start"], s["end"]))
            for i in range(len(secs) - 1):
                checks += 1
                if secs[i]["end"] - secs[i + 1]["start"] > eps + 1e-9:
                    violations += 1
        for a in tracks.get("audio", []):
            checks += 1
            if not any(abs(f["start"] - a["start"]) <= delta + 1e-9 and abs(f["end"] - a["end"]) <= delta + 1e-9
                       for f in tracks.get("facial", [])):
                violations += 1
    return checks, violations


def server_replay_pv(calls):
    """PV recomputed by pushing calls through a real server session."""
    from cutscene.server import CutsceneServer, InProcessClient
    from cutscene.toolkit import TOOL_NAMES

    server = CutsceneServer()
    try:
        client = InProcessClient(server)
        for c in calls:
            client.call_tool(c["tool"], c["args"])
        recorded = client.trajectory()
    finally:
        server.close()
    scored = [r for r in recorded if r["tool"] in TOOL_NAMES]
    ok = sum(r["status"] == "ok" for r in scored)
    return ok / len(scored) if scored else 1.0
