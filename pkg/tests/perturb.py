"""Controlled edits to the ground-truth bundle, shared by bench tests."""

import copy


def edges_as_dicts(edges):
    return [{"kind": e.kind, "from_tool": e.from_tool, "to_tool": e.to_tool,
             "bind_on": e.bind_on, "bind_from": e.bind_from} for e in edges]


def drop_cut(snapshot, start, end):
    doc = copy.deepcopy(snapshot)
    before = len(doc["camera_cuts"])
    doc["camera_cuts"] = [c for c in doc["camera_cuts"] if not (c["start"] == start and c["end"] == end)]
    assert len(doc["camera_cuts"]) == before - 1
    return doc


def shift_facial(snapshot, character, index, seconds):
    doc = copy.deepcopy(snapshot)
    binding = next(b for b in doc["bindings"] if b["name"] == character)
    sec = binding["tracks"]["facial"][index]
    sec["start"] = round(sec["start"] + seconds, 6)
    sec["end"] = round(sec["end"] + seconds, 6)
    return doc


def drop_character(calls, name):
    out = [c for c in calls if not (c["tool"] == "add_character" and c["args"].get("name") == name)]
    assert len(out) == len(calls) - 1
    return copy.deepcopy(out)
