"""Camera template catalogue: argument models and dispatch into geometry."""

from __future__ import annotations

from typing import Any, Callable, Literal

from pydantic import BaseModel, ConfigDict, Field

from .. import geometry as geo


class _Args(BaseModel):
    model_config = ConfigDict(strict=True, extra="forbid")


class OTSArgs(_Args):
    """Over-the-shoulder: foreground shoulder of one actor, focus on the other."""

    from_actor_name: str = Field(min_length=1)
    to_actor_name: str = Field(min_length=1)
    variant: Literal["near", "mid", "high"] = "mid"
    shoulder_bone_name: str = "head"
    shoulder_height_offset: float | None = None
    shoulder_side_offset: float | None = None
    distance_back: float | None = None


class POVArgs(_Args):
    """Near point-of-view from just behind one actor's head."""

    from_actor_name: str = Field(min_length=1)
    to_actor_name: str = Field(min_length=1)
    head_bone_name: str = "head"
    forward_offset: float = -20.0
    side_offset: float = 50.0


class OnAxisArgs(_Args):
    """Camera halfway between two heads, looking straight at the target."""

    from_actor_name: str = Field(min_length=1)
    to_actor_name: str = Field(min_length=1)
    head_bone_name: str = "head"


class SideProfileArgs(_Args):
    """Profile view perpendicular to the actor's facing."""

    actor_name: str = Field(min_length=1)
    side: Literal["left", "right"] = "left"
    side_distance: float = 300.0
    bone_name: str = "spine_03"


class EstablishingArgs(_Args):
    """Wide two-actor shot from one side of the actor1 -> actor2 axis."""

    actor1_name: str = Field(min_length=1)
    actor2_name: str = Field(min_length=1)
    side: Literal["left", "right"] = "right"
    distance: float = 300.0
    height_offset: float = 150.0


class GenericFocusArgs(_Args):
    """Spherical placement around one actor (yaw 0 front, 180 back; pitch > 0 looks down)."""

    actor_name: str = Field(min_length=1)
    distance: float = 300.0
    pitch: float = 0.0
    yaw: float = 0.0
    bone_name: str | None = None


class DollyArgs(_Args):
    """Push in (ratio < 1) or pull out (ratio > 1) along the view axis."""

    ratio: float = Field(default=0.8, gt=0)


class OrbitArgs(_Args):
    """Arc around the look target in the horizontal plane."""

    angle: float = 45.0
    clockwise: bool = True


ActorLookup = Callable[[str], Any]


def _ots(a: OTSArgs, actor: ActorLookup) -> geo.CameraPose:
    return geo.compute_ots(
        actor(a.from_actor_name), actor(a.to_actor_name), a.variant, a.shoulder_bone_name,
        a.shoulder_height_offset, a.shoulder_side_offset, a.distance_back,
    )


def _pov(a: POVArgs, actor: ActorLookup) -> geo.CameraPose:
    return geo.compute_pov(
        actor(a.from_actor_name), actor(a.to_actor_name), a.head_bone_name, a.forward_offset, a.side_offset
    )


def _on_axis(a: OnAxisArgs, actor: ActorLookup) -> geo.CameraPose:
    return geo.compute_on_axis(actor(a.from_actor_name), actor(a.to_actor_name), a.head_bone_name)


def _side(a: SideProfileArgs, actor: ActorLookup) -> geo.CameraPose:
    return geo.compute_side_profile(actor(a.actor_name), a.side, a.side_distance, a.bone_name)


def _establishing(a: EstablishingArgs, actor: ActorLookup) -> geo.CameraPose:
    return geo.compute_establishing(
        actor(a.actor1_name), actor(a.actor2_name), a.side, a.distance, a.height_offset
    )


def _generic(a: GenericFocusArgs, actor: ActorLookup) -> geo.CameraPose:
    return geo.compute_generic_focus(actor(a.actor_name), a.distance, a.pitch, a.yaw, a.bone_name)


POSITION_TEMPLATES: dict[str, tuple[type[_Args], Callable[[Any, ActorLookup], geo.CameraPose]]] = {
    "OTS": (OTSArgs, _ots),
    "POV": (POVArgs, _pov),
    "OnAxis": (OnAxisArgs, _on_axis),
    "SideProfile": (SideProfileArgs, _side),
    "Establishing": (EstablishingArgs, _establishing),
    "GenericFocus": (GenericFocusArgs, _generic),
}

MOVEMENT_TEMPLATES: dict[str, type[_Args]] = {"Dolly": DollyArgs, "Orbit": OrbitArgs}


def describe_shot(name: str, args: _Args) -> str:
    d = args.model_dump()
    if name == "OTS":
        return f"OTS shot from {d['from_actor_name']} onto {d['to_actor_name']} ({d['variant']})"
    if name == "POV":
        return f"POV shot from {d['from_actor_name']} toward {d['to_actor_name']}"
    if name == "OnAxis":
        return f"On-axis shot of {d['to_actor_name']} from between {d['from_actor_name']} and {d['to_actor_name']}"
    if name == "SideProfile":
        return f"{d['side'].capitalize()} side profile of {d['actor_name']}"
    if name == "Establishing":
        return f"Establishing shot of {d['actor1_name']} and {d['actor2_name']} from the {d['side']}"
    return f"Focus shot on {d['actor_name']} at {d['distance']:g} cm, pitch {d['pitch']:g}, yaw {d['yaw']:g}"


def describe_movement(name: str, args: _Args) -> str:
    d = args.model_dump()
    if name == "Dolly":
        return "dolly push-in" if d["ratio"] < 1 else ("dolly hold" if d["ratio"] == 1 else "dolly pull-out")
    direction = "clockwise" if d["clockwise"] else "counter-clockwise"
    return f"{d['angle']:g} degree {direction} orbit"


def _catalogue_entry(name: str, model: type[_Args]) -> dict[str, Any]:
    schema = model.model_json_schema()
    return {
        "name": name,
        "description": (model.__doc__ or "").strip(),
        "parameters": schema.get("properties", {}),
        "required": schema.get("required", []),
    }


def template_catalogue() -> dict[str, list[dict[str, Any]]]:
    return {
        "position_templates": [_catalogue_entry(n, m) for n, (m, _) in POSITION_TEMPLATES.items()],
        "movement_templates": [_catalogue_entry(n, m) for n, m in MOVEMENT_TEMPLATES.items()],
    }
