"""The agent-facing tool surface.

``Toolkit.call(name, args)`` validates arguments against the tool's model,
runs the tool against the live sequence and registry, and wraps the outcome
in a uniform envelope ``{status, data, message}``.  Mutating tools run on a
copy-on-failure basis: if anything raises, the sequence is restored, so every
call either takes full effect or none.
"""

from __future__ import annotations

import base64
import difflib
import json
import math
import threading
from dataclasses import dataclass
from importlib import resources
from typing import Any, Callable

from pydantic import ValidationError

from .. import _json
from .. import geometry as geo
from ..assets import AUDIO_KIND, FACIAL_KIND, VIDEO_KIND, AssetRegistry, ImportRequest, default_registry, silent_wav
from ..errors import CutsceneError, ToolError
from ..sequence import (
    ANIMATION,
    AUDIO,
    CAMERA,
    CHARACTER,
    FACIAL,
    LevelSequence,
    MetadataBlock,
    TimeRange,
    check_character_overlap,
    serialize_state,
)
from ..vec import Rotator, Vec3
from . import schemas as s
from .orientation import Compass, Turn, parse_orientation, yaw_towards
from .templates import MOVEMENT_TEMPLATES, POSITION_TEMPLATES, describe_movement, describe_shot, template_catalogue

CAMERA_CLASS = "CineCameraActor"
CHARACTER_KIND = "Characters"

# Mock speech synthesis: 44 frames per UTF-8 byte plus 2400 frames of lead-in
# at 8 kHz, i.e. 0.0055 s per byte + 0.3 s.
TTS_SAMPLE_RATE = 8000
TTS_FRAMES_PER_BYTE = 44
TTS_LEAD_FRAMES = 2400


def tts_duration(text: str) -> float:
    return (TTS_FRAMES_PER_BYTE * len(text.encode("utf-8")) + TTS_LEAD_FRAMES) / TTS_SAMPLE_RATE


@dataclass(frozen=True)
class Bounds:
    min_xy: float = -2000.0
    max_xy: float = 2000.0
    min_z: float = 0.0
    max_z: float = 500.0

    def contains(self, v: Vec3) -> bool:
        return (
            self.min_xy <= v.x <= self.max_xy
            and self.min_xy <= v.y <= self.max_xy
            and self.min_z <= v.z <= self.max_z
        )


@dataclass(frozen=True)
class ViewPose:
    location: Vec3 = Vec3(-600.0, 0.0, 170.0)
    yaw: float = 0.0
    pitch: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {"location": self.location.as_list(), "yaw": self.yaw, "pitch": self.pitch}


@dataclass(frozen=True)
class ToolSpec:
    name: str
    description: str
    args_model: type[s.Args]
    mutation: bool
    category: str

    def schema(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "description": self.description,
            "inputSchema": self.args_model.model_json_schema(),
            "mutation": self.mutation,
            "category": self.category,
        }


def _spec(name, description, model, mutation, category):
    return ToolSpec(name, description, model, mutation, category)


TOOL_SPECS: tuple[ToolSpec, ...] = (
    # characters and tracks
    _spec("add_character", "Spawn a character from the Characters asset sheet at a world location (cm).", s.AddCharacter, True, "character"),
    _spec("orient_character_to_center", "Turn each named character toward the centroid of the group.", s.OrientToCenter, True, "character"),
    _spec("orient_character", "Set a character's facing with a descriptor: face_north/east/south/west, face_character:<name>, turn_left_<deg>, turn_right_<deg>.", s.OrientCharacter, True, "character"),
    _spec("add_character_animation", "Add a body animation section; its length is the clip duration. Returns the stored range.", s.AddAnimation, True, "character"),
    _spec("add_character_audio", "Add a dialogue audio section with optional speech text. Returns the stored range.", s.AddAudio, True, "character"),
    _spec("add_character_facial_animation", "Add a facial animation section; its length is the facial asset duration. gender is accepted and ignored.", s.AddFacial, True, "character"),
    # asset query
    _spec("get_queryable_asset_types", "List asset types that query_assets accepts.", s.NoArgs, False, "asset"),
    _spec("get_query_instruction", "Describe the public fields of an asset type and the filter syntax.", s.QueryInstruction, False, "asset"),
    _spec("query_assets", "Query assets of a type with AND-combined filters (exact, /regex/, numeric comparison).", s.QueryAssets, False, "asset"),
    _spec("get_available_characters", "List all spawnable characters.", s.NoArgs, False, "asset"),
    _spec("get_available_animations", "List body animations for a gender.", s.AvailableAnimations, False, "asset"),
    # dynamic import
    _spec("get_importable_asset_types", "List data types that import_dynamic_asset accepts.", s.NoArgs, False, "import"),
    _spec("get_import_guide", "Describe metadata fields recognised for an importable data type.", s.ImportGuide, False, "import"),
    _spec("import_dynamic_asset", "Import a runtime asset from base64, a file path or a URL; returns its identifier.", s.ImportAsset, True, "import"),
    # camera
    _spec("add_camera", "Create a cine camera binding.", s.CameraName, True, "camera"),
    _spec("set_active_camera", "Add a camera cut making this camera active over [start_time, end_time).", s.SetActiveCamera, True, "camera"),
    _spec("get_available_camera_templates", "List position and movement templates with their parameters.", s.NoArgs, False, "camera"),
    _spec("apply_camera_template", "Place a camera with a position template, optionally animate it with a movement template, and record the shot as metadata.", s.ApplyTemplate, True, "camera"),
    # perception
    _spec("update_sequence_metadata", "Attach a free-text annotation block to a binding and time range.", s.UpdateMetadata, True, "perception"),
    _spec("get_sequence_content", "Return the whole sequence as a structured document.", s.NoArgs, False, "perception"),
    _spec("clear_sequence", "Remove every binding, cut and annotation.", s.NoArgs, True, "perception"),
    _spec("set_current_sequence_time", "Move the playhead.", s.SequenceTime, True, "perception"),
    _spec("move_view", "Move the editor viewport: forward/horizontal in its yaw frame on the ground plane, vertical along Z, then turn.", s.MoveView, True, "perception"),
    _spec("undo_move_view", "Undo the last move_view (one step only).", s.NoArgs, True, "perception"),
    _spec("take_editor_screenshot", "Viewport capture; not available headless.", s.EditorScreenshot, False, "perception"),
    _spec("take_camera_screenshot", "Camera capture; not available headless.", s.CameraScreenshot, False, "perception"),
    _spec("check_character_collisions", "Report pairs of characters whose capsules overlap.", s.CollisionCheck, False, "perception"),
    # external services
    _spec("get_available_tone", "List voice tones, optionally only those matching a character's gender.", s.AvailableTone, False, "service"),
    _spec("tts_function_tool", "Synthesize a dialogue line and register it as an Audio asset under the given identifier.", s.TTS, True, "service"),
    _spec("audio_to_face_expression_tool", "Derive a facial animation asset from an Audio asset; same duration.", s.AudioToFace, True, "service"),
    _spec("video_understanding_tool", "Describe a registered video asset (stub analysis).", s.VideoUnderstanding, False, "service"),
)

TOOL_REGISTRY: dict[str, ToolSpec] = {t.name: t for t in TOOL_SPECS}
TOOL_NAMES: tuple[str, ...] = tuple(TOOL_REGISTRY)
MUTATION_TOOLS = frozenset(n for n, t in TOOL_REGISTRY.items() if t.mutation)


def ok(data: Any = None, message: str = "ok") -> dict[str, Any]:
    return {"status": "ok", "data": data, "message": message}


def error(code: str, message: str, **details: Any) -> dict[str, Any]:
    return {"status": "error", "data": {"error": code, **details}, "message": message}


def _schema_violation(exc: ValidationError) -> ToolError:
    problems = [
        {"field": ".".join(str(p) for p in e["loc"]) or "(root)", "problem": e["msg"]} for e in exc.errors()
    ]
    fields = ", ".join(p["field"] for p in problems)
    return ToolError("schema-violation", f"invalid arguments: {fields}", problems=problems)


def load_tone_catalog() -> list[dict[str, str]]:
    text = (resources.files("cutscene") / "data" / "tones.json").read_text(encoding="utf-8")
    return json.loads(text)["tones"]


class Toolkit:
    def __init__(
        self,
        registry: AssetRegistry | None = None,
        sequence: LevelSequence | None = None,
        bounds: Bounds = Bounds(),
        tones: list[dict[str, str]] | None = None,
    ) -> None:
        self.registry = registry if registry is not None else default_registry()
        self.sequence = sequence if sequence is not None else LevelSequence()
        self.bounds = bounds
        self.tones = tones if tones is not None else load_tone_catalog()
        self.view = ViewPose()
        self._view_undo: ViewPose | None = None
        self._lock = threading.Lock()
        self._handlers: dict[str, Callable[[Any], dict[str, Any]]] = {
            name: getattr(self, f"_t_{name}") for name in TOOL_NAMES
        }

    # -- dispatch ---------------------------------------------------------

    @staticmethod
    def schemas(names: list[str] | None = None) -> list[dict[str, Any]]:
        return [TOOL_REGISTRY[n].schema() for n in (names if names is not None else TOOL_NAMES)]

    def call(self, name: str, args: dict[str, Any] | None = None) -> dict[str, Any]:
        spec = TOOL_REGISTRY.get(name)
        if spec is None:
            return error("unknown-tool", f"no tool named {name!r}", known=list(TOOL_NAMES))
        with self._lock:
            try:
                parsed = spec.args_model.model_validate({} if args is None else args)
            except ValidationError as exc:
                err = _schema_violation(exc)
                return error(err.code, err.message, **err.details)
            saved = (self.sequence.copy(), self.view, self._view_undo) if spec.mutation else None
            try:
                return self._handlers[name](parsed)
            except CutsceneError as exc:
                if saved is not None:
                    self._restore(saved)
                return error(exc.code, exc.message, **exc.details)
            except Exception as exc:  # a bug, but keep the trajectory scoreable
                if saved is not None:
                    self._restore(saved)
                return error("internal-error", f"{type(exc).__name__}: {exc}")

    def _restore(self, saved) -> None:
        seq, self.view, self._view_undo = saved
        self.sequence.bindings = seq.bindings
        self.sequence.camera_cuts = seq.camera_cuts
        self.sequence.metadata = seq.metadata
        self.sequence.current_time = seq.current_time

    def state_text(self) -> str:
        with self._lock:
            return serialize_state(self.sequence)

    # -- helpers ----------------------------------------------------------

    def _character(self, name: str):
        b = self.sequence.find(name)
        if b is None or b.kind != CHARACTER:
            raise ToolError(
                "unknown-character", f"no character named {name!r} in the sequence",
                name=name, known=self.sequence.binding_names(CHARACTER),
            )
        return b

    def _camera(self, name: str):
        b = self.sequence.find(name)
        if b is None or b.kind != CAMERA:
            raise ToolError(
                "unknown-camera", f"no camera named {name!r} in the sequence",
                name=name, known=self.sequence.binding_names(CAMERA),
            )
        return b

    def _asset(self, identifier: str, code: str, kinds: Callable[[str], bool], label: str):
        rec = self.registry.find(identifier)
        if rec is None or not kinds(rec.asset_kind):
            pool = [i for i in self.registry.identifiers() if kinds(self.registry.get(i).asset_kind)]
            raise ToolError(
                code, f"unknown {label} {identifier!r}", identifier=identifier,
                suggestions=difflib.get_close_matches(identifier, pool, n=3, cutoff=0.5),
            )
        return rec

    def _actor_pose(self, name: str) -> geo.ActorPose:
        b = self._character(name)
        rec = self.registry.find(b.identifier)
        overrides = {}
        if rec is not None:
            for key, value in rec.public_data.items():
                if key.startswith("bone_height_") and value is not None:
                    overrides[key[len("bone_height_"):]] = float(value)
        return geo.ActorPose(b.location, b.rotation, geo.SkeletonProfile.with_overrides(overrides))

    @staticmethod
    def _range_data(r: TimeRange) -> dict[str, float]:
        return {"start": r.start, "end": r.end}

    # -- characters and tracks -------------------------------------------

    def _t_add_character(self, a: s.AddCharacter):
        rec = self._asset(a.identifier, "unknown-character-identifier", lambda k: k == CHARACTER_KIND, "character identifier")
        x, y, z = a.location
        loc = Vec3(x, y, max(z, 0.0))
        if not self.bounds.contains(loc):
            raise ToolError(
                "out-of-bounds", f"location {loc.as_list()} is outside the allowed volume",
                location=loc.as_list(),
                bounds={"xy": [self.bounds.min_xy, self.bounds.max_xy], "z": [self.bounds.min_z, self.bounds.max_z]},
            )
        self.registry.load_asset(rec.identifier)
        self.sequence.add_binding(a.name, CHARACTER, rec.identifier, loc)
        return ok({"name": a.name, "identifier": rec.identifier, "location": loc.as_list()},
                  f"added character {a.name} ({rec.identifier}) at {loc.as_list()}")

    def _t_orient_character_to_center(self, a: s.OrientToCenter):
        if len(set(a.names)) != len(a.names):
            raise ToolError("duplicate-name", "names must be distinct", names=a.names)
        chars = [self._character(n) for n in a.names]
        cx = sum(c.location.x for c in chars) / len(chars)
        cy = sum(c.location.y for c in chars) / len(chars)
        result = {}
        for c in chars:
            yaw = yaw_towards(c.location.x, c.location.y, cx, cy)
            if yaw is not None:
                c.rotation = Rotator(0.0, yaw, 0.0)
            result[c.name] = c.rotation.yaw
        return ok({"yaw": result, "center": [cx, cy]}, "characters face the group center")

    def _t_orient_character(self, a: s.OrientCharacter):
        c = self._character(a.name)
        d = parse_orientation(a.orientation)
        if isinstance(d, Compass):
            yaw = d.yaw
        elif isinstance(d, Turn):
            yaw = c.rotation.yaw + d.degrees
        else:
            other = self._character(d.name)
            yaw = yaw_towards(c.location.x, c.location.y, other.location.x, other.location.y)
            if yaw is None:
                raise ToolError("coincident-actors", f"{a.name} and {d.name} share a position")
        c.rotation = Rotator(0.0, yaw, 0.0)
        return ok({"name": c.name, "yaw": c.rotation.yaw}, f"{c.name} yaw is now {c.rotation.yaw:g}")

    def _t_add_character_animation(self, a: s.AddAnimation):
        self._character(a.character_name)
        rec = self._asset(a.identifier, "unknown-animation", lambda k: k.startswith("Animation"), "animation")
        duration = rec.public_data.get("duration")
        if isinstance(duration, bool) or not isinstance(duration, (int, float)) or not duration > 0:
            raise ToolError("missing-duration-field", f"animation {a.identifier!r} has no positive duration")
        stored = self.sequence.add_section(
            a.character_name, ANIMATION, rec.identifier, TimeRange(a.start_time, a.start_time + float(duration))
        )
        return ok(self._range_data(stored), f"animation {rec.identifier} on {a.character_name} [{stored.start:g}, {stored.end:g})")

    def _t_add_character_audio(self, a: s.AddAudio):
        self._character(a.character_name)
        rec = self._asset(a.identifier, "unknown-audio", lambda k: k == AUDIO_KIND, "audio asset")
        stored = self.sequence.add_section(
            a.character_name, AUDIO, rec.identifier, TimeRange(a.start_time, a.end_time), a.speech_text or None
        )
        return ok(self._range_data(stored), f"audio {rec.identifier} on {a.character_name} [{stored.start:g}, {stored.end:g})")

    def _t_add_character_facial_animation(self, a: s.AddFacial):
        self._character(a.character_name)
        rec = self._asset(a.identifier, "unknown-facial-animation", lambda k: k == FACIAL_KIND, "facial animation")
        duration = float(rec.public_data["duration"])
        stored = self.sequence.add_section(
            a.character_name, FACIAL, rec.identifier, TimeRange(a.start_time, a.start_time + duration)
        )
        return ok(self._range_data(stored), f"facial {rec.identifier} on {a.character_name} [{stored.start:g}, {stored.end:g})")

    # -- asset query ------------------------------------------------------

    def _t_get_queryable_asset_types(self, a):
        return ok(self.registry.get_queryable_asset_types())

    def _t_get_query_instruction(self, a: s.QueryInstruction):
        doc = self.registry.get_query_instruction(a.asset_type)
        return ok(doc, doc["text"])

    def _t_query_assets(self, a: s.QueryAssets):
        rows = self.registry.query_assets(a.asset_type, a.filters, a.include_generated)
        return ok(rows, f"{len(rows)} {a.asset_type} record(s)")

    def _t_get_available_characters(self, a):
        rows = self.registry.query_assets(CHARACTER_KIND)
        return ok(rows, f"{len(rows)} character(s)")

    def _t_get_available_animations(self, a: s.AvailableAnimations):
        sheet = "Animation_Male" if a.gender == "male" else "Animation_Female"
        rows = self.registry.query_assets(sheet)
        return ok(rows, f"{len(rows)} {a.gender} animation(s)")

    # -- dynamic import ---------------------------------------------------

    def _t_get_importable_asset_types(self, a):
        return ok(self.registry.get_importable_asset_types())

    def _t_get_import_guide(self, a: s.ImportGuide):
        spec = next((r for r in self.registry.receivers() if r.importable_type == a.data_type), None)
        if spec is None:
            raise ToolError("unknown-data-type", f"no importer for {a.data_type!r}",
                            known=[r.importable_type for r in self.registry.receivers()])
        guide = {
            "data_type": spec.importable_type,
            "asset_kind": spec.asset_kind,
            "description": spec.description,
            "public_fields": dict(spec.public_fields),
            "identifier_scheme": f"{spec.importable_type}_<hint>_<6 hex chars of content hash>",
            "idempotent": True,
        }
        return ok(guide)

    def _t_import_dynamic_asset(self, a: s.ImportAsset):
        ident = self.registry.import_dynamic_asset(
            ImportRequest(a.data_type, a.data_source, a.source_type, a.file_extension, a.identifier_hint, a.metadata or {})
        )
        return ok({"identifier": ident}, f"imported {ident}")

    # -- camera -----------------------------------------------------------

    def _t_add_camera(self, a: s.CameraName):
        self.sequence.add_binding(a.camera_name, CAMERA, CAMERA_CLASS, Vec3())
        return ok({"camera_name": a.camera_name}, f"added camera {a.camera_name}")

    def _t_set_active_camera(self, a: s.SetActiveCamera):
        self._camera(a.camera_name)
        r = TimeRange(a.start_time, a.end_time)
        self.sequence.add_camera_cut(a.camera_name, r)
        return ok({"camera_name": a.camera_name, **self._range_data(r)},
                  f"{a.camera_name} active [{r.start:g}, {r.end:g})")

    def _t_get_available_camera_templates(self, a):
        return ok(template_catalogue())

    def _t_apply_camera_template(self, a: s.ApplyTemplate):
        cam = self._camera(a.camera_name)
        if a.position_template not in POSITION_TEMPLATES:
            raise ToolError("unknown-template", f"unknown position template {a.position_template!r}",
                            known=list(POSITION_TEMPLATES))
        model, compute = POSITION_TEMPLATES[a.position_template]
        try:
            pargs = model.model_validate(a.position_args)
        except ValidationError as exc:
            err = _schema_violation(exc)
            raise ToolError(err.code, f"position_args: {err.message}", **err.details) from None
        margs = None
        if a.movement_template is not None:
            if a.movement_template not in MOVEMENT_TEMPLATES:
                raise ToolError("unknown-template", f"unknown movement template {a.movement_template!r}",
                                known=list(MOVEMENT_TEMPLATES))
            try:
                margs = MOVEMENT_TEMPLATES[a.movement_template].model_validate(a.movement_args or {})
            except ValidationError as exc:
                err = _schema_violation(exc)
                raise ToolError(err.code, f"movement_args: {err.message}", **err.details) from None
        elif a.movement_args:
            raise ToolError("schema-violation", "movement_args given without movement_template",
                            problems=[{"field": "movement_args", "problem": "requires movement_template"}])

        shot = TimeRange(a.start_time, a.start_time + a.duration)
        pose = compute(pargs, self._actor_pose)
        if a.movement_template == "Dolly":
            keys = geo.gen_dolly_keyframes(pose, margs.ratio, shot.start, a.duration)
        elif a.movement_template == "Orbit":
            keys = geo.gen_orbit_keyframes(pose, margs.angle, margs.clockwise, shot.start, a.duration,
                                           self.sequence.frame_rate)
        else:
            keys = [geo.MovementKeyframe(shot.start, pose.position, pose.rotation, geo.CONSTANT)]
        cam.location, cam.rotation, cam.keyframes = pose.position, pose.rotation, keys

        description = describe_shot(a.position_template, pargs)
        if margs is not None:
            description += f" with {describe_movement(a.movement_template, margs)}"
        self.sequence.update_metadata(MetadataBlock(a.camera_name, "camera", shot, description))
        return ok(
            {"camera_name": a.camera_name, **pose.to_dict(), "keyframes": geo.keyframes_to_json(keys),
             **self._range_data(shot), "description": description},
            description,
        )

    # -- perception -------------------------------------------------------

    def _t_update_sequence_metadata(self, a: s.UpdateMetadata):
        b = a.new_block
        block = MetadataBlock(b.binding_name, b.track, TimeRange(b.start_time, b.end_time), b.description)
        self.sequence.update_metadata(block)
        return ok(block.to_dict(), "metadata recorded")

    def _t_get_sequence_content(self, a):
        text = serialize_state(self.sequence)
        return ok(json.loads(text), "current sequence")

    def _t_clear_sequence(self, a):
        self.sequence.clear()
        return ok(None, "sequence cleared")

    def _t_set_current_sequence_time(self, a: s.SequenceTime):
        self.sequence.current_time = a.time
        return ok({"time": a.time})

    def _t_move_view(self, a: s.MoveView):
        v = self.view
        yr = math.radians(v.yaw)
        fwd = Vec3(math.cos(yr), math.sin(yr), 0.0)
        right = Vec3(-math.sin(yr), math.cos(yr), 0.0)
        loc = v.location + fwd * a.forward + right * a.horizontal + Vec3(0.0, 0.0, a.vertical)
        pitch = max(-89.0, min(89.0, v.pitch + a.pitch))
        self._view_undo = v
        self.view = ViewPose(loc, Rotator(0.0, v.yaw + a.yaw, 0.0).yaw, pitch)
        return ok(self.view.to_dict(), "viewport moved")

    def _t_undo_move_view(self, a):
        if self._view_undo is None:
            raise ToolError("nothing-to-undo", "no viewport move to undo")
        self.view, self._view_undo = self._view_undo, None
        return ok(self.view.to_dict(), "viewport restored")

    def _t_take_editor_screenshot(self, a: s.EditorScreenshot):
        return ok({"supported": False, "resolution": a.resolution}, "screenshots are not available without a renderer")

    def _t_take_camera_screenshot(self, a: s.CameraScreenshot):
        self._camera(a.camera_name)
        return ok({"supported": False, "camera_name": a.camera_name, "resolution": a.resolution},
                  "screenshots are not available without a renderer")

    def _t_check_character_collisions(self, a: s.CollisionCheck):
        pairs = check_character_overlap(self.sequence, a.time)
        return ok({"collisions": [list(p) for p in pairs]}, f"{len(pairs)} overlapping pair(s)")

    # -- external services (deterministic mocks) --------------------------

    def _t_get_available_tone(self, a: s.AvailableTone):
        tones = self.tones
        if a.character_name:
            c = self._character(a.character_name)
            rec = self.registry.find(c.identifier)
            gender = (rec.public_data.get("gender") or "") if rec else ""
            if gender:
                tones = [t for t in tones if t["gender"] == gender]
        return ok(tones, f"{len(tones)} tone(s)")

    def _t_tts_function_tool(self, a: s.TTS):
        if not a.text.strip():
            raise ToolError("empty-text", "text to synthesize is empty")
        if a.tone and a.tone not in {t["tone"] for t in self.tones}:
            raise ToolError("unknown-tone", f"unknown tone {a.tone!r}", known=[t["tone"] for t in self.tones])
        n = len(a.text.encode("utf-8"))
        wav = silent_wav(TTS_FRAMES_PER_BYTE * n + TTS_LEAD_FRAMES, TTS_SAMPLE_RATE)
        req = ImportRequest(
            "audio_wav", base64.b64encode(wav).decode("ascii"), "base64", "wav", a.identifier,
            {"speech_text": a.text, "gender": a.gender, "tone": a.tone, "emotion": a.emotion},
        )
        ident = self.registry.import_dynamic_asset(req, identifier=a.identifier)
        duration = self.registry.get(ident).public_data["duration"]
        return ok({"identifier": ident, "duration": duration}, f"synthesized {ident} ({duration:g} s)")

    def _t_audio_to_face_expression_tool(self, a: s.AudioToFace):
        audio = self._asset(a.audio_identifier, "unknown-audio", lambda k: k == AUDIO_KIND, "audio asset")
        duration = audio.public_data["duration"]
        payload = _json.dumps(
            {"duration": duration, "audio_identifier": audio.identifier, "emotion": a.emotion}, indent=None
        ).encode("utf-8")
        req = ImportRequest("facial_json", base64.b64encode(payload).decode("ascii"), "base64", "json", a.identifier, {})
        ident = self.registry.import_dynamic_asset(req, identifier=a.identifier)
        return ok({"identifier": ident, "duration": self.registry.get(ident).public_data["duration"]},
                  f"facial animation {ident} from {audio.identifier}")

    def _t_video_understanding_tool(self, a: s.VideoUnderstanding):
        rec = self._asset(a.video_identifier, "unknown-video", lambda k: k == VIDEO_KIND, "video")
        return ok(
            {
                "video_identifier": rec.identifier,
                "task_description": a.task_description,
                "analysis": "no video model is attached; returning registry metadata only",
                "metadata": rec.public_view(),
            },
            "stub analysis",
        )


__all__ = [
    "Bounds",
    "MUTATION_TOOLS",
    "TOOL_NAMES",
    "TOOL_REGISTRY",
    "TOOL_SPECS",
    "ToolSpec",
    "Toolkit",
    "ViewPose",
    "error",
    "ok",
    "tts_duration",
]
