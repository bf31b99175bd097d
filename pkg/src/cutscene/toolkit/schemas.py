"""Argument models for every tool.

Models are strict (no string-to-number coercion) and reject unknown fields,
so a mistyped or hallucinated argument is a schema violation rather than a
silently ignored value.
"""

from __future__ import annotations

from typing import Annotated, Any, Literal

from pydantic import BaseModel, ConfigDict, Field

Location = Annotated[list[float], Field(min_length=3, max_length=3)]
Resolution = Annotated[list[int], Field(min_length=2, max_length=2)]
Name = Annotated[str, Field(min_length=1)]
Seconds = Annotated[float, Field(ge=0)]


class Args(BaseModel):
    model_config = ConfigDict(strict=True, extra="forbid")


class NoArgs(Args):
    pass


class AddCharacter(Args):
    name: Name
    identifier: Name
    location: Location = [0.0, 0.0, 0.0]


class OrientToCenter(Args):
    names: Annotated[list[Name], Field(min_length=2)]


class OrientCharacter(Args):
    name: Name
    orientation: Name


class AddAnimation(Args):
    character_name: Name
    identifier: Name
    start_time: Seconds


class AddAudio(Args):
    character_name: Name
    identifier: Name
    start_time: Seconds
    end_time: float
    speech_text: str = ""


class AddFacial(Args):
    character_name: Name
    identifier: Name
    start_time: Seconds
    gender: Literal["male", "female"] = "male"


class QueryInstruction(Args):
    asset_type: Name


class QueryAssets(Args):
    asset_type: Name
    filters: dict[str, str] | None = None
    include_generated: Literal["auto", "only", "never"] = "auto"


class AvailableAnimations(Args):
    gender: Literal["male", "female"] = "male"


class ImportGuide(Args):
    data_type: Name


class ImportAsset(Args):
    data_type: Name
    data_source: Name
    source_type: Literal["base64", "file_path", "url"]
    file_extension: str
    identifier_hint: str = ""
    metadata: dict[str, Any] | None = None


class CameraName(Args):
    camera_name: Name


class SetActiveCamera(Args):
    camera_name: Name
    start_time: Seconds
    end_time: float


class ApplyTemplate(Args):
    camera_name: Name
    position_template: Name
    position_args: dict[str, Any]
    movement_template: str | None = None
    movement_args: dict[str, Any] | None = None
    start_time: Seconds
    duration: Annotated[float, Field(gt=0)]


class MetadataBlockArgs(Args):
    binding_name: Name
    track: Name
    start_time: Seconds
    end_time: float
    description: str


class UpdateMetadata(Args):
    new_block: MetadataBlockArgs


class SequenceTime(Args):
    time: Seconds


class MoveView(Args):
    forward: float = 0.0
    horizontal: float = 0.0
    vertical: float = 0.0
    yaw: float = 0.0
    pitch: float = 0.0


class EditorScreenshot(Args):
    resolution: Resolution = [1280, 720]


class CameraScreenshot(Args):
    camera_name: Name
    resolution: Resolution = [1280, 720]


class CollisionCheck(Args):
    time: Seconds = 0.0


class AvailableTone(Args):
    character_name: str = ""


class TTS(Args):
    identifier: Name
    text: str
    gender: Literal["male", "female"] = "male"
    tone: str = ""
    emotion: str = "normal"


class AudioToFace(Args):
    identifier: Name
    audio_identifier: Name
    emotion: str = "neutral"


class VideoUnderstanding(Args):
    video_identifier: Name
    task_description: Name
