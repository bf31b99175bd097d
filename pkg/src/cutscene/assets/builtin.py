"""Default loaders and import receivers.

Headless loaders do not spawn anything; they return a small description of
what an engine would have loaded so callers can assert on dispatch.
"""

from __future__ import annotations

import io
import json
import math
import wave
from typing import Any

from .record import AssetRecord
from .registry import AssetRegistry, ImportRequest, ReceiverOutput

AUDIO_KIND = "Audio"
FACIAL_KIND = "FacialAnimation"
VIDEO_KIND = "Video"

LOADER_TYPES = ("metahuman_character", "skeletal_animation", "sound_wave", "facial_animation", "media_source")


def _headless_loader(rec: AssetRecord) -> dict[str, Any]:
    return {"identifier": rec.identifier, "loader_type": rec.loader_type, "asset_kind": rec.asset_kind}


def silent_wav(n_frames: int, sample_rate: int = 8000) -> bytes:
    buf = io.BytesIO()
    with wave.open(buf, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(1)
        w.setframerate(sample_rate)
        w.writeframes(b"\x80" * n_frames)
    return buf.getvalue()


def wav_duration(payload: bytes) -> tuple[float, int]:
    with wave.open(io.BytesIO(payload), "rb") as w:
        rate = w.getframerate()
        return w.getnframes() / rate, rate


def receive_audio(payload: bytes, req: ImportRequest) -> ReceiverOutput:
    try:
        duration, rate = wav_duration(payload)
    except (wave.Error, EOFError) as exc:
        raise ValueError(f"payload is not a PCM WAV file ({exc})") from None
    if duration <= 0:
        raise ValueError("audio has zero length")
    meta = req.metadata
    return ReceiverOutput(
        {
            "duration": duration,
            "speech_text": str(meta.get("speech_text", "")),
            "gender": str(meta.get("gender", "")),
            "tone": str(meta.get("tone", "")),
            "emotion": str(meta.get("emotion", "")),
        },
        {"sample_rate": rate},
    )


def receive_facial(payload: bytes, req: ImportRequest) -> ReceiverOutput:
    try:
        doc = json.loads(payload.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValueError(f"facial payload is not JSON ({exc})") from None
    duration = doc.get("duration") if isinstance(doc, dict) else None
    if isinstance(duration, bool) or not isinstance(duration, (int, float)) or not math.isfinite(duration) or duration <= 0:
        raise ValueError("facial payload needs a positive 'duration'")
    return ReceiverOutput(
        {
            "duration": float(duration),
            "audio_identifier": str(doc.get("audio_identifier", "")),
            "emotion": str(doc.get("emotion", "")),
        }
    )


def receive_video(payload: bytes, req: ImportRequest) -> ReceiverOutput:
    if not payload:
        raise ValueError("video payload is empty")
    return ReceiverOutput(
        {"size_bytes": len(payload), "description": str(req.metadata.get("description", ""))}
    )


def install_defaults(registry: AssetRegistry) -> AssetRegistry:
    for loader_type in LOADER_TYPES:
        registry.register_loader(loader_type, _headless_loader)
    registry.register_receiver(
        "audio_wav", "sound_wave", AUDIO_KIND, receive_audio,
        {"duration": "float", "speech_text": "str", "gender": "str", "tone": "str", "emotion": "str"},
        "PCM WAV speech; duration is read from the header",
    )
    registry.register_receiver(
        "facial_json", "facial_animation", FACIAL_KIND, receive_facial,
        {"duration": "float", "audio_identifier": "str", "emotion": "str"},
        "facial curve bundle as JSON with a duration in seconds",
    )
    registry.register_receiver(
        "video_mp4", "media_source", VIDEO_KIND, receive_video,
        {"size_bytes": "int", "description": "str"},
        "reference video clip",
    )
    return registry
