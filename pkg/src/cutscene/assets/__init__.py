from importlib import resources
from pathlib import Path

from .builtin import AUDIO_KIND, FACIAL_KIND, VIDEO_KIND, install_defaults, silent_wav, wav_duration
from .filters import ExactMatch, NumericCmp, Regex, parse_filter
from .record import DYNAMIC, STATIC, AssetRecord
from .registry import AssetRegistry, ImportRequest, ReceiverOutput, dynamic_identifier, sanitize_hint
from .sheets import AssetSheet, Column, format_sheet, load_sheet, load_static_tables, parse_sheet


def default_workbook_dir() -> Path:
    return Path(str(resources.files("cutscene") / "data" / "workbook"))


def default_registry(workbook_dir=None, dynamic_dir=None) -> AssetRegistry:
    reg = AssetRegistry.from_workbook(workbook_dir or default_workbook_dir(), dynamic_dir=dynamic_dir)
    return install_defaults(reg)


__all__ = [
    "AUDIO_KIND",
    "FACIAL_KIND",
    "VIDEO_KIND",
    "AssetRecord",
    "AssetRegistry",
    "AssetSheet",
    "Column",
    "DYNAMIC",
    "ExactMatch",
    "ImportRequest",
    "NumericCmp",
    "ReceiverOutput",
    "Regex",
    "STATIC",
    "default_registry",
    "default_workbook_dir",
    "dynamic_identifier",
    "format_sheet",
    "install_defaults",
    "load_sheet",
    "load_static_tables",
    "parse_filter",
    "parse_sheet",
    "sanitize_hint",
    "silent_wav",
    "wav_duration",
]
