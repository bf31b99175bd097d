from .core import (
    MUTATION_TOOLS,
    TOOL_NAMES,
    TOOL_REGISTRY,
    TOOL_SPECS,
    Bounds,
    Toolkit,
    ToolSpec,
    ViewPose,
    error,
    ok,
    tts_duration,
)
from .orientation import parse_orientation
from .templates import MOVEMENT_TEMPLATES, POSITION_TEMPLATES, template_catalogue

__all__ = [
    "Bounds",
    "MOVEMENT_TEMPLATES",
    "MUTATION_TOOLS",
    "POSITION_TEMPLATES",
    "TOOL_NAMES",
    "TOOL_REGISTRY",
    "TOOL_SPECS",
    "ToolSpec",
    "Toolkit",
    "ViewPose",
    "error",
    "ok",
    "parse_orientation",
    "template_catalogue",
    "tts_duration",
]
