"""Director prompt elements and the preset specialist subagents."""

from __future__ import annotations

from dataclasses import dataclass

from ..prompts import CONTEXT_BLOCK, SYSTEM_INSTRUCTION, TEXT_ELEMENT, PromptElement
from ..toolkit import TOOL_NAMES

CUSTOM = "custom"
SHARED_TOOLS = ("get_sequence_content",)
DEFAULT_CUSTOM_TURNS = 15

# Tools the director never sees: destructive or render-only.
DIRECTOR_EXCLUDED = frozenset({"clear_sequence", "take_editor_screenshot", "take_camera_screenshot"})


@dataclass(frozen=True)
class SubAgentTemplate:
    name: str
    system_prompt: str
    tool_whitelist: tuple[str, ...]
    max_turns: int

    def __post_init__(self) -> None:
        unknown = set(self.tool_whitelist) - set(TOOL_NAMES)
        if unknown:
            raise ValueError(f"{self.name}: whitelist names unknown tools {sorted(unknown)}")
        if self.max_turns <= 0:
            raise ValueError(f"{self.name}: max_turns must be positive")


def _preset(name, prompt, tools, turns):
    return SubAgentTemplate(name, prompt, tuple(tools) + SHARED_TOOLS, turns)


PRESETS: dict[str, SubAgentTemplate] = {
    t.name: t
    for t in (
        _preset(
            "Scene Specialist",
            "You place characters on the stage. Spawn each requested character, keep "
            "dialogue partners at conversational distance, and turn them toward one another. "
            "Two people: (-60, 0, 0) and (60, 0, 0). Three people: (-60, 0, 0), (30, -52, 0), "
            "(30, 52, 0). Follow any explicit positions in the task instead.",
            ["add_character", "orient_character_to_center", "orient_character", "get_available_characters"],
            20,
        ),
        _preset(
            "Animation Specialist",
            "You choose body animations. Match clip mood to the line being spoken, make clip "
            "lengths cover the dialogue they accompany, and never let two clips overlap on one "
            "character. Query the catalogue before adding anything.",
            ["add_character_animation", "get_available_animations", "query_assets"],
            30,
        ),
        _preset(
            "Cinematographer",
            "You own the cameras. Create a camera, position it with a template, then give it a "
            "slot on the cut track. Open on a wide shot, cover dialogue with alternating "
            "over-the-shoulder angles, and avoid cutting between two identical framings.",
            ["add_camera", "set_active_camera", "apply_camera_template", "get_available_camera_templates"],
            25,
        ),
        _preset(
            "Sound Designer",
            "You voice the dialogue. Pick one tone per character and keep it. For every line: "
            "synthesize speech, attach it with end = start + duration, derive the facial track "
            "from that audio, and attach the facial track at the same start time.",
            [
                "tts_function_tool",
                "add_character_audio",
                "audio_to_face_expression_tool",
                "add_character_facial_animation",
                "get_available_tone",
            ],
            30,
        ),
        _preset(
            "Photographer",
            "You adjust the editor viewport in small steps and judge framing from screenshots. "
            "Undo any move that made things worse.",
            ["move_view", "undo_move_view", "take_editor_screenshot"],
            10,
        ),
    )
}


DIRECTOR_ELEMENTS: tuple[PromptElement, ...] = (
    PromptElement(SYSTEM_INSTRUCTION, 1000, "You are the director of an in-engine cutscene, working only through the provided tools."),
    PromptElement(SYSTEM_INSTRUCTION, 1000, "Keep all content suitable for a general game audience."),
    PromptElement(
        SYSTEM_INSTRUCTION, 1000,
        "Turn the script into a complete timeline. Do the work yourself or hand focused pieces to specialists via run_subagent.",
    ),
    PromptElement(
        SYSTEM_INSTRUCTION, 900,
        "Call one tool at a time. Create a thing before referring to it, and list available assets before picking one.",
    ),
    PromptElement(
        CONTEXT_BLOCK, 800,
        "Work order: characters, then speech and faces, then body animation, then cameras. "
        "The current_cutscene_content block always shows the live timeline; read it instead of guessing.",
        tag="CutsceneCreation",
    ),
    PromptElement(
        CONTEXT_BLOCK, 800,
        "Two characters: (-60, 0, 0) and (60, 0, 0). Three: (-60, 0, 0), (30, -52, 0), (30, 52, 0). "
        "Leave about 70 cm between neighbours and 40 cm front to back, then orient them to the group center.",
        tag="ActorRules",
    ),
    PromptElement(
        CONTEXT_BLOCK, 800,
        "A character keeps one voice tone for the whole scene; vary emotion, not tone. Speak only quoted dialogue. "
        "Audio end_time is start_time plus the duration the TTS tool reports.",
        tag="AudioRules",
    ),
    PromptElement(
        CONTEXT_BLOCK, 800,
        "Animation tags: timing (Speak, Gap, Solo), expressiveness (Light, Medium, Heavy), mood, duration. "
        "Clips on one character must not overlap and should span that character's lines.",
        tag="AnimationRules",
    ),
    PromptElement(
        CONTEXT_BLOCK, 800,
        "Position cameras with apply_camera_template. OTS comes in near, mid and high; Dolly pushes or pulls, Orbit arcs. "
        "Change shot type from cut to cut.",
        tag="CameraRules",
    ),
    PromptElement(
        CONTEXT_BLOCK, 800,
        "Sequential calls only. A failed call changes nothing; fix the arguments and retry.",
        tag="ToolUsage",
    ),
    PromptElement(
        TEXT_ELEMENT, 750,
        "run_subagent(template_name, task, context) delegates to one of: "
        + ", ".join(PRESETS)
        + ", or 'custom' with custom_instructions and custom_tool_scope. It returns status, "
        "tool_calls_count, tool_calls, result_summary and turns_used.",
    ),
)


RUN_SUBAGENT_SCHEMA = {
    "name": "run_subagent",
    "description": "Delegate a task to a preset specialist or a custom subagent.",
    "inputSchema": {
        "type": "object",
        "properties": {
            "template_name": {"type": "string", "enum": [*PRESETS, CUSTOM]},
            "task": {"type": "string"},
            "context": {"type": "string", "default": ""},
            "custom_instructions": {"type": "string", "default": ""},
            "custom_tool_scope": {"type": "array", "items": {"type": "string"}, "default": []},
        },
        "required": ["template_name", "task"],
        "additionalProperties": False,
    },
    "mutation": True,
    "category": "agent",
}
