from .backends import BackendError, ChatCompletionsBackend, ModelBackend, ScriptedBackend, Step, ToolIntent
from .harness import (
    BACKEND_FAILURE,
    COMPLETED,
    MAX_TURNS_REACHED,
    SUBSTEPS,
    TURN_CAP,
    DirectorConfig,
    DirectorOutcome,
    Harness,
    SubAgentResult,
    run_director,
)
from .replay import ReplayResult, replay_script
from .presets import CUSTOM, DIRECTOR_ELEMENTS, DIRECTOR_EXCLUDED, PRESETS, RUN_SUBAGENT_SCHEMA, SubAgentTemplate

__all__ = [
    "BACKEND_FAILURE",
    "BackendError",
    "COMPLETED",
    "CUSTOM",
    "ChatCompletionsBackend",
    "DIRECTOR_ELEMENTS",
    "DIRECTOR_EXCLUDED",
    "DirectorConfig",
    "DirectorOutcome",
    "Harness",
    "MAX_TURNS_REACHED",
    "ModelBackend",
    "PRESETS",
    "ReplayResult",
    "RUN_SUBAGENT_SCHEMA",
    "SUBSTEPS",
    "ScriptedBackend",
    "Step",
    "SubAgentResult",
    "SubAgentTemplate",
    "TURN_CAP",
    "ToolIntent",
    "replay_script",
    "run_director",
]
