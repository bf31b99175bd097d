"""Scripted end-to-end runs: script in, trajectory and snapshot out."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from ..server import CutsceneServer, InProcessClient
from .backends import ScriptedBackend
from .harness import DirectorConfig, DirectorOutcome, run_director


@dataclass
class ReplayResult:
    outcome: DirectorOutcome
    snapshot: str  # serialized sequence, newline-terminated

    @property
    def trajectory(self) -> list[dict[str, Any]]:
        return self.outcome.trajectory


def replay_script(
    items: Sequence[Mapping[str, Any]],
    script_text: str = "",
    client=None,
    config: DirectorConfig | None = None,
) -> ReplayResult:
    """Drive the director with a scripted backend.

    Without a client this spins up a private in-process server, so repeated
    runs never share state.
    """
    server = None
    if client is None:
        server = CutsceneServer()
        client = InProcessClient(server)
    try:
        outcome = run_director(script_text, ScriptedBackend(items), client, config)
        return ReplayResult(outcome, client.state() + "\n")
    finally:
        if server is not None:
            server.close()
