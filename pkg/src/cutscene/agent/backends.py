"""Model backends: the scripted test double and an HTTP chat-completions client."""

from __future__ import annotations

import json
import os
import urllib.request
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

from ..errors import CutsceneError


class BackendError(CutsceneError):
    code = "backend-failure"


@dataclass(frozen=True)
class ToolIntent:
    tool: str
    args: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Step:
    """What a backend decided: tool calls to run, or a final message."""

    tool_calls: tuple[ToolIntent, ...] = ()
    final: str | None = None

    @property
    def is_final(self) -> bool:
        return self.final is not None


class ModelBackend(ABC):
    @abstractmethod
    def step(
        self, system_prompt: str, conversation: Sequence[Mapping[str, Any]], tools: Sequence[Mapping[str, Any]]
    ) -> Step:
        ...

    def for_subagent(self, template_name: str, intent_args: Mapping[str, Any]) -> "ModelBackend":
        """Backend a delegated subagent should talk to. Live models reuse themselves."""
        return self


def _parse_item(item: Any) -> Step:
    if not isinstance(item, dict):
        raise BackendError(f"script items must be objects, got {type(item).__name__}")
    if "final" in item:
        return Step(final=str(item["final"]))
    if "tool" in item:
        args = item.get("args", {})
        if not isinstance(args, dict):
            raise BackendError(f"args of {item['tool']!r} must be an object")
        return Step(tool_calls=(ToolIntent(str(item["tool"]), dict(args)),))
    raise BackendError(f"script item needs 'tool' or 'final': {item!r}")


class ScriptedBackend(ModelBackend):
    """Emits a fixed list of ``{tool, args}`` / ``{final}`` items in order.

    A ``run_subagent`` item may carry a ``script`` argument: the list the
    subagent's own scripted backend will play.  Once the list runs out the
    backend finalizes, so an empty script ends the session immediately.
    """

    def __init__(self, items: Sequence[Mapping[str, Any]]) -> None:
        self._steps = [_parse_item(dict(i)) for i in items]
        self._pos = 0
        self.seen: list[list[dict[str, Any]]] = []

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedBackend":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if isinstance(data, dict):
            data = data.get("script", data.get("calls"))
        if not isinstance(data, list):
            raise BackendError(f"{path}: expected a JSON list of script items")
        return cls(data)

    @classmethod
    def from_trajectory(cls, trajectory: Sequence[Mapping[str, Any]]) -> "ScriptedBackend":
        return cls([{"tool": r["tool"], "args": r.get("args", {})} for r in trajectory])

    @property
    def exhausted(self) -> bool:
        return self._pos >= len(self._steps)

    def step(self, system_prompt, conversation, tools) -> Step:
        self.seen.append([dict(m) for m in conversation])
        if self.exhausted:
            return Step(final="")
        s = self._steps[self._pos]
        self._pos += 1
        return s

    def for_subagent(self, template_name, intent_args):
        return ScriptedBackend(intent_args.get("script", []))


class ChatCompletionsBackend(ModelBackend):
    """OpenAI-style ``/chat/completions`` endpoint with function tools.

    Tool results are replayed to the model as plain messages, which keeps the
    harness independent of provider-specific tool-call id bookkeeping.
    """

    def __init__(
        self,
        endpoint: str | None = None,
        model: str | None = None,
        api_key_env: str = "CUTSCENE_LLM_API_KEY",
        temperature: float = 0.0,
        timeout: float = 120.0,
    ) -> None:
        self.endpoint = endpoint or os.environ.get("CUTSCENE_LLM_ENDPOINT", "")
        self.model = model or os.environ.get("CUTSCENE_LLM_MODEL", "")
        if not self.endpoint or not self.model:
            raise BackendError("a live backend needs an endpoint and a model name")
        self.api_key = os.environ.get(api_key_env, "")
        self.temperature = temperature
        self.timeout = timeout

    @staticmethod
    def _messages(system_prompt, conversation):
        msgs = [{"role": "system", "content": system_prompt}]
        for m in conversation:
            role = m.get("role", "user")
            content = m.get("content", "")
            if role == "tool":
                msgs.append({"role": "user", "content": f"[tool result: {m.get('name', '')}]\n{content}"})
            else:
                msgs.append({"role": role, "content": content})
        return msgs

    def complete(self, payload: dict[str, Any]) -> dict[str, Any]:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        req = urllib.request.Request(self.endpoint, data=json.dumps(payload).encode("utf-8"), headers=headers)
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                return json.loads(resp.read().decode("utf-8"))
        except (OSError, ValueError) as exc:
            raise BackendError(f"chat endpoint failed: {exc}") from exc

    def step(self, system_prompt, conversation, tools) -> Step:
        payload = {
            "model": self.model,
            "temperature": self.temperature,
            "messages": self._messages(system_prompt, conversation),
            "tools": [
                {"type": "function", "function": {"name": t["name"], "description": t.get("description", ""),
                                                  "parameters": t.get("inputSchema", {})}}
                for t in tools
            ],
        }
        reply = self.complete(payload)
        try:
            message = reply["choices"][0]["message"]
        except (KeyError, IndexError, TypeError) as exc:
            raise BackendError(f"unexpected chat response shape: {reply!r}") from exc
        calls = message.get("tool_calls") or []
        if not calls:
            return Step(final=message.get("content") or "")
        intents = []
        for c in calls:
            fn = c.get("function", {})
            try:
                args = json.loads(fn.get("arguments") or "{}")
            except json.JSONDecodeError:
                args = {"_unparsed": fn.get("arguments")}
            intents.append(ToolIntent(fn.get("name", ""), args if isinstance(args, dict) else {"_value": args}))
        return Step(tool_calls=tuple(intents))
