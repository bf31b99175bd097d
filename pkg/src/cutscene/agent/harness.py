"""Director loop and subagent delegation on top of a server client.

Each director turn runs five substeps in a fixed order: inject the live
sequence state, ask the backend, execute the chosen tools, compress the tool
history, check for completion.  Subagents run synchronously inside the
director's execute substep, each in a server scope that filters its tools.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

from ..errors import CutsceneError, ToolError
from ..prompts import (
    CONTEXT_BLOCK,
    DEFAULT_KEEP_RECENT,
    HistoryEntry,
    PromptElement,
    Tokenizer,
    assemble_prompt,
    compress_history,
    history_messages,
    inject_state,
)
from ..server import RpcError
from ..toolkit import MUTATION_TOOLS, TOOL_NAMES, error, ok
from .backends import BackendError, ModelBackend, ToolIntent
from .presets import (
    CUSTOM,
    DEFAULT_CUSTOM_TURNS,
    DIRECTOR_ELEMENTS,
    DIRECTOR_EXCLUDED,
    PRESETS,
    RUN_SUBAGENT_SCHEMA,
    SubAgentTemplate,
)

SUBSTEPS = ("inject", "reason", "execute", "compress", "check")

COMPLETED = "completed"
TURN_CAP = "turn-cap-exceeded"
BACKEND_FAILURE = "backend-failure"
MAX_TURNS_REACHED = "max-turns-reached"


@dataclass
class DirectorConfig:
    max_turns: int = 200
    keep_recent_n: int = DEFAULT_KEEP_RECENT
    token_budget: int = 8000
    tokenizer: Tokenizer | None = None


@dataclass
class SubAgentResult:
    status: str
    template_name: str
    tool_calls_count: int
    tool_calls: list[dict[str, Any]]
    result_summary: str
    turns_used: int

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass
class DirectorOutcome:
    status: str
    final_message: str
    turns: int
    trajectory: list[dict[str, Any]]
    substeps: list[tuple[int, str]] = field(default_factory=list)
    subagents: list[SubAgentResult] = field(default_factory=list)
    history: list[HistoryEntry] = field(default_factory=list)
    error: str = ""


class Harness:
    """Binds a client (in-process, stdio or HTTP) to a model backend."""

    def __init__(self, client, backend: ModelBackend, config: DirectorConfig | None = None) -> None:
        self.client = client
        self.backend = backend
        self.config = config or DirectorConfig()
        self.project_context = client.project_context()

    # -- director ---------------------------------------------------------

    def director_elements(self) -> list[PromptElement]:
        elements = list(DIRECTOR_ELEMENTS)
        if self.project_context.strip():
            elements.append(PromptElement(CONTEXT_BLOCK, 850, self.project_context.strip(), tag="ProjectContext"))
        return elements

    def director_prompt(self) -> str:
        return assemble_prompt(self.director_elements(), self.config.token_budget, self.config.tokenizer)

    def run_director(self, script_text: str) -> DirectorOutcome:
        cfg = self.config
        allowed = [n for n in TOOL_NAMES if n not in DIRECTOR_EXCLUDED]
        scope = self.client.create_scope(allowed)
        tools = self.client.list_tools(scope) + [RUN_SUBAGENT_SCHEMA]
        system_prompt = self.director_prompt()
        opening = [{"role": "user", "content": script_text}]
        history: list[HistoryEntry] = []
        log: list[tuple[int, str]] = []
        subagents: list[SubAgentResult] = []
        status, final, failure = TURN_CAP, "", ""
        turn = 0
        try:
            while turn < cfg.max_turns:
                turn += 1
                log.append((turn, "inject"))
                conversation = inject_state(opening + history_messages(history), self.client.state())

                log.append((turn, "reason"))
                try:
                    step = self.backend.step(system_prompt, conversation, tools)
                except BackendError as exc:
                    status, failure = BACKEND_FAILURE, exc.message
                    break

                log.append((turn, "execute"))
                for intent in step.tool_calls:
                    result = self._execute(intent, scope, subagents)
                    mutation = intent.tool in MUTATION_TOOLS or intent.tool == RUN_SUBAGENT_SCHEMA["name"]
                    history.append(HistoryEntry(intent.tool, intent.args, result, mutation))

                log.append((turn, "compress"))
                history = compress_history(history, cfg.keep_recent_n)

                log.append((turn, "check"))
                if step.is_final:
                    status, final = COMPLETED, step.final or ""
                    break
        finally:
            self.client.close_scope(scope)
        return DirectorOutcome(
            status=status,
            final_message=final,
            turns=turn,
            trajectory=self.client.trajectory(),
            substeps=log,
            subagents=subagents,
            history=history,
            error=failure,
        )

    def _execute(self, intent: ToolIntent, scope: str, subagents: list[SubAgentResult]) -> dict[str, Any]:
        if intent.tool != RUN_SUBAGENT_SCHEMA["name"]:
            return self.client.call_tool(intent.tool, intent.args, scope=scope)
        args = dict(intent.args)
        try:
            backend = self.backend.for_subagent(str(args.get("template_name", "")), args)
            args.pop("script", None)
            result = self.run_subagent(backend=backend, **args)
        except TypeError as exc:
            return error("schema-violation", f"run_subagent: {exc}")
        except CutsceneError as exc:
            return error(exc.code, exc.message, **exc.details)
        subagents.append(result)
        return ok(result.to_dict(), f"subagent {result.status}")

    # -- subagents --------------------------------------------------------

    def resolve_template(
        self, template_name: str, custom_instructions: str = "", custom_tool_scope: Sequence[str] = ()
    ) -> SubAgentTemplate:
        if template_name == CUSTOM:
            if not custom_instructions.strip() or not custom_tool_scope:
                raise ToolError(
                    "invalid-custom-subagent", "custom mode needs custom_instructions and custom_tool_scope"
                )
            unknown = sorted(set(custom_tool_scope) - set(TOOL_NAMES))
            if unknown:
                raise ToolError("unknown-tool", f"custom scope names unknown tools: {unknown}", unknown=unknown)
            return SubAgentTemplate(CUSTOM, custom_instructions, tuple(custom_tool_scope), DEFAULT_CUSTOM_TURNS)
        template = PRESETS.get(template_name)
        if template is None:
            raise ToolError(
                "unknown-template", f"no subagent template {template_name!r}", known=[*PRESETS, CUSTOM]
            )
        return template

    def run_subagent(
        self,
        template_name: str,
        task: str,
        context: str = "",
        custom_instructions: str = "",
        custom_tool_scope: Sequence[str] = (),
        backend: ModelBackend | None = None,
    ) -> SubAgentResult:
        template = self.resolve_template(template_name, custom_instructions, custom_tool_scope)
        backend = backend or self.backend.for_subagent(template_name, {})
        try:
            scope = self.client.create_scope(list(template.tool_whitelist))
        except RpcError as exc:
            raise ToolError("invalid-scope", exc.message) from exc
        # The subagent starts from nothing but its task and the current state.
        opening = [{"role": "user", "content": task if not context else f"{task}\n\n{context}"}]
        conversation = inject_state(opening, self.client.state())
        calls: list[dict[str, Any]] = []
        status, summary, turns = MAX_TURNS_REACHED, "", 0
        try:
            tools = self.client.list_tools(scope)
            while turns < template.max_turns:
                turns += 1
                step = backend.step(template.system_prompt, conversation, tools)
                if step.is_final:
                    status, summary = COMPLETED, step.final or ""
                    break
                for intent in step.tool_calls:
                    envelope = self.client.call_tool(intent.tool, intent.args, scope=scope)
                    calls.append({"tool": intent.tool, "args": intent.args, "status": envelope["status"]})
                    conversation.append({"role": "tool", "name": intent.tool, "content": str(envelope)})
                conversation = inject_state(conversation, self.client.state())
        except BackendError as exc:
            status, summary = BACKEND_FAILURE, exc.message
        finally:
            closed = self.client.close_scope(scope)
        if closed["calls"] != len(calls):  # the server is the source of truth
            raise CutsceneError(f"scope recorded {closed['calls']} calls, harness saw {len(calls)}")
        if not summary:
            done = sum(c["status"] == "ok" for c in calls)
            summary = f"{done} of {len(calls)} tool calls succeeded"
        return SubAgentResult(status, template.name, len(calls), calls, summary, turns)


def run_director(script_text: str, backend: ModelBackend, client, config: DirectorConfig | None = None) -> DirectorOutcome:
    return Harness(client, backend, config).run_director(script_text)
