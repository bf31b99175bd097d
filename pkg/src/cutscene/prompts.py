"""Prompt assembly, state injection and tool-history compression.

Everything here is a pure function over plain values; the agent harness
decides when to call what.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Sequence

from . import _json
from .toolkit import MUTATION_TOOLS

SYSTEM_INSTRUCTION = "SystemInstruction"
CONTEXT_BLOCK = "ContextBlock"
TEXT_ELEMENT = "TextElement"
KINDS = (SYSTEM_INSTRUCTION, CONTEXT_BLOCK, TEXT_ELEMENT)

SEPARATOR = "\n\n"
STATE_TAG = "current_cutscene_content"
STATE_HEADER = "Contents in current cutscene:"
SUMMARY_TAG = "compressed_tool_calls"
SUMMARY_TOOL = "<summary>"

FULL = "full"
SUMMARIZED = "summarized"
DEFAULT_KEEP_RECENT = 5

Tokenizer = Callable[[str], int]


def approx_tokens(text: str) -> int:
    """Default tokenizer: one token per four UTF-8 bytes, rounded up."""
    return math.ceil(len(text.encode("utf-8")) / 4)


def token_count(text: str, tokenizer: Tokenizer | None = None) -> int:
    return (tokenizer or approx_tokens)(text)


# -- prompt elements ----------------------------------------------------------


@dataclass(frozen=True)
class PromptElement:
    kind: str
    priority: int
    body: str
    tag: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown prompt element kind {self.kind!r}")
        if self.kind == CONTEXT_BLOCK and not self.tag:
            raise ValueError("a ContextBlock needs a tag")

    def render(self) -> str:
        if self.kind == CONTEXT_BLOCK:
            return f"<{self.tag}>\n{self.body}\n</{self.tag}>"
        return self.body


def element_cost(element: PromptElement, tokenizer: Tokenizer | None = None) -> int:
    """Tokens an element adds to a prompt: its rendered text plus one separator.

    This is the quantity the greedy selector compares against the remaining
    budget, so "larger element" in the dominance property means larger cost.
    """
    return token_count(element.render() + SEPARATOR, tokenizer)


def render_elements(elements: Sequence[PromptElement]) -> str:
    """Category order first, then descending priority, then input order."""
    order = sorted(
        range(len(elements)),
        key=lambda i: (KINDS.index(elements[i].kind), -elements[i].priority, i),
    )
    return SEPARATOR.join(elements[i].render() for i in order)


def select_elements(
    elements: Sequence[PromptElement], token_budget: int, tokenizer: Tokenizer | None = None
) -> list[int]:
    """Indices chosen by greedy skip-and-continue in descending priority."""
    if token_budget <= 0:
        raise ValueError("token_budget must be positive")
    scan = sorted(range(len(elements)), key=lambda i: (-elements[i].priority, i))
    chosen: list[int] = []
    remaining = token_budget
    for i in scan:
        cost = element_cost(elements[i], tokenizer)
        if cost <= remaining:
            chosen.append(i)
            remaining -= cost
    # A tokenizer that is not subadditive could still overshoot; shed the
    # lowest-priority picks until the rendered prompt fits.
    while chosen and token_count(render_elements([elements[i] for i in sorted(chosen)]), tokenizer) > token_budget:
        chosen.pop()
    return sorted(chosen)


def assemble_prompt(
    elements: Sequence[PromptElement], token_budget: int | float, tokenizer: Tokenizer | None = None
) -> str:
    if token_budget == math.inf:
        return render_elements(list(elements))
    picked = select_elements(elements, int(token_budget), tokenizer)
    return render_elements([elements[i] for i in picked])


# -- state injection ----------------------------------------------------------


def state_block(doc: str) -> str:
    return f"<{STATE_TAG}>\n{STATE_HEADER}\n{doc}\n</{STATE_TAG}>"


def is_state_message(message: Mapping[str, Any]) -> bool:
    content = message.get("content")
    return isinstance(content, str) and content.startswith(f"<{STATE_TAG}>")


def inject_state(conversation: Iterable[Mapping[str, Any]], doc: str) -> list[dict[str, Any]]:
    """Drop any earlier state block and append a fresh one."""
    kept = [dict(m) for m in conversation if not is_state_message(m)]
    kept.append({"role": "user", "content": state_block(doc)})
    return kept


def extract_state(conversation: Iterable[Mapping[str, Any]]) -> str | None:
    """The document inside the live state block, or None."""
    for m in conversation:
        if is_state_message(m):
            inner = m["content"][len(f"<{STATE_TAG}>\n") : -len(f"\n</{STATE_TAG}>")]
            return inner[len(STATE_HEADER) + 1 :]
    return None


# -- history compression ------------------------------------------------------


@dataclass(frozen=True)
class HistoryEntry:
    """One tool call as the agent saw it, or a summary of several.

    A summary entry has ``tool == SUMMARY_TOOL``, ``detail == "summarized"``
    and lists the collapsed tool names in ``tools``.
    """

    tool: str
    args: Mapping[str, Any] = field(default_factory=dict)
    result: Any = None
    mutation_flag: bool = False
    detail: str = FULL
    tools: tuple[str, ...] = ()

    @classmethod
    def from_call(cls, tool: str, args: Mapping[str, Any], result: Any) -> "HistoryEntry":
        return cls(tool, dict(args), result, tool in MUTATION_TOOLS)

    @classmethod
    def summary(cls, tools: Sequence[str]) -> "HistoryEntry":
        return cls(SUMMARY_TOOL, {}, None, True, SUMMARIZED, tuple(tools))

    @property
    def is_summary(self) -> bool:
        return self.detail == SUMMARIZED

    def covered_tools(self) -> tuple[str, ...]:
        return self.tools if self.is_summary else (self.tool,)

    def render(self) -> str:
        if self.is_summary:
            calls = "".join(f"\n  <call>{name}</call>" for name in self.tools)
            return f"<{SUMMARY_TAG} count=\"{len(self.tools)}\">{calls}\n</{SUMMARY_TAG}>"
        return f"tool {self.tool} {_json.dumps(dict(self.args), indent=None)} -> " + _json.dumps(
            self.result, indent=None
        )


def compress_history(
    entries: Sequence[HistoryEntry], keep_recent_n: int = DEFAULT_KEEP_RECENT
) -> list[HistoryEntry]:
    """Keep the last ``keep_recent_n`` entries and the latest call of each
    query tool in full; fold every older mutation (and earlier summary) into
    a single summary placed where the first folded entry stood.  Older calls
    of a query tool that was called again later are dropped.
    """
    if keep_recent_n < 0:
        raise ValueError("keep_recent_n must be non-negative")
    entries = list(entries)
    cut = max(0, len(entries) - keep_recent_n)
    if cut == 0:
        return entries
    latest_query: dict[str, int] = {}
    for i, e in enumerate(entries):
        if not e.is_summary and not e.mutation_flag:
            latest_query[e.tool] = i

    out: list[HistoryEntry] = []
    folded: list[str] = []
    slot: int | None = None
    for i, e in enumerate(entries[:cut]):
        if e.is_summary or e.mutation_flag:
            if slot is None:
                slot = len(out)
                out.append(e)  # placeholder, replaced below
            folded.extend(e.covered_tools())
        elif latest_query[e.tool] == i:
            out.append(e)
    if slot is not None:
        out[slot] = HistoryEntry.summary(folded)
    out.extend(entries[cut:])
    return out


def history_messages(entries: Iterable[HistoryEntry]) -> list[dict[str, Any]]:
    return [
        {"role": "user" if e.is_summary else "tool", "name": e.tool, "content": e.render()} for e in entries
    ]
