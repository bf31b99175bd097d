import math
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutscene.prompts import (
    CONTEXT_BLOCK,
    KINDS,
    SUMMARY_TOOL,
    SYSTEM_INSTRUCTION,
    TEXT_ELEMENT,
    HistoryEntry,
    PromptElement,
    approx_tokens,
    assemble_prompt,
    compress_history,
    element_cost,
    extract_state,
    history_messages,
    inject_state,
    select_elements,
    state_block,
    token_count,
)
from cutscene.toolkit import MUTATION_TOOLS, TOOL_NAMES

QUERY_TOOLS = sorted(set(TOOL_NAMES) - MUTATION_TOOLS)
MUT_TOOLS = sorted(MUTATION_TOOLS)


def elem(kind, priority, body, tag="T"):
    return PromptElement(kind, priority, body, tag if kind == CONTEXT_BLOCK else None)


elements_strategy = st.lists(
    st.builds(
        elem,
        st.sampled_from(KINDS),
        st.integers(-5, 1200),
        st.text(max_size=80),
        st.from_regex(r"[A-Za-z]{1,6}", fullmatch=True),
    ),
    max_size=12,
)


def word_tokenizer(text):
    # Not subadditive: joining two strings can merge their boundary words.
    return len(text.split()) * 2 + (1 if text.endswith("\n") else 0)


# -- oracles ---------------------------------------------------------------------


def expected_compression(entries, n):
    """Enumerate which entries must survive, independent of the folding code."""
    cut = max(0, len(entries) - n)
    latest = {}
    for i, e in enumerate(entries):
        if not e.is_summary and not e.mutation_flag:
            latest[e.tool] = i
    kept_queries = [entries[i] for i in range(cut) if not entries[i].is_summary
                    and not entries[i].mutation_flag and latest[entries[i].tool] == i]
    folded = Counter(t for e in entries[:cut] if e.is_summary or e.mutation_flag for t in e.covered_tools())
    return kept_queries, folded, entries[cut:]


def random_history(rng, length):
    out = []
    for _ in range(length):
        r = rng.random()
        if r < 0.05 and out:
            out.append(HistoryEntry.summary([rng.choice(MUT_TOOLS) for _ in range(rng.randint(1, 3))]))
        elif r < 0.5:
            t = rng.choice(QUERY_TOOLS[:4])
            out.append(HistoryEntry.from_call(t, {"k": rng.randint(0, 3)}, {"status": "ok"}))
        else:
            t = rng.choice(MUT_TOOLS[:6])
            out.append(HistoryEntry.from_call(t, {"k": rng.randint(0, 3)}, {"status": "ok"}))
    return out


def check_compression(entries, n):
    got = compress_history(entries, n)
    kept_queries, folded, recent = expected_compression(entries, n)
    head, tail = got[: len(got) - len(recent)], got[len(got) - len(recent):]
    assert tail == recent
    summaries = [e for e in head if e.is_summary]
    assert len(summaries) == (1 if folded else 0)
    assert Counter(t for s in summaries for t in s.tools) == folded
    assert [e for e in head if not e.is_summary] == kept_queries
    return got


# -- tokenizer -------------------------------------------------------------------


class TestTokens:
    def test_default_formula(self):
        assert token_count("") == 0
        assert token_count("abcdefgh") == 2
        assert token_count("abcdefghi") == 3
        assert token_count("é") == 1

    def test_pluggable(self):
        assert token_count("a b c", lambda t: 42) == 42

    @given(st.text(), st.text())
    def test_subadditive(self, a, b):
        assert approx_tokens(a + b) <= approx_tokens(a) + approx_tokens(b) + 1


# -- assembly --------------------------------------------------------------------


class TestAssembly:
    def test_category_order_then_priority(self):
        els = [elem(TEXT_ELEMENT, 999, "text"), elem(CONTEXT_BLOCK, 800, "rules", "Rules"),
               elem(SYSTEM_INSTRUCTION, 900, "second"), elem(SYSTEM_INSTRUCTION, 1000, "first"),
               elem(SYSTEM_INSTRUCTION, 1000, "first-b")]
        assert assemble_prompt(els, math.inf) == "first\n\nfirst-b\n\nsecond\n\n<Rules>\nrules\n</Rules>\n\ntext"

    def test_drops_lower_priority_when_tight(self):
        top = [elem(SYSTEM_INSTRUCTION, 1000, "x" * 40), elem(SYSTEM_INSTRUCTION, 1000, "y" * 40)]
        rules = elem(CONTEXT_BLOCK, 800, "z" * 40, "CutsceneRules")
        budget = sum(element_cost(e) for e in top)
        out = assemble_prompt(top + [rules], budget)
        assert "CutsceneRules" not in out and "x" * 40 in out and "y" * 40 in out

    def test_skip_and_continue(self):
        els = [elem(SYSTEM_INSTRUCTION, 10, "a" * 400), elem(TEXT_ELEMENT, 5, "small")]
        assert assemble_prompt(els, 20) == "small"

    def test_empty_and_bad_budget(self):
        assert assemble_prompt([], 10) == ""
        with pytest.raises(ValueError):
            assemble_prompt([elem(TEXT_ELEMENT, 1, "x")], 0)

    def test_context_block_needs_tag(self):
        with pytest.raises(ValueError):
            PromptElement(CONTEXT_BLOCK, 1, "body")
        with pytest.raises(ValueError):
            PromptElement("Footnote", 1, "body")

    @settings(max_examples=300, deadline=None)
    @given(elements_strategy, st.integers(1, 300))
    def test_budget_never_exceeded(self, els, budget):
        assert token_count(assemble_prompt(els, budget)) <= budget

    @settings(max_examples=200, deadline=None)
    @given(elements_strategy, st.integers(1, 300))
    def test_budget_with_non_subadditive_tokenizer(self, els, budget):
        assert word_tokenizer(assemble_prompt(els, budget, word_tokenizer)) <= budget

    @settings(max_examples=300, deadline=None)
    @given(elements_strategy, st.integers(1, 300))
    def test_priority_dominance(self, els, budget):
        chosen = set(select_elements(els, budget))
        scan = sorted(range(len(els)), key=lambda i: (-els[i].priority, i))
        for pos, a in enumerate(scan):
            if a in chosen:
                continue
            for b in scan[pos + 1:]:
                if b in chosen:
                    assert element_cost(els[b]) < element_cost(els[a])


# -- state injection -------------------------------------------------------------


class TestState:
    def test_single_live_block(self):
        conv = [{"role": "user", "content": "make a scene"}]
        conv = inject_state(conv, '{"v": 1}')
        conv.append({"role": "assistant", "content": "ok"})
        conv = inject_state(conv, '{"v": 2}')
        blocks = [m for m in conv if m["content"].startswith("<current_cutscene_content>")]
        assert len(blocks) == 1 and conv[-1] is blocks[0]
        assert extract_state(conv) == '{"v": 2}'
        assert [m["content"] for m in conv[:2]] == ["make a scene", "ok"]

    def test_exact_tag(self):
        assert state_block("DOC") == (
            "<current_cutscene_content>\nContents in current cutscene:\nDOC\n</current_cutscene_content>"
        )

    def test_input_not_mutated(self):
        conv = [{"role": "user", "content": "x"}]
        inject_state(conv, "{}")
        assert conv == [{"role": "user", "content": "x"}]
        assert extract_state(conv) is None


# -- history compression ---------------------------------------------------------


def call(tool, **args):
    return HistoryEntry.from_call(tool, args, {"status": "ok"})


class TestCompression:
    def test_worked_example(self):
        hist = [call("query_assets", asset_type="Characters")]
        hist += [call("add_camera", camera_name=f"C{i}") for i in range(10)]
        out = compress_history(hist, 3)
        assert len(out) == 5
        assert out[0] == hist[0]
        assert out[1].tool == SUMMARY_TOOL and out[1].tools == ("add_camera",) * 7
        assert out[2:] == hist[-3:]

    def test_short_history_unchanged(self):
        hist = [call("add_camera", camera_name="A"), call("query_assets", asset_type="X")]
        assert compress_history(hist, 5) == hist

    def test_latest_query_wins(self):
        old = call("query_assets", asset_type="Characters")
        new = call("query_assets", asset_type="Animation_Male")
        hist = [old, call("add_camera", camera_name="A"), new] + [call("add_camera", camera_name=f"B{i}") for i in range(4)]
        out = compress_history(hist, 2)
        assert old not in out and new in out
        assert [e.tool for e in out] == [SUMMARY_TOOL, "query_assets", "add_camera", "add_camera"]
        assert out[0].tools == ("add_camera",) * 3

    def test_mutation_names_never_lost(self):
        rng = random.Random(2)
        for _ in range(200):
            hist = random_history(rng, rng.randint(0, 30))
            n = rng.randint(0, 6)
            out = compress_history(hist, n)
            before = Counter(t for e in hist if e.is_summary or e.mutation_flag for t in e.covered_tools())
            after = Counter(t for e in out if e.is_summary or e.mutation_flag for t in e.covered_tools())
            assert before == after

    def test_matches_enumerating_oracle(self):
        rng = random.Random(4)
        for _ in range(500):
            hist = random_history(rng, rng.randint(0, 25))
            check_compression(hist, rng.randint(0, 7))

    def test_idempotent(self):
        rng = random.Random(6)
        for _ in range(500):
            hist = random_history(rng, rng.randint(0, 25))
            n = rng.randint(0, 7)
            once = compress_history(hist, n)
            assert compress_history(once, n) == once

    def test_negative_n(self):
        with pytest.raises(ValueError):
            compress_history([], -1)

    def test_render(self):
        s = HistoryEntry.summary(["add_camera", "add_character"])
        text = s.render()
        assert "<call>add_camera</call>" in text and 'count="2"' in text
        msgs = history_messages([s, call("query_assets", asset_type="X")])
        assert msgs[0]["role"] == "user" and msgs[1]["role"] == "tool"
        assert '"asset_type":"X"' in msgs[1]["content"].replace(" ", "")
