import json
import random

import pytest

from gen import random_sequence
from cutscene import _json
from cutscene.errors import BindingKindError, DuplicateNameError, InvalidRangeError, UnknownBindingError, UnknownCameraError
from cutscene.sequence import (
    ANIMATION,
    AUDIO,
    CAMERA,
    CHARACTER,
    LevelSequence,
    MalformedDocumentError,
    TimeRange,
    check_character_overlap,
    deserialize_state,
    merge_intervals,
    serialize_state,
)
from cutscene.vec import Vec3


def two_chars():
    seq = LevelSequence()
    seq.add_binding("MIRA", CHARACTER, "char_001", Vec3(-60, 0, 0))
    seq.add_binding("REX", CHARACTER, "char_002", Vec3(60, 0, 0))
    return seq


class TestTimeRange:
    @pytest.mark.parametrize("s,e", [(-1, 2), (3, 3), (4, 2), (0, float("inf"))])
    def test_invalid(self, s, e):
        with pytest.raises(InvalidRangeError):
            TimeRange(s, e)

    def test_length(self):
        assert TimeRange(1, 3.5).length == 2.5


class TestMutation:
    def test_duplicate_binding(self):
        seq = two_chars()
        with pytest.raises(DuplicateNameError):
            seq.add_binding("MIRA", CAMERA, "x")

    def test_sections_stay_sorted(self):
        seq = two_chars()
        for s in (5, 1, 3):
            seq.add_section("REX", ANIMATION, f"a{s}", TimeRange(s, s + 1))
        assert [x.range.start for x in seq.get("REX").sections(ANIMATION)] == [1, 3, 5]

    def test_section_on_camera_or_unknown(self):
        seq = two_chars()
        seq.add_binding("Cam", CAMERA, "CineCameraActor")
        with pytest.raises(BindingKindError):
            seq.add_section("Cam", AUDIO, "x", TimeRange(0, 1))
        with pytest.raises(UnknownBindingError):
            seq.add_section("NOBODY", AUDIO, "x", TimeRange(0, 1))

    def test_camera_cut_requires_camera(self):
        seq = two_chars()
        with pytest.raises(UnknownCameraError):
            seq.add_camera_cut("MIRA", TimeRange(0, 1))

    def test_effective_duration_and_clear(self):
        seq = two_chars()
        seq.add_section("REX", ANIMATION, "a", TimeRange(0, 12.5))
        seq.add_binding("Cam", CAMERA, "CineCameraActor")
        seq.add_camera_cut("Cam", TimeRange(10, 20))
        assert seq.effective_duration() == 20
        seq.clear()
        assert seq.effective_duration() == 0 and seq.bindings == []


class TestIntervals:
    def test_merge(self):
        merged, total = merge_intervals([(0, 4), (4, 11), (17, 25), (20, 30), (11, 12)])
        assert merged == [(0, 12), (17, 30)] and total == 25

    def test_clip(self):
        merged, total = merge_intervals([(-5, 3), (28, 40)], clip=(0, 30))
        assert merged == [(0, 3), (28, 30)] and total == 5

    def test_empty(self):
        assert merge_intervals([]) == ([], 0)


class TestOverlap:
    def test_capsules(self):
        seq = two_chars()
        assert check_character_overlap(seq) == []
        seq.add_binding("ODA", CHARACTER, "char_003", Vec3(-30, 10, 0))
        assert check_character_overlap(seq) == [("MIRA", "ODA")]

    def test_bad_time(self):
        with pytest.raises(InvalidRangeError):
            check_character_overlap(two_chars(), -1)


class TestSerialization:
    def test_canonical_text(self):
        seq = two_chars()
        text = serialize_state(seq)
        assert text == _json.dumps(json.loads(text))
        assert '"x"' not in text and "-60.000000" in text

    def test_roundtrip_sample(self):
        rng = random.Random(5)
        for _ in range(100):
            seq = random_sequence(rng)
            text = serialize_state(seq)
            back = deserialize_state(text)
            assert serialize_state(back) == text
            assert back.to_dict() == seq.to_dict()

    def test_negative_zero_is_normalized(self):
        assert _json.format_float(-0.0000001) == "0.000000"

    @pytest.mark.parametrize(
        "doc",
        [
            "not json",
            "[]",
            '{"bindings": [{"name": "A"}]}',
            '{"bindings": [], "frame_rate": 0}',
            '{"bindings": [], "camera_cuts": [{"camera_name": "X", "start": 0, "end": 1}]}',
            '{"bindings": [{"name": "A", "kind": "character", "identifier": "c", "location": [0,0,0], '
            '"rotation": [0,0,0], "tracks": {"audio": [{"asset_id": "a", "start": 2, "end": 1}]}}]}',
        ],
    )
    def test_malformed(self, doc):
        with pytest.raises(MalformedDocumentError):
            deserialize_state(doc)
