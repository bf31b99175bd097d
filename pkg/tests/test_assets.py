import base64
import json
import random

import pytest

from cutscene import errors
from cutscene.assets import (
    AssetRegistry,
    Column,
    ImportRequest,
    default_registry,
    dynamic_identifier,
    format_sheet,
    load_static_tables,
    parse_filter,
    parse_sheet,
    sanitize_hint,
    silent_wav,
)
from cutscene.assets.filters import ExactMatch, NumericCmp, Regex

from gen import random_filters, random_sheet
from oracles import linear_scan


def registry_for(columns, rows, name="Things"):
    sheet = parse_sheet(name, format_sheet(columns, rows).splitlines(keepends=True))
    return AssetRegistry({name: sheet})


def public_rows(rows, pub):
    names = ["identifier"] + [n for n, _ in pub]
    return [{k: r[k] for k in names} for r in rows]


def query_case(rng):
    """Run one randomized query; returns (got, expected, private_names, rows)."""
    columns, rows, pub, priv = random_sheet(rng)
    reg = registry_for(columns, rows)
    filters = random_filters(rng, pub, rows)
    got = reg.query_assets("Things", filters)
    expected = linear_scan(public_rows(rows, pub), filters)
    return got, expected, priv, rows


def leaks(results, priv, rows):
    blob = json.dumps(results)
    return any(p in r for r in results for p in priv) or "SECRET" in blob


class TestSheets:
    def test_sample_workbook_loads(self, sample_workbook):
        sheets = load_static_tables(sample_workbook)
        assert "Characters" in sheets
        chars = sheets["Characters"]
        assert [c.name for c in chars.public_columns] == ["name", "gender"]
        assert [c.name for c in chars.private_columns] == ["class_name", "blueprint_path"]
        alice = chars.rows[0]
        assert alice.identifier == "char_01"
        assert alice.public_view() == {"identifier": "char_01", "name": "Alice", "gender": "female"}
        assert alice.private_data["blueprint_path"] == "/Game/BP/Alice"

    def test_blank_category_inherits_left(self):
        text = "identifier\tloader\tpublic data\t\nid\tl\ta\tb\nstr\tstr\tint\tfloat\n\t\t\t\nx\tk\t3\t1.5\n"
        sheet = parse_sheet("S", text.splitlines(keepends=True))
        assert [c.category for c in sheet.columns][2:] == ["public data", "public data"]
        assert sheet.rows[0].public_data == {"a": 3, "b": 1.5}

    def test_format_parse_roundtrip(self):
        rng = random.Random(3)
        for _ in range(20):
            columns, rows, pub, priv = random_sheet(rng, max_rows=30)
            sheet = parse_sheet("T", format_sheet(columns, rows).splitlines(keepends=True))
            assert [r.identifier for r in sheet.rows] == [r["identifier"] for r in rows]
            for rec, row in zip(sheet.rows, rows):
                assert rec.public_data == {n: row[n] for n, _ in pub}
                assert rec.private_data == {n: row[n] for n in priv}

    @pytest.mark.parametrize(
        "text",
        [
            "identifier\tloader\nid\tl\nstr\tstr\n",  # three header rows
            "identifier\tpublic data\nid\ta\nstr\tstr\n\t\n",  # no loader column
            "identifier\tloader\tpublic data\nid\tl\ta\nstr\tstr\tcomplex\n\t\t\n",  # bad type
            "identifier\tloader\tweird\nid\tl\ta\nstr\tstr\tstr\n\t\t\n",  # bad category
            "identifier\tloader\tpublic data\nid\tl\tid\nstr\tstr\tstr\n\t\t\n",  # repeated name
        ],
    )
    def test_malformed_header(self, text):
        with pytest.raises(errors.MalformedHeaderError):
            parse_sheet("Bad", text.splitlines(keepends=True))

    def test_type_conversion_reports_location(self):
        text = "identifier\tloader\tpublic data\nid\tl\tn\nstr\tstr\tint\n\t\t\nx\tk\tnope\n"
        with pytest.raises(errors.TypeConversionError) as exc:
            parse_sheet("S", text.splitlines(keepends=True))
        assert exc.value.code == "type-conversion-failure"
        assert "row 5" in str(exc.value) and "'n'" in str(exc.value)

    def test_duplicate_identifier_within_sheet(self):
        text = "identifier\tloader\nid\tl\nstr\tstr\n\t\nx\tk\nx\tk\n"
        with pytest.raises(errors.DuplicateIdentifierError):
            parse_sheet("S", text.splitlines(keepends=True))

    def test_duplicate_identifier_across_sheets(self, tmp_path):
        text = "identifier\tloader\nid\tl\nstr\tstr\n\t\nsame\tk\n"
        (tmp_path / "A.tsv").write_text(text)
        (tmp_path / "B.tsv").write_text(text)
        with pytest.raises(errors.DuplicateIdentifierError):
            load_static_tables(tmp_path)

    def test_missing_workbook_dir(self, tmp_path):
        with pytest.raises(errors.AssetError):
            load_static_tables(tmp_path / "nope")
        with pytest.raises(errors.AssetError):
            load_static_tables(tmp_path)


class TestFilters:
    def test_parse_kinds(self):
        assert parse_filter("male") == ExactMatch("male")
        assert isinstance(parse_filter("/gu.rd/"), Regex)
        assert parse_filter(">= 5") == NumericCmp(">=", 5.0)
        assert parse_filter("<-1.5") == NumericCmp("<", -1.5)
        assert parse_filter("/") == ExactMatch("/")

    def test_parse_errors(self):
        with pytest.raises(errors.InvalidRegexError):
            parse_filter("/[unclosed/")
        with pytest.raises(errors.UnparseableNumberError):
            parse_filter(">= five")
        with pytest.raises(errors.UnparseableNumberError):
            parse_filter("> inf")
        with pytest.raises(errors.FilterParseError):
            parse_filter(5)

    def test_none_never_matches(self):
        for expr in (ExactMatch(""), Regex(".*"), NumericCmp(">", -1e9)):
            assert not expr.matches(None)


class TestQuery:
    def test_default_workbook_query(self):
        reg = default_registry()
        types = reg.get_queryable_asset_types()
        assert {"Characters", "Animation_Male", "Animation_Female", "Audio"} <= set(types)
        hits = reg.query_assets("Characters", {"identifier": "/./"})
        assert hits and all("identifier" in h for h in hits)

    def test_sample_queries(self, sample_workbook):
        reg = AssetRegistry.from_workbook(sample_workbook)
        assert [h["identifier"] for h in reg.query_assets("Characters", {"gender": "FEMALE"})] == ["char_01"]
        assert [h["name"] for h in reg.query_assets("Characters", {"name": "/^b/"})] == ["Bob"]

    def test_matches_linear_scan(self):
        rng = random.Random(11)
        for _ in range(100):
            got, expected, priv, rows = query_case(rng)
            assert got == expected
            assert not leaks(got, priv, rows)

    def test_query_errors(self, sample_workbook):
        reg = AssetRegistry.from_workbook(sample_workbook)
        with pytest.raises(errors.UnknownAssetTypeError):
            reg.query_assets("Props")
        with pytest.raises(errors.UnknownFilterFieldError):
            reg.query_assets("Characters", {"blueprint_path": "/Game/"})
        with pytest.raises(errors.FilterParseError):
            reg.query_assets("Characters", {"name": ">3"})
        with pytest.raises(errors.AssetError):
            reg.query_assets("Characters", include_generated="sometimes")

    def test_private_fields_are_not_filterable(self, sample_workbook):
        reg = AssetRegistry.from_workbook(sample_workbook)
        with pytest.raises(errors.UnknownFilterFieldError) as exc:
            reg.query_assets("Characters", {"class_name": "BP_Alice"})
        assert "class_name" not in exc.value.details.get("known", [])

    def test_query_instruction(self, sample_workbook):
        reg = AssetRegistry.from_workbook(sample_workbook)
        info = reg.get_query_instruction("Characters")
        assert [f["name"] for f in info["fields"]] == ["name", "gender"]
        assert "blueprint_path" not in info["text"]
        assert "/pattern/" in info["filter_syntax"]


def wav_request(frames=8000, hint="Line One", **meta):
    payload = base64.b64encode(silent_wav(frames)).decode()
    return ImportRequest("audio_wav", payload, "base64", "wav", hint, meta)


class TestDynamic:
    def test_import_audio(self):
        reg = default_registry()
        ident = reg.import_dynamic_asset(wav_request(12000, speech_text="hi", gender="female"))
        assert ident.startswith("audio_wav_line_one_")
        view = reg.query_assets("Audio", {"identifier": ident})[0]
        assert view["duration"] == 1.5 and view["speech_text"] == "hi"
        assert "content_sha256" not in view and "asset_path" not in view

    def test_identifier_is_content_addressed(self):
        a = dynamic_identifier("audio_wav", "x", b"1")
        assert a == dynamic_identifier("audio_wav", "x", b"1")
        assert a != dynamic_identifier("audio_wav", "x", b"2")
        assert sanitize_hint("Hello,  World!!") == "hello_world"
        assert sanitize_hint("***") == "asset"

    def test_reimport_is_idempotent(self):
        reg = default_registry()
        first = reg.import_dynamic_asset(wav_request())
        assert reg.import_dynamic_asset(wav_request()) == first
        assert len(reg.dynamic_records()) == 1

    def test_include_generated_modes(self, sample_workbook):
        reg = default_registry(sample_workbook)
        ident = reg.import_dynamic_asset(wav_request())
        assert [h["identifier"] for h in reg.query_assets("Audio", include_generated="only")] == [ident]
        assert reg.query_assets("Audio", include_generated="never") == []
        assert reg.query_assets("Characters", include_generated="only") == []

    def test_persistence(self, tmp_path, sample_workbook):
        reg = default_registry(sample_workbook, dynamic_dir=tmp_path)
        ident = reg.import_dynamic_asset(wav_request())
        assert (tmp_path / "dynamic_registry.json").exists()
        assert list((tmp_path / "raw").iterdir())
        again = default_registry(sample_workbook, dynamic_dir=tmp_path)
        assert again.get(ident).public_data == reg.get(ident).public_data

    def test_import_errors_leave_registry_unchanged(self, tmp_path):
        reg = default_registry()
        bad = [
            (ImportRequest("audio_wav", "@@not base64@@"), errors.DecodeError),
            (ImportRequest("audio_wav", str(tmp_path / "missing.wav"), "file_path"), errors.DecodeError),
            (ImportRequest("hologram", "AAAA"), errors.UnknownDataTypeError),
            (ImportRequest("audio_wav", base64.b64encode(b"junk").decode()), errors.ReceiverError),
            (ImportRequest("facial_json", base64.b64encode(b'{"duration": -1}').decode()), errors.ReceiverError),
            (ImportRequest("audio_wav", "http://127.0.0.1:9/x.wav", "url"), errors.FetchError),
        ]
        for req, exc in bad:
            with pytest.raises(exc):
                reg.import_dynamic_asset(req)
        assert reg.dynamic_records() == []

    def test_bad_source_type(self):
        with pytest.raises(errors.AssetError):
            ImportRequest("audio_wav", "x", "ftp")

    def test_identifier_collision_with_static(self, sample_workbook):
        reg = default_registry(sample_workbook)
        with pytest.raises(errors.DuplicateIdentifierError):
            reg.import_dynamic_asset(wav_request(), identifier="char_01")

    def test_facial_and_file_path(self, tmp_path):
        reg = default_registry()
        path = tmp_path / "face.json"
        path.write_text(json.dumps({"duration": 2.25, "audio_identifier": "a1", "emotion": "sad"}))
        ident = reg.import_dynamic_asset(ImportRequest("facial_json", str(path), "file_path", "json", "face"))
        assert reg.get(ident, "FacialAnimation").public_data["duration"] == 2.25

    def test_importable_types(self):
        kinds = {t["data_type"] for t in default_registry().get_importable_asset_types()}
        assert kinds == {"audio_wav", "facial_json", "video_mp4"}


class TestLoaders:
    def test_dispatch(self, sample_workbook):
        reg = default_registry(sample_workbook)
        assert reg.load_asset("char_01")["loader_type"] == "metahuman_character"

    def test_missing_loader(self, sample_workbook):
        reg = AssetRegistry.from_workbook(sample_workbook)
        with pytest.raises(errors.LoaderDispatchError):
            reg.load_asset("char_01")

    def test_duplicate_registration(self):
        reg = default_registry()
        with pytest.raises(errors.DuplicateRegistrationError):
            reg.register_loader("sound_wave", lambda r: None)

    def test_unknown_asset_suggests(self, sample_workbook):
        reg = AssetRegistry.from_workbook(sample_workbook)
        with pytest.raises(errors.UnknownAssetError) as exc:
            reg.get("char_1")
        assert "char_01" in exc.value.details["suggestions"]

    def test_kind_mismatch(self, sample_workbook):
        reg = AssetRegistry.from_workbook(sample_workbook)
        with pytest.raises(errors.UnknownAssetError):
            reg.get("char_01", "Audio")
