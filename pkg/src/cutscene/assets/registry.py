"""Unified asset registry: workbook sheets plus runtime-imported assets.

Agents only ever see :meth:`AssetRecord.public_view`; private fields (engine
paths, class names) stay inside the registry and the loaders it dispatches.
"""

from __future__ import annotations

import base64
import binascii
import difflib
import hashlib
import re
import threading
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping

from .. import _json
from ..errors import (
    AssetError,
    DecodeError,
    DuplicateIdentifierError,
    DuplicateRegistrationError,
    FetchError,
    FilterParseError,
    LoaderDispatchError,
    ReceiverError,
    UnknownAssetError,
    UnknownAssetTypeError,
    UnknownDataTypeError,
    UnknownFilterFieldError,
)
from .filters import NumericCmp, parse_filter
from .record import DYNAMIC, STATIC, AssetRecord
from .sheets import AssetSheet, load_static_tables

SOURCE_TYPES = ("base64", "file_path", "url")
INCLUDE_MODES = ("auto", "only", "never")
REGISTRY_FILE = "dynamic_registry.json"

FILTER_SYNTAX = (
    "Filters map a public field name to an expression; all filters must hold.\n"
    "  value      exact match, case-insensitive (e.g. gender: \"female\")\n"
    "  /pattern/  regular expression searched anywhere in the value, case-insensitive\n"
    "  >=5.0      numeric comparison on float/int fields; operators > >= < <= ="
)

Loader = Callable[[AssetRecord], Any]


@dataclass(frozen=True)
class ReceiverOutput:
    public_data: dict[str, Any]
    private_data: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class ImportRequest:
    data_type: str
    data_source: str
    source_type: str = "base64"
    file_extension: str = ""
    identifier_hint: str = ""
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.source_type not in SOURCE_TYPES:
            raise AssetError(f"source_type must be one of {SOURCE_TYPES}, got {self.source_type!r}")


Receiver = Callable[[bytes, ImportRequest], ReceiverOutput]


@dataclass(frozen=True)
class ReceiverSpec:
    importable_type: str
    loader_type: str
    asset_kind: str
    fn: Receiver
    public_fields: Mapping[str, str]
    description: str = ""


def sanitize_hint(hint: str) -> str:
    s = re.sub(r"[^a-z0-9_]+", "_", hint.lower()).strip("_")
    return re.sub(r"_+", "_", s) or "asset"


def dynamic_identifier(importable_type: str, hint: str, payload: bytes) -> str:
    digest = hashlib.sha256(payload + hint.encode("utf-8")).hexdigest()
    return f"{importable_type}_{sanitize_hint(hint)}_{digest[:6]}"


class AssetRegistry:
    def __init__(
        self,
        sheets: Mapping[str, AssetSheet] | None = None,
        dynamic_dir: str | Path | None = None,
        url_timeout: float = 10.0,
    ) -> None:
        self.sheets: dict[str, AssetSheet] = dict(sheets or {})
        self._static: dict[str, AssetRecord] = {}
        for sheet in self.sheets.values():
            for rec in sheet.rows:
                if rec.identifier in self._static:
                    raise DuplicateIdentifierError(f"identifier {rec.identifier!r} is defined twice")
                self._static[rec.identifier] = rec
        self._dynamic: dict[str, AssetRecord] = {}
        self._loaders: dict[str, Loader] = {}
        self._receivers: dict[str, ReceiverSpec] = {}
        self._lock = threading.RLock()
        self.url_timeout = url_timeout
        self.dynamic_dir = Path(dynamic_dir) if dynamic_dir is not None else None
        if self.dynamic_dir is not None and (self.dynamic_dir / REGISTRY_FILE).exists():
            self.load_dynamic(self.dynamic_dir / REGISTRY_FILE)

    @classmethod
    def from_workbook(cls, workbook_dir: str | Path, **kwargs: Any) -> "AssetRegistry":
        return cls(load_static_tables(workbook_dir), **kwargs)

    # -- extension points -------------------------------------------------

    def register_loader(self, loader_type: str, fn: Loader | None = None):
        """Register ``fn`` for ``loader_type``; without ``fn`` acts as a decorator."""

        def add(f: Loader) -> Loader:
            with self._lock:
                if loader_type in self._loaders:
                    raise DuplicateRegistrationError(f"loader {loader_type!r} is already registered")
                self._loaders[loader_type] = f
            return f

        return add if fn is None else add(fn)

    def register_receiver(
        self,
        importable_type: str,
        loader_type: str,
        asset_kind: str,
        fn: Receiver | None = None,
        public_fields: Mapping[str, str] | None = None,
        description: str = "",
    ):
        def add(f: Receiver) -> Receiver:
            with self._lock:
                if importable_type in self._receivers:
                    raise DuplicateRegistrationError(f"receiver {importable_type!r} is already registered")
                self._receivers[importable_type] = ReceiverSpec(
                    importable_type, loader_type, asset_kind, f, dict(public_fields or {}), description
                )
            return f

        return add if fn is None else add(fn)

    def loader_types(self) -> list[str]:
        return sorted(self._loaders)

    def receivers(self) -> list[ReceiverSpec]:
        return [self._receivers[k] for k in sorted(self._receivers)]

    def load_asset(self, identifier: str) -> Any:
        rec = self.get(identifier)
        try:
            loader = self._loaders[rec.loader_type]
        except KeyError:
            raise LoaderDispatchError(
                f"no loader registered for loader_type {rec.loader_type!r} (asset {identifier!r})",
                loader_type=rec.loader_type,
            ) from None
        return loader(rec)

    # -- lookup -----------------------------------------------------------

    def find(self, identifier: str) -> AssetRecord | None:
        return self._static.get(identifier) or self._dynamic.get(identifier)

    def get(self, identifier: str, asset_kind: str | None = None) -> AssetRecord:
        rec = self.find(identifier)
        if rec is None or (asset_kind is not None and rec.asset_kind != asset_kind):
            pool = self.identifiers(asset_kind)
            what = f"{asset_kind} asset" if asset_kind else "asset"
            raise UnknownAssetError(
                f"unknown {what} {identifier!r}",
                identifier=identifier,
                suggestions=difflib.get_close_matches(identifier, pool, n=3, cutoff=0.5),
            )
        return rec

    def identifiers(self, asset_kind: str | None = None) -> list[str]:
        recs = list(self._static.values()) + list(self._dynamic.values())
        return [r.identifier for r in recs if asset_kind is None or r.asset_kind == asset_kind]

    def dynamic_records(self) -> list[AssetRecord]:
        return list(self._dynamic.values())

    # -- query ------------------------------------------------------------

    def _dynamic_kinds(self) -> list[str]:
        kinds = [spec.asset_kind for spec in self.receivers()]
        kinds += [r.asset_kind for r in self._dynamic.values()]
        return list(dict.fromkeys(kinds))

    def get_queryable_asset_types(self) -> list[str]:
        return list(dict.fromkeys([*self.sheets, *self._dynamic_kinds()]))

    def _field_types(self, asset_type: str, include_generated: str) -> dict[str, str]:
        types: dict[str, str] = {}
        if include_generated != "only" and asset_type in self.sheets:
            types.update(self.sheets[asset_type].public_field_types())
        if include_generated != "never":
            for spec in self.receivers():
                if spec.asset_kind == asset_type:
                    types.update(spec.public_fields)
        return types

    def _check_type(self, asset_type: str) -> None:
        if asset_type not in self.get_queryable_asset_types():
            raise UnknownAssetTypeError(
                f"unknown asset type {asset_type!r}", known=self.get_queryable_asset_types()
            )

    def get_query_instruction(self, asset_type: str) -> dict[str, Any]:
        self._check_type(asset_type)
        fields = []
        if asset_type in self.sheets:
            fields += [
                {"name": c.name, "type": c.data_type, "description": c.description}
                for c in self.sheets[asset_type].public_columns
            ]
        known = {f["name"] for f in fields}
        for spec in self.receivers():
            if spec.asset_kind == asset_type:
                for name, dtype in spec.public_fields.items():
                    if name not in known:
                        fields.append({"name": name, "type": dtype, "description": f"generated by {spec.importable_type}"})
                        known.add(name)
        lines = [f"Asset type {asset_type}. Queryable public fields:"]
        lines += [f"  {f['name']} ({f['type']}): {f['description']}" for f in fields]
        lines.append(FILTER_SYNTAX)
        return {"asset_type": asset_type, "fields": fields, "filter_syntax": FILTER_SYNTAX, "text": "\n".join(lines)}

    def query_assets(
        self,
        asset_type: str,
        filters: Mapping[str, str] | None = None,
        include_generated: str = "auto",
    ) -> list[dict[str, Any]]:
        if include_generated not in INCLUDE_MODES:
            raise AssetError(f"include_generated must be one of {INCLUDE_MODES}, got {include_generated!r}")
        self._check_type(asset_type)
        field_types = self._field_types(asset_type, include_generated)
        compiled = []
        for name, raw in (filters or {}).items():
            if name != "identifier" and name not in field_types:
                raise UnknownFilterFieldError(
                    f"{asset_type} has no public field {name!r}", field=name, known=sorted(field_types)
                )
            expr = parse_filter(raw)
            if isinstance(expr, NumericCmp) and field_types.get(name) not in ("float", "int"):
                raise FilterParseError(f"field {name!r} is not numeric; comparison {raw!r} does not apply")
            compiled.append((name, expr))

        candidates: list[AssetRecord] = []
        if include_generated != "only" and asset_type in self.sheets:
            candidates += self.sheets[asset_type].rows
        if include_generated != "never":
            candidates += [r for r in self._dynamic.values() if r.asset_kind == asset_type]
        out = []
        for rec in candidates:
            view = rec.public_view()
            if all(expr.matches(view.get(name)) for name, expr in compiled):
                out.append(view)
        return out

    # -- dynamic import ---------------------------------------------------

    def get_importable_asset_types(self) -> list[dict[str, Any]]:
        return [
            {
                "data_type": s.importable_type,
                "asset_kind": s.asset_kind,
                "loader_type": s.loader_type,
                "description": s.description,
            }
            for s in self.receivers()
        ]

    def _resolve_bytes(self, req: ImportRequest) -> bytes:
        if req.source_type == "base64":
            try:
                return base64.b64decode(req.data_source, validate=True)
            except (binascii.Error, ValueError) as exc:
                raise DecodeError(f"data_source is not valid base64: {exc}") from None
        if req.source_type == "file_path":
            try:
                return Path(req.data_source).read_bytes()
            except OSError as exc:
                raise DecodeError(f"cannot read {req.data_source!r}: {exc.strerror or exc}") from None
        try:
            with urllib.request.urlopen(req.data_source, timeout=self.url_timeout) as resp:
                return resp.read()
        except (urllib.error.URLError, OSError, ValueError) as exc:
            raise FetchError(f"cannot fetch {req.data_source!r}: {exc}") from None

    def import_dynamic_asset(self, req: ImportRequest, identifier: str | None = None) -> str:
        """Decode, hand to the receiver, and register; all or nothing.

        ``identifier`` overrides the content-addressed name; re-importing the
        same payload under the same name returns the existing record.
        """
        spec = self._receivers.get(req.data_type)
        if spec is None:
            raise UnknownDataTypeError(
                f"no receiver for data type {req.data_type!r}", known=sorted(self._receivers)
            )
        payload = self._resolve_bytes(req)
        digest = hashlib.sha256(payload + req.identifier_hint.encode("utf-8")).hexdigest()
        ident = identifier or dynamic_identifier(req.data_type, req.identifier_hint, payload)
        with self._lock:
            existing = self.find(ident)
            if existing is not None:
                if existing.source == DYNAMIC and existing.private_data.get("content_sha256") == digest:
                    return ident
                raise DuplicateIdentifierError(f"identifier {ident!r} is already registered", identifier=ident)
            try:
                out = spec.fn(payload, req)
            except AssetError:
                raise
            except Exception as exc:
                raise ReceiverError(f"{req.data_type} receiver failed: {exc}") from exc
            public = {k: _round(v) for k, v in out.public_data.items()}
            ext = (req.file_extension or "").lstrip(".").lower() or "bin"
            raw_path = f"memory://{ident}.{ext}"
            if self.dynamic_dir is not None:
                raw_file = self.dynamic_dir / "raw" / f"{ident}.{ext}"
                raw_file.parent.mkdir(parents=True, exist_ok=True)
                raw_file.write_bytes(payload)
                raw_path = str(raw_file)
            private = {
                **{k: _round(v) for k, v in out.private_data.items()},
                "content_sha256": digest,
                "raw_path": raw_path,
                "asset_path": f"/Game/Generated/{spec.asset_kind}/{ident}",
            }
            self._dynamic[ident] = AssetRecord(ident, spec.loader_type, spec.asset_kind, DYNAMIC, public, private)
            if self.dynamic_dir is not None:
                self.save_dynamic(self.dynamic_dir / REGISTRY_FILE)
            return ident

    # -- persistence ------------------------------------------------------

    def dynamic_document(self) -> dict[str, Any]:
        return {"records": [self._dynamic[k].to_dict() for k in sorted(self._dynamic)]}

    def save_dynamic(self, path: str | Path) -> None:
        _json.dump_file(self.dynamic_document(), path)

    def load_dynamic(self, path: str | Path) -> None:
        doc = _json.load_file(path)
        records = {}
        for raw in doc.get("records", []):
            rec = AssetRecord.from_dict(raw)
            if rec.source != DYNAMIC:
                raise AssetError(f"record {rec.identifier!r} in {path} is not dynamic")
            if rec.identifier in self._static or rec.identifier in records:
                raise DuplicateIdentifierError(f"identifier {rec.identifier!r} is already registered")
            records[rec.identifier] = rec
        with self._lock:
            self._dynamic = records


def _round(v: Any) -> Any:
    return _json.round_float(v) if isinstance(v, float) else v


__all__ = [
    "AssetRecord",
    "AssetRegistry",
    "ImportRequest",
    "ReceiverOutput",
    "ReceiverSpec",
    "STATIC",
    "DYNAMIC",
    "dynamic_identifier",
    "sanitize_hint",
]
