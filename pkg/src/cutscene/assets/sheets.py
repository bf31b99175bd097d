"""Workbook sheets stored as tab-separated files with a four-row header.

Row 1 holds the column category (``identifier``, ``loader``, ``public data``
or ``private data``); a blank cell repeats the category to its left.  Row 2
is the field name, row 3 its type (str, float, int, bool) and row 4 a
free-text description shown to agents.  Data rows follow.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

from ..errors import AssetError, DuplicateIdentifierError, MalformedHeaderError, TypeConversionError
from .record import STATIC, AssetRecord

IDENTIFIER = "identifier"
LOADER = "loader"
PUBLIC = "public data"
PRIVATE = "private data"
CATEGORIES = (IDENTIFIER, LOADER, PUBLIC, PRIVATE)
DATA_TYPES = ("str", "float", "int", "bool")

_TRUE = {"true", "1", "yes"}
_FALSE = {"false", "0", "no"}


@dataclass(frozen=True)
class Column:
    category: str
    name: str
    data_type: str
    description: str = ""


def convert_cell(text: str, data_type: str) -> Any:
    if data_type == "str":
        return text
    text = text.strip()
    if text == "":
        return None
    if data_type == "float":
        value = float(text)
        if not math.isfinite(value):
            raise ValueError("not finite")
        return value
    if data_type == "int":
        return int(text)
    if data_type == "bool":
        low = text.lower()
        if low in _TRUE:
            return True
        if low in _FALSE:
            return False
        raise ValueError("not a boolean")
    raise ValueError(f"unknown type {data_type}")


@dataclass
class AssetSheet:
    sheet_name: str
    columns: list[Column]
    rows: list[AssetRecord] = field(default_factory=list)

    def __post_init__(self):
        cats = [c.category for c in self.columns]
        if cats.count(IDENTIFIER) != 1 or cats.count(LOADER) != 1:
            raise MalformedHeaderError(
                f"sheet {self.sheet_name!r} needs exactly one identifier and one loader column",
                sheet=self.sheet_name,
            )
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise MalformedHeaderError(f"sheet {self.sheet_name!r} repeats a field name", sheet=self.sheet_name)

    @property
    def public_columns(self) -> list[Column]:
        return [c for c in self.columns if c.category == PUBLIC]

    @property
    def private_columns(self) -> list[Column]:
        return [c for c in self.columns if c.category == PRIVATE]

    def public_field_types(self) -> dict[str, str]:
        return {c.name: c.data_type for c in self.public_columns}


def _read_header(rows: list[list[str]], sheet_name: str) -> list[Column]:
    if len(rows) < 4:
        raise MalformedHeaderError(f"sheet {sheet_name!r} has fewer than 4 header rows", sheet=sheet_name)
    width = len(rows[1])
    if width == 0 or any(len(r) != width for r in rows[:4]):
        raise MalformedHeaderError(f"sheet {sheet_name!r} header rows differ in width", sheet=sheet_name)
    columns = []
    category = ""
    for i in range(width):
        cat = rows[0][i].strip().lower() or category
        if cat not in CATEGORIES:
            raise MalformedHeaderError(
                f"sheet {sheet_name!r} column {i + 1}: unknown category {rows[0][i]!r}", sheet=sheet_name
            )
        category = cat
        name = rows[1][i].strip()
        dtype = rows[2][i].strip().lower()
        if not name:
            raise MalformedHeaderError(f"sheet {sheet_name!r} column {i + 1} has no field name", sheet=sheet_name)
        if dtype not in DATA_TYPES:
            raise MalformedHeaderError(
                f"sheet {sheet_name!r} field {name!r}: unknown data type {rows[2][i]!r}", sheet=sheet_name
            )
        columns.append(Column(category, name, dtype, rows[3][i].strip()))
    return columns


def parse_sheet(sheet_name: str, lines: Iterable[str]) -> AssetSheet:
    rows = list(csv.reader(lines, delimiter="\t", quoting=csv.QUOTE_NONE))
    sheet = AssetSheet(sheet_name, _read_header(rows, sheet_name))
    seen: set[str] = set()
    for line_no, row in enumerate(rows[4:], start=5):
        if not any(cell.strip() for cell in row):
            continue
        row = row + [""] * (len(sheet.columns) - len(row))
        if len(row) > len(sheet.columns):
            raise MalformedHeaderError(
                f"sheet {sheet_name!r} row {line_no} has more cells than header columns", sheet=sheet_name
            )
        values: dict[str, Any] = {}
        for col, cell in zip(sheet.columns, row):
            try:
                values[col.name] = convert_cell(cell, col.data_type)
            except ValueError:
                raise TypeConversionError(
                    f"sheet {sheet_name!r} row {line_no} column {col.name!r}: "
                    f"cannot convert {cell!r} to {col.data_type}",
                    sheet=sheet_name,
                    row=line_no,
                    column=col.name,
                ) from None
        ident_col = next(c for c in sheet.columns if c.category == IDENTIFIER)
        loader_col = next(c for c in sheet.columns if c.category == LOADER)
        ident = str(values[ident_col.name] or "").strip()
        if not ident:
            raise TypeConversionError(
                f"sheet {sheet_name!r} row {line_no} has an empty identifier",
                sheet=sheet_name, row=line_no, column=ident_col.name,
            )
        if ident in seen:
            raise DuplicateIdentifierError(
                f"identifier {ident!r} appears twice in sheet {sheet_name!r}", identifier=ident
            )
        seen.add(ident)
        sheet.rows.append(
            AssetRecord(
                identifier=ident,
                loader_type=str(values[loader_col.name] or ""),
                asset_kind=sheet_name,
                source=STATIC,
                public_data={c.name: values[c.name] for c in sheet.public_columns},
                private_data={c.name: values[c.name] for c in sheet.private_columns},
            )
        )
    return sheet


def load_sheet(path: str | Path) -> AssetSheet:
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_sheet(path.stem, fh)


def load_static_tables(workbook_dir: str | Path) -> dict[str, AssetSheet]:
    """Parse every ``*.tsv`` sheet in a directory, keyed by sheet name."""
    workbook_dir = Path(workbook_dir)
    if not workbook_dir.is_dir():
        raise AssetError(f"workbook directory {str(workbook_dir)!r} does not exist")
    paths = sorted(workbook_dir.glob("*.tsv"))
    if not paths:
        raise AssetError(f"workbook directory {str(workbook_dir)!r} contains no .tsv sheets")
    sheets: dict[str, AssetSheet] = {}
    owner: dict[str, str] = {}
    for p in paths:
        sheet = load_sheet(p)
        for rec in sheet.rows:
            if rec.identifier in owner:
                raise DuplicateIdentifierError(
                    f"identifier {rec.identifier!r} appears in sheets {owner[rec.identifier]!r} "
                    f"and {sheet.sheet_name!r}",
                    identifier=rec.identifier,
                )
            owner[rec.identifier] = sheet.sheet_name
        sheets[sheet.sheet_name] = sheet
    return sheets


def format_sheet(columns: list[Column], rows: list[dict[str, Any]]) -> str:
    """Inverse of :func:`parse_sheet` for cells free of tabs and newlines."""

    def text(v: Any) -> str:
        if v is None:
            return ""
        if isinstance(v, bool):
            return "true" if v else "false"
        return str(v)

    lines = [
        [c.category for c in columns],
        [c.name for c in columns],
        [c.data_type for c in columns],
        [c.description for c in columns],
    ]
    lines += [[text(r.get(c.name)) for c in columns] for r in rows]
    return "".join("\t".join(line) + "\n" for line in lines)
