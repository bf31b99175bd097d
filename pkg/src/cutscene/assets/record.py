from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

STATIC = "static"
DYNAMIC = "dynamic"


@dataclass
class AssetRecord:
    identifier: str
    loader_type: str
    asset_kind: str
    source: str
    public_data: dict[str, Any] = field(default_factory=dict)
    private_data: dict[str, Any] = field(default_factory=dict)

    def public_view(self) -> dict[str, Any]:
        """What an agent is allowed to see: identifier plus public fields."""
        return {"identifier": self.identifier, **self.public_data}

    def to_dict(self) -> dict[str, Any]:
        return {
            "identifier": self.identifier,
            "loader_type": self.loader_type,
            "asset_kind": self.asset_kind,
            "source": self.source,
            "public_data": dict(self.public_data),
            "private_data": dict(self.private_data),
        }

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "AssetRecord":
        return cls(
            identifier=doc["identifier"],
            loader_type=doc["loader_type"],
            asset_kind=doc["asset_kind"],
            source=doc["source"],
            public_data=dict(doc.get("public_data", {})),
            private_data=dict(doc.get("private_data", {})),
        )
