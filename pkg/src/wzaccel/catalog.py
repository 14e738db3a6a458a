"""Pair files and the shipped catalog."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import PairFormatError
from .hyperterm import ProperTerm, term_from_json, term_to_json
from .wz import WZForm, find_companion, verify_wz

SHIPPED = ("zeta3-paper",)

_TOP_FIELDS = {"id", "description", "F", "G", "claimedValue"}


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    description: str
    F: ProperTerm
    G: ProperTerm | None = None
    claimed_value: str | None = None

    def to_json(self) -> dict:
        out = {"id": self.id, "description": self.description}
        if self.claimed_value is not None:
            out["claimedValue"] = self.claimed_value
        out["F"] = term_to_json(self.F)
        if self.G is not None:
            out["G"] = term_to_json(self.G)
        return out

    def with_companion(self) -> "CatalogEntry":
        if self.G is not None:
            return self
        return CatalogEntry(self.id, self.description, self.F, find_companion(self.F), self.claimed_value)


def entry_from_json(obj, source: str = "<pair>") -> CatalogEntry:
    if not isinstance(obj, dict):
        raise PairFormatError(f"{source}: top level must be an object")
    extra = set(obj) - _TOP_FIELDS
    if extra:
        raise PairFormatError(f"{source}: unknown fields {sorted(extra)}")
    for name in ("id", "description", "F"):
        if name not in obj:
            raise PairFormatError(f"{source}: missing field {name!r}")
    if not isinstance(obj["id"], str) or not obj["id"]:
        raise PairFormatError(f"{source}: id must be a nonempty string")
    if not isinstance(obj["description"], str):
        raise PairFormatError(f"{source}: description must be a string")
    claimed = obj.get("claimedValue")
    if claimed is not None and not isinstance(claimed, str):
        raise PairFormatError(f"{source}: claimedValue must be a string")
    F = term_from_json(obj["F"], f"{source}: F")
    G = term_from_json(obj["G"], f"{source}: G") if obj.get("G") is not None else None
    if G is not None and G.variables != F.variables:
        raise PairFormatError(f"{source}: F and G use different variables")
    return CatalogEntry(obj["id"], obj["description"], F, G, claimed)


def load_pair(path) -> CatalogEntry:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise PairFormatError(f"{path}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PairFormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return entry_from_json(obj, str(path))


def dumps_pair(entry: CatalogEntry) -> str:
    return json.dumps(entry.to_json(), indent=2) + "\n"


def save_pair(entry: CatalogEntry, path) -> None:
    Path(path).write_text(dumps_pair(entry), encoding="utf-8")


def shipped_entry(pair_id: str) -> CatalogEntry:
    if pair_id not in SHIPPED:
        raise PairFormatError(f"no catalog entry {pair_id!r}")
    text = resources.files("wzaccel").joinpath("data", f"{pair_id}.json").read_text(encoding="utf-8")
    return entry_from_json(json.loads(text), pair_id)


def list_entries() -> list[CatalogEntry]:
    return [shipped_entry(i) for i in SHIPPED]


def resolve(ref: str) -> CatalogEntry:
    """A catalog id or a path to a pair file."""
    if ref in SHIPPED:
        return shipped_entry(ref)
    p = Path(ref)
    if p.exists():
        return load_pair(p)
    raise PairFormatError(f"{ref!r} is neither a catalog id nor a readable pair file")


_pairs: dict[str, WZForm] = {}


def verified_pair(entry: CatalogEntry) -> WZForm:
    """The entry as a verified WZ form, deriving G when absent.

    Raises ``ValueError`` when the stored pair does not satisfy the WZ
    condition.
    """
    key = json.dumps(entry.to_json(), sort_keys=True)
    if key not in _pairs:
        full = entry.with_companion()
        check = verify_wz(full.F, full.G)
        if not check.ok:
            raise ValueError(f"pair {entry.id!r} is not WZ; residue {check.residue}")
        _pairs[key] = check.form
    return _pairs[key]
