"""Seed catalog: the asserted facts and exact values the derivation starts
from, one record per claim with its citation.  Nothing here is hard-coded in
rule logic; swapping the catalog tests counterfactuals."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import games
from .board import topology_from_token
from .facts import Asserted, BoardKey, OutcomeSet
from .knowledge import KnowledgeBase


@dataclass(frozen=True)
class SeedRecord:
    kind: str  # "fact" | "value"
    key: BoardKey
    outcomes: OutcomeSet | None
    value_text: str | None
    citation: str

    def describe(self) -> str:
        body = str(self.outcomes) if self.kind == "fact" else self.value_text
        return f"{self.key} = {body} ({self.citation})"


def parse_seed_line(line: str) -> SeedRecord:
    rec = json.loads(line)
    key = BoardKey(topology_from_token(rec["topology"]), rec["width"], rec["length"])
    if rec["kind"] == "fact":
        return SeedRecord(
            "fact", key, OutcomeSet.from_tokens(rec["outcomes"]), None,
            rec.get("citation", ""),
        )
    if rec["kind"] == "value":
        return SeedRecord("value", key, None, rec["value"], rec.get("citation", ""))
    raise ValueError(f"unknown seed kind {rec['kind']!r}")


def load_seed_catalog(path: str | Path | None = None) -> list[SeedRecord]:
    if path is None:
        text = resources.files("domineering").joinpath("data/seed_catalog.jsonl").read_text()
    else:
        text = Path(path).read_text()
    return [parse_seed_line(line) for line in text.splitlines() if line.strip()]


def apply_seeds(kb: KnowledgeBase, seeds: list[SeedRecord]) -> None:
    for seed in seeds:
        if seed.kind == "fact":
            kb.seed_fact(seed.key, seed.outcomes, Asserted(seed.citation))
        else:
            kb.seed_value(seed.key, games.parse(seed.value_text), seed.citation)


def default_knowledge_base(width_horizon: int = 13, length_horizon: int = 64,
                           skip: BoardKey | None = None) -> KnowledgeBase:
    """Knowledge base seeded from the packaged catalog (optionally with one
    seed withheld, for counterfactual runs)."""
    kb = KnowledgeBase(width_horizon, length_horizon)
    seeds = load_seed_catalog()
    if skip is not None:
        seeds = [s for s in seeds if s.key != skip]
    apply_seeds(kb, seeds)
    return kb
