"""Scenario reports: per-case verdicts, JSON emission and transcript storage."""
from __future__ import annotations

import json
import os
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__

VERIFIED = "verified"
REFUTED = "refuted-with-witness"
INCONCLUSIVE = "inconclusive"
VERDICTS = (VERIFIED, REFUTED, INCONCLUSIVE)


@dataclass
class Case:
    key: str
    verdict: str
    witness: object = None
    transcript_hash: str | None = None
    details: dict = field(default_factory=dict)
    # a control case passes when its derivation is refused
    control: bool = False

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def ok(self) -> bool:
        return self.verdict == (REFUTED if self.control else VERIFIED)

    def to_dict(self) -> dict:
        out = {"key": self.key, "verdict": self.verdict, "transcript_hash": self.transcript_hash}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.control:
            out["control"] = True
            out["expected"] = REFUTED
        if self.details:
            out["details"] = self.details
        return out


@dataclass
class Report:
    scenario: str
    params: dict
    cases: list[Case] = field(default_factory=list)
    duration_ms: float = 0.0
    notes: list[str] = field(default_factory=list)
    transcripts: dict = field(default_factory=dict, repr=False)
    sessions: list = field(default_factory=list, repr=False)

    def add(self, case: Case) -> Case:
        self.cases.append(case)
        return case

    def attach(self, session) -> str:
        """Keep the session and its transcript; return the transcript hash."""
        h = session.transcript_hash()
        self.transcripts[h] = session.transcript()
        self.sessions.append(session)
        return h

    def case(self, key: str) -> Case:
        for c in self.cases:
            if c.key == key:
                return c
        raise KeyError(key)

    def totals(self) -> dict:
        counts = Counter(c.verdict for c in self.cases)
        return {v: counts.get(v, 0) for v in VERDICTS} | {"cases": len(self.cases)}

    @property
    def all_ok(self) -> bool:
        return all(c.ok for c in self.cases)

    @property
    def verdict(self) -> str:
        bad = [c for c in self.cases if not c.ok]
        if any(c.verdict != INCONCLUSIVE for c in bad):
            return REFUTED
        if bad:
            return INCONCLUSIVE
        return VERIFIED

    def exit_code(self) -> int:
        return {VERIFIED: 0, REFUTED: 2, INCONCLUSIVE: 3}[self.verdict]

    def to_dict(self) -> dict:
        out = {
            "scenario": self.scenario,
            "params": self.params,
            "cases": [c.to_dict() for c in sorted(self.cases, key=lambda c: c.key)],
            "totals": self.totals(),
            "verdict": self.verdict,
            "duration_ms": round(self.duration_ms, 3),
            "version": __version__,
        }
        if self.notes:
            out["notes"] = self.notes
        return out

    def write(self, out: str | os.PathLike | None = None, transcript_dir: str | os.PathLike | None = None):
        """Append the report as one JSON line to ``out``; store transcripts by hash."""
        if out is not None:
            path = Path(out)
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("a") as fh:
                fh.write(json.dumps(self.to_dict(), sort_keys=True) + "\n")
        if transcript_dir is not None:
            tdir = Path(transcript_dir)
            tdir.mkdir(parents=True, exist_ok=True)
            for h, t in self.transcripts.items():
                target = tdir / f"{h}.json"
                if not target.exists():
                    target.write_text(json.dumps(t, sort_keys=True, indent=1))


def read_reports(path: str | os.PathLike) -> list[dict]:
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]


__all__ = ["Case", "Report", "VERIFIED", "REFUTED", "INCONCLUSIVE", "read_reports"]
