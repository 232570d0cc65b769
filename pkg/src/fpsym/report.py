"""Claim records and deterministic JSON / markdown rendering."""

import json
from dataclasses import dataclass, field
from importlib import resources

from . import __version__

PASS, FAIL, UNRESOLVED = "pass", "fail", "unresolved"
STATUSES = (PASS, FAIL, UNRESOLVED)


@dataclass
class Claim:
    id: str
    description: str
    module: str
    status: str
    residual: str = "0"
    paper_anchor: str = ""
    notes: str = ""
    discrepancy: bool = False
    repair: str = None
    repair_verified: bool = False
    open_question: bool = False

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")
        if self.status == FAIL and not self.residual.strip():
            raise ValueError(f"failing claim {self.id} needs a residual")

    @property
    def excused(self):
        """A documented discrepancy whose corrected reading verifies."""
        return self.discrepancy and self.repair_verified

    def to_dict(self):
        return {
            "id": self.id,
            "description": self.description,
            "module": self.module,
            "paperAnchor": self.paper_anchor,
            "status": self.status,
            "residual": self.residual,
            "notes": self.notes,
            "discrepancy": self.discrepancy,
            "repair": self.repair,
            "repairVerified": self.repair_verified,
            "openQuestion": self.open_question,
        }


@dataclass
class Report:
    claims: list
    seed: int
    artifacts: dict = field(default_factory=dict)

    def __post_init__(self):
        ids = [c.id for c in self.claims]
        dup = sorted({i for i in ids if ids.count(i) > 1})
        if dup:
            raise ValueError(f"duplicate claim ids: {', '.join(dup)}")
        self.claims = sorted(self.claims, key=lambda c: c.id)

    def summary(self):
        counts = {s: 0 for s in STATUSES}
        for c in self.claims:
            counts[c.status] += 1
        counts["total"] = len(self.claims)
        counts["excused"] = sum(1 for c in self.claims if c.status != PASS and c.excused)
        return counts

    def exit_code(self, strict=False):
        for c in self.claims:
            if c.status != PASS and (strict or not c.excused):
                return 1
        return 0

    def to_dict(self, strict=False):
        return {
            "tool": "fpsym",
            "version": __version__,
            "seed": self.seed,
            "strict": strict,
            "summary": self.summary(),
            "exitCode": self.exit_code(strict),
            "claims": [c.to_dict() for c in self.claims],
            "artifacts": dict(sorted(self.artifacts.items())),
        }

    def to_json(self, strict=False):
        return json.dumps(self.to_dict(strict), indent=2, ensure_ascii=False, sort_keys=False) + "\n"

    def to_markdown(self, strict=False):
        d = self.to_dict(strict)
        s = d["summary"]
        lines = [
            f"# fpsym verification report (version {d['version']}, seed {d['seed']})",
            "",
            f"{s['pass']} pass, {s['fail']} fail, {s['unresolved']} unresolved "
            f"({s['excused']} documented discrepancies with verified corrections); exit code {d['exitCode']}",
        ]
        modules = sorted({c.module for c in self.claims})
        for m in modules:
            lines += ["", f"## {m}", "", "| id | status | description | residual | anchor | notes |", "|---|---|---|---|---|---|"]
            for c in self.claims:
                if c.module != m:
                    continue
                note = c.notes
                if c.repair:
                    note = f"{note} corrected: `{c.repair}`".strip()
                if c.open_question:
                    note = f"[open question] {note}"
                lines.append(f"| {c.id} | {c.status} | {_cell(c.description)} | `{_cell(c.residual)}` | {c.paper_anchor} | {_cell(note)} |")
        if self.artifacts:
            lines += ["", "## artifacts", ""]
            for k, v in sorted(self.artifacts.items()):
                lines += [f"### {k}", "", "```", v, "```", ""]
        return "\n".join(lines).rstrip() + "\n"

    def render(self, fmt="json", strict=False):
        return self.to_json(strict) if fmt == "json" else self.to_markdown(strict)


def _cell(text):
    return str(text).replace("|", "\\|").replace("\n", " ")


def schema():
    return json.loads(resources.files("fpsym").joinpath("report.schema.json").read_text(encoding="utf-8"))
