"""Verification reports and their JSON form."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .exact_algebra import as_expr, is_zero

PASS = "pass"
FAIL = "fail"
DISCREPANCY = "reported-discrepancy"


@dataclass
class Check:
    id: str
    description: str
    paper_ref: str
    status: str
    witness: str | None = None

    def as_dict(self) -> dict:
        out = {"id": self.id, "description": self.description,
               "paper_ref": self.paper_ref, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class Report:
    model: dict
    checks: list[Check] = field(default_factory=list)

    def add(self, id, description, ref, ok, residual=None):
        """Record a pass/fail check; ``residual`` is serialized on failure."""
        status = PASS if ok else FAIL
        witness = None
        if not ok and residual is not None:
            witness = residual if isinstance(residual, str) else as_expr(residual).to_text()
        self.checks.append(Check(id, description, ref, status, witness))
        return ok

    def add_identity(self, id, description, ref, residual):
        """Pass iff ``residual`` is exactly zero."""
        return self.add(id, description, ref, is_zero(residual), residual)

    def add_comparison(self, id, description, ref, agrees, witness=None):
        """Printed-form comparison: agreement passes, disagreement is reported, never failed."""
        status = PASS if agrees else DISCREPANCY
        if agrees:
            witness = None
        elif witness is not None and not isinstance(witness, str):
            witness = as_expr(witness).to_text()
        self.checks.append(Check(id, description, ref, status, witness))

    def extend(self, other: "Report"):
        self.checks.extend(other.checks)
        return self

    @property
    def summary(self) -> dict:
        return {
            "passed": sum(c.status == PASS for c in self.checks),
            "failed": sum(c.status == FAIL for c in self.checks),
            "discrepancies": sum(c.status == DISCREPANCY for c in self.checks),
        }

    @property
    def ok(self) -> bool:
        return self.summary["failed"] == 0

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def find(self, id: str) -> Check:
        for c in self.checks:
            if c.id == id:
                return c
        raise KeyError(id)

    def as_dict(self) -> dict:
        return {"model": self.model, "checks": [c.as_dict() for c in self.checks],
                "summary": self.summary}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            lines.append(f"[{c.status:>20}] {c.id}: {c.description}")
            if c.witness and c.status != PASS:
                lines.append(f"{'':>23}witness: {c.witness}")
        s = self.summary
        lines.append(f"passed={s['passed']} failed={s['failed']} discrepancies={s['discrepancies']}")
        return "\n".join(lines)
