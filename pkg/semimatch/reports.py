"""Run reports emitted by the command line: named checks plus a result payload."""

import json
from datetime import datetime, timezone
from typing import Any, Dict, List

from pydantic import BaseModel, Field

from semimatch import __version__


class Check(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class RunReport(BaseModel):
    """Outcome of one command; it succeeds exactly when every check passed."""

    command: str
    inputs: Dict[str, Any] = Field(default_factory=dict)
    results: Dict[str, Any] = Field(default_factory=dict)
    checks: List[Check] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(check.passed for check in self.checks)

    def add_check(self, name: str, passed: bool, detail: Any = "") -> Check:
        check = Check(name=name, passed=bool(passed), detail=str(detail))
        self.checks.append(check)
        return check

    def fail(self, error: Exception) -> None:
        self.add_check("error", False, f"{type(error).__name__}: {error}")

    def envelope(self) -> Dict[str, Any]:
        """The report plus a metadata block; only the metadata varies between runs."""
        return {
            "metadata": {
                "generated_at": datetime.now(timezone.utc).isoformat(),
                "version": __version__,
            },
            "report": self.model_dump(mode="json"),
            "ok": self.ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.envelope(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = [f"{self.command}: {'ok' if self.ok else 'FAILED'}"]
        for key, value in sorted(self.results.items()):
            lines.append(f"  {key}: {json.dumps(value, sort_keys=True)}")
        for check in self.checks:
            mark = "PASS" if check.passed else "FAIL"
            suffix = f" ({check.detail})" if check.detail else ""
            lines.append(f"  [{mark}] {check.name}{suffix}")
        return "\n".join(lines)
