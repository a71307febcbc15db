"""Check records and the versioned JSON report."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

from importlib import resources

import numpy as np
import yaml

SCHEMA_VERSION = 1

PASS, FAIL, SKIP, INFO = "PASS", "FAIL", "SKIP", "INFO"


_TRACE = yaml.safe_load(resources.files(__package__).joinpath("traceability.yaml").read_text())


def equations_for(name: str) -> tuple:
    """Equation labels for a check: exact name, else the longest matching prefix."""
    if name in _TRACE:
        return tuple(_TRACE[name])
    hits = [k for k in _TRACE if name.startswith(k)]
    return tuple(_TRACE[max(hits, key=len)]) if hits else ()


def jsonable(x):
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_dict"):
        return jsonable(x.to_dict())
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": jsonable(x.real), "im": jsonable(x.imag)}
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    return x


@dataclass
class Check:
    name: str
    status: str
    value: object = None
    residual: float | None = None
    tolerance: float | None = None
    equations: tuple = ()
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "value": self.value,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "equations": list(self.equations),
            "reason": self.reason,
        }


def bound(name, residual, tol, equations=(), value=None) -> Check:
    """PASS iff residual <= tol."""
    ok = residual is not None and math.isfinite(residual) and residual <= tol
    return Check(name, PASS if ok else FAIL, value, residual, tol, tuple(equations))


def skipped(name, reason, equations=()) -> Check:
    return Check(name, SKIP, equations=tuple(equations), reason=reason)


@dataclass
class Report:
    command: str
    config: dict
    checks: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)

    def add(self, check: Check) -> Check:
        if not check.equations:
            check.equations = equations_for(check.name)
        self.checks.append(check)
        return check

    @property
    def failed(self) -> bool:
        return any(c.status == FAIL for c in self.checks)

    def summary(self) -> dict:
        counts = {s: sum(c.status == s for c in self.checks) for s in (PASS, FAIL, SKIP, INFO)}
        return {"counts": counts, "status": FAIL if self.failed else PASS}

    def to_dict(self, with_timing: bool = True) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "checks": [c.to_dict() for c in self.checks],
            "results": self.results,
            "summary": self.summary(),
        }
        if with_timing:
            out["timing"] = self.timing
        return jsonable(out)

    def dumps(self, with_timing: bool = True) -> str:
        return json.dumps(self.to_dict(with_timing), indent=2, sort_keys=True) + "\n"


def write_csv(path, columns, rows):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(columns), lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({c: _cell(row.get(c)) for c in columns})


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v
