"""Machine-readable reports: one entry per named check."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from sympy.polys.fields import FracElement
from sympy.polys.rings import PolyElement

from . import __version__
from .exact_arith import Rational, format_rational, to_json
from .linalg import SMat

SCHEMA_VERSION = 1
MAX_WITNESS_ENTRIES = 20


def serialize(x):
    """Exact JSON form of witnesses: rationals as "p/q", polynomials as term lists."""
    if isinstance(x, bool) or x is None or isinstance(x, (str, int)):
        return x
    if isinstance(x, Rational):
        return format_rational(x)
    if isinstance(x, (PolyElement, FracElement)):
        return to_json(x)
    if isinstance(x, SMat):
        entries = sorted(x.items(), key=lambda t: (t[0], t[1]))
        return {"shape": list(x.shape), "nnz": x.nnz,
                "entries": [[i, j, serialize(v)] for i, j, v in entries[:MAX_WITNESS_ENTRIES]]}
    if isinstance(x, dict):
        return {str(k): serialize(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [serialize(v) for v in x]
    return str(x)


@dataclass
class Check:
    name: str
    passed: bool
    witness: object = None
    runtime_ms: int = 0

    def to_dict(self):
        d = {"name": self.name, "status": "pass" if self.passed else "fail",
             "runtime_ms": self.runtime_ms}
        if self.witness is not None or not self.passed:
            w = self.witness if self.witness is not None else {"detail": "no witness available"}
            d["witness"] = serialize(w)
        return d


@dataclass
class Report:
    command: str
    parameters: dict
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    _clock: float = field(default_factory=time.perf_counter, repr=False)

    def run(self, name, fn, *args, **kwargs):
        """Run fn -> (passed, witness) and record it under ``name``."""
        t = time.perf_counter()
        passed, witness = fn(*args, **kwargs)
        self._clock = time.perf_counter()
        ms = int((self._clock - t) * 1000)
        self.checks.append(Check(name, bool(passed), witness, ms))
        return passed

    def add(self, name, passed, witness=None, runtime_ms=None):
        """Record a finished check; by default its runtime is the time since the previous one."""
        now = time.perf_counter()
        if runtime_ms is None:
            runtime_ms = int((now - self._clock) * 1000)
        self._clock = now
        self.checks.append(Check(name, bool(passed), witness, runtime_ms))

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_dict(self):
        names = [c.name for c in self.checks]
        if len(names) != len(set(names)):
            raise ValueError("duplicate check names in report")
        return {
            "schema_version": SCHEMA_VERSION,
            "tool": "tractorbgg",
            "version": __version__,
            "command": self.command,
            "parameters": serialize(self.parameters),
            "status": "pass" if self.passed else "fail",
            "checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.name)],
            "data": serialize(self.data),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_table(self):
        rows = [(c.name, "pass" if c.passed else "FAIL", str(c.runtime_ms))
                for c in sorted(self.checks, key=lambda c: c.name)]
        w = max([len(r[0]) for r in rows] + [5])
        lines = [f"{self.command}  {json.dumps(serialize(self.parameters), sort_keys=True)}",
                 f"{'check'.ljust(w)}  status  ms"]
        lines += [f"{n.ljust(w)}  {s.ljust(6)}  {ms}" for n, s, ms in rows]
        for key, val in sorted(self.data.items()):
            lines.append(f"{key}: {json.dumps(serialize(val), sort_keys=True)}")
        lines.append(f"overall: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines)
