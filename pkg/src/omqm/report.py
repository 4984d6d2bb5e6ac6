"""Machine-readable run reports: metrics with declared tolerances and verdicts.

One JSON report per run, stable key order, plus one CSV per data product.
Reports are reproducible: with a fixed seed and config, every metric value is
identical across runs (the timestamp is the only varying field).
"""

from __future__ import annotations

import csv
import json
import platform
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path as FsPath

import numpy as _np


@dataclass(frozen=True)
class Assertion:
    """A metric checked against a declared tolerance.

    comparator is one of "lt", "le", "gt", "ge": the assertion passes when
    `value <comparator> tolerance` holds.
    """

    name: str
    value: float
    tolerance: float
    comparator: str = "lt"

    def passed(self) -> bool:
        ops = {"lt": lambda v, t: v < t, "le": lambda v, t: v <= t,
               "gt": lambda v, t: v > t, "ge": lambda v, t: v >= t}
        if self.comparator not in ops:
            raise ValueError(f"unknown comparator {self.comparator!r}")
        return bool(ops[self.comparator](self.value, self.tolerance))

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "tolerance": self.tolerance,
            "comparator": self.comparator,
            "pass": self.passed(),
        }


@dataclass
class Report:
    """Result of one experiment run."""

    experiment: str
    inputs: dict
    seed: int
    metrics: dict = field(default_factory=dict)
    assertions: list = field(default_factory=list)
    outputs: list = field(default_factory=list)

    def add_metric(self, name: str, value: float) -> None:
        self.metrics[name] = float(value)

    def check(self, name: str, value: float, tolerance: float, comparator: str = "lt") -> bool:
        """Record a metric together with its tolerance and verdict."""
        a = Assertion(name=name, value=float(value), tolerance=float(tolerance),
                      comparator=comparator)
        self.metrics[name] = float(value)
        self.assertions.append(a)
        return a.passed()

    def passed(self) -> bool:
        return all(a.passed() for a in self.assertions)

    def as_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "inputs": self.inputs,
            "seed": self.seed,
            "metrics": dict(self.metrics),
            "assertions": [a.as_dict() for a in self.assertions],
            "pass": self.passed(),
            "outputs": list(self.outputs),
            "versions": versions(),
            "timestamp": datetime.now(timezone.utc).isoformat(),
        }

    def write_json(self, path) -> None:
        FsPath(path).write_text(json.dumps(self.as_dict(), indent=2) + "\n", encoding="utf-8")


def versions() -> dict:
    import matplotlib
    import numpy
    import scipy

    from . import __version__

    return {
        "omqm": __version__,
        "python": platform.python_version(),
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
        "matplotlib": matplotlib.__version__,
    }


def _cell(c):
    if isinstance(c, (bool, _np.bool_)):
        return bool(c)
    if isinstance(c, _np.integer):
        return int(c)
    if isinstance(c, (float, _np.floating)):
        return repr(float(c))  # full precision, round-trips exactly
    return c


def write_csv(path_or_buf, header: list, rows) -> None:
    """CSV with header row, ',' separator, '.' decimal, UTF-8."""
    def _write(fh):
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(c) for c in row])

    if hasattr(path_or_buf, "write"):
        _write(path_or_buf)
    else:
        with open(path_or_buf, "w", newline="", encoding="utf-8") as fh:
            _write(fh)


def print_summary(report: Report, stream=sys.stdout) -> None:
    """One line per assertion plus an aggregate verdict."""
    for a in report.assertions:
        verdict = "PASS" if a.passed() else "FAIL"
        print(f"[{verdict}] {report.experiment}: {a.name} = {a.value:.6g} "
              f"({a.comparator} {a.tolerance:g})", file=stream)
    print(f"[{'PASS' if report.passed() else 'FAIL'}] {report.experiment}: aggregate",
          file=stream)
