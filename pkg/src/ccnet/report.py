"""Benchmark rows in the style of a "solver vs. full mesh" table.

The verified flag is always recomputed with :func:`verify_safe_paths`; a
solver's own claim is never trusted.
"""

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

from .ibgp import verify_safe_paths

COLUMNS = ["instance", "n", "full_mesh", "solver", "value", "fraction", "verified", "runtime_ms", "lower_bound"]


@dataclass
class SolveReport:
    instance: str
    n: int
    solver: str
    value: int  # edge count (sum) or maximum degree (degree)
    verified: bool
    runtime_ms: Optional[float] = None
    lower_bound: Optional[Fraction] = None
    seed: Optional[int] = None
    variant: str = "sum"

    @property
    def full_mesh(self):
        return math.comb(self.n, 2)

    @property
    def fraction(self):
        """Overlay size over full-mesh size (sum variant)."""
        if self.full_mesh == 0:
            return Fraction(0)
        return Fraction(self.value, self.full_mesh)

    def row(self):
        lb = "" if self.lower_bound is None else format_bound(self.lower_bound)
        rt = "" if self.runtime_ms is None else f"{self.runtime_ms:.1f}"
        return [self.instance, str(self.n), str(self.full_mesh), self.solver, str(self.value),
                format_percent(self.fraction), "yes" if self.verified else "no", rt, lb]


def format_bound(x):
    """Exact when the denominator is small, otherwise four decimals."""
    if isinstance(x, float):
        return f"{x:.4f}"
    x = Fraction(x)
    if x.denominator <= 1000:
        return str(x)
    return f"{float(x):.4f}"


def format_percent(frac):
    return f"{100 * float(frac):.2f}%"


def measure(instance, sys, overlay, solver, start, lower_bound=None, seed=None, variant="sum", timed=True):
    """Build a report row for ``overlay``, re-verifying it against ``sys``."""
    runtime = (time.perf_counter() - start) * 1000 if timed else None
    ok = verify_safe_paths(sys, overlay).ok
    value = len(overlay) if variant == "sum" else overlay.max_degree()
    return SolveReport(instance, sys.n, solver, value, ok, runtime, lower_bound, seed, variant)


def write_report(reports, fmt="text") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in reports:
            w.writerow(r.row())
        return buf.getvalue()
    if fmt == "json":
        rows = []
        for r in reports:
            d = dict(zip(COLUMNS, r.row()))
            d.update(n=r.n, full_mesh=r.full_mesh, value=r.value, verified=r.verified,
                     runtime_ms=r.runtime_ms, seed=r.seed, variant=r.variant,
                     lower_bound=None if r.lower_bound is None else format_bound(r.lower_bound))
            rows.append(d)
        return json.dumps(rows, indent=1) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    header = ["instance", "n", "full-mesh", "solver", "value", "fraction", "verified", "runtime_ms", "lower_bound"]
    rows = [header] + [r.row() for r in reports]
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines) + "\n"


def read_report_csv(text):
    """Parse :func:`write_report` CSV output back into SolveReport rows."""
    out = []
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is not None and reader.fieldnames != COLUMNS:
        raise ValueError(f"unexpected columns {reader.fieldnames}")
    for rec in reader:
        rt = rec["runtime_ms"]
        lb = rec["lower_bound"]
        rep = SolveReport(rec["instance"], int(rec["n"]), rec["solver"], int(rec["value"]),
                          rec["verified"] == "yes", float(rt) if rt else None,
                          _parse_bound(lb))
        if rep.full_mesh != int(rec["full_mesh"]) or format_percent(rep.fraction) != rec["fraction"]:
            raise ValueError(f"inconsistent row for {rec['instance']}")
        out.append(rep)
    return out


def _parse_bound(text):
    if not text:
        return None
    # four-decimal bounds were rounded on output; keep them as floats
    return float(text) if "." in text else Fraction(text)


def report_dict(r: SolveReport):
    d = asdict(r)
    d["lower_bound"] = None if r.lower_bound is None else str(r.lower_bound)
    return d
