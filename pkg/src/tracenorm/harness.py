"""Sweep driver and report I/O.

A sweep is a list of units ``(field spec, n)``.  Each unit builds
GF(q) inside GF(q^(n+1)) and runs the enabled checks over every relevant
tuple, producing one :class:`Row` per tuple.  Units may run in a process
pool; rows are always assembled in ``(field, n, a, b)`` order.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Iterable

from . import bounds
from .characters import (
    characters,
    closed_form_toric,
    closed_form_trace_norm,
    davenport_hasse_check,
)
from .counting import (
    count_toric,
    count_trace_norm,
    lemma21_holds,
    make_record,
    partition_identities,
)
from .errors import NotDivisible, RoundingFailure, TableLimitExceeded
from .fields import (
    FieldDescriptor,
    build_tower,
    is_prime,
    parse_field_spec,
    prime_power,
)

TUPLE_CHECKS = (
    "lemma21",
    "katz",
    "improved",
    "toric",
    "frobenius",
    "special",
    "gauss",
    "interval",
    "divisibility",
)
ZERO_CHECKS = ("zero_trace",)
UNIT_CHECKS = ("davenport_hasse", "partition")
CHECKS = TUPLE_CHECKS + ZERO_CHECKS + UNIT_CHECKS
BOUND_CHECKS = ("katz", "improved", "toric", "frobenius", "special", "zero_trace")

DEFAULT_FIELDS = ("2", "3", "4", "5", "7", "8", "9", "11", "13")
DEFAULT_N = (1, 2, 3, 4)
DEFAULT_BUDGET = 10**8
WORKERS_ENV = "TRACENORM_WORKERS"

COLUMNS = ("kind", "q", "n", "a", "b", "u", "N_tn", "N_toric", "T") + CHECKS

PASS, TIGHT, FAIL = "pass", "tight", "fail"


def parse_checks(text: str | Iterable[str] | None) -> tuple[str, ...]:
    if text is None:
        return CHECKS
    names = [t.strip().replace("-", "_") for t in (text.split(",") if isinstance(text, str) else text)]
    names = [t for t in names if t]
    unknown = [t for t in names if t not in CHECKS]
    if unknown:
        raise ValueError(f"unknown check(s): {', '.join(unknown)}; known: {', '.join(CHECKS)}")
    return tuple(c for c in CHECKS if c in names)


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def prime_powers_upto(max_q: int) -> list[str]:
    out = []
    for q in range(2, max_q + 1):
        try:
            prime_power(q)
        except ValueError:
            continue
        out.append(str(q))
    return out


@dataclass
class SweepConfig:
    fields: list[str] = field(default_factory=lambda: list(DEFAULT_FIELDS))
    n_values: list[int] = field(default_factory=lambda: list(DEFAULT_N))
    checks: tuple[str, ...] = CHECKS
    budget: int = DEFAULT_BUDGET
    workers: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        if not self.n_values:
            raise ValueError("n range is empty")
        if any(n < 1 for n in self.n_values):
            raise ValueError("n must be >= 1")
        self.checks = parse_checks(self.checks)
        for spec in self.fields:
            parse_field_spec(spec)

    def echo(self) -> dict:
        return {
            "fields": list(self.fields),
            "n": list(self.n_values),
            "checks": list(self.checks),
            "budget": self.budget,
            "seed": self.seed,
        }


@dataclass
class Row:
    kind: str  # "tuple", "zero", "unit" or "error"
    q: int
    n: int
    a: int | None = None
    b: int | None = None
    u: int | None = None
    N_tn: int | None = None
    N_toric: int | None = None
    T: int | None = None
    verdicts: dict = field(default_factory=dict)
    message: str = ""

    def cells(self) -> list[str]:
        head = [self.kind] + ["" if v is None else str(v) for v in (self.q, self.n, self.a, self.b, self.u, self.N_tn, self.N_toric, self.T)]
        if self.kind == "error":
            return head + [self.message] + [""] * (len(CHECKS) - 1)
        return head + [self.verdicts.get(c, "") for c in CHECKS]


@dataclass
class Tallies:
    checked: int = 0
    passed: int = 0
    failed: int = 0
    tight: int = 0
    errors: int = 0

    @classmethod
    def of(cls, rows: Iterable[Row]) -> "Tallies":
        t = cls()
        for row in rows:
            if row.kind == "error":
                t.errors += 1
                continue
            for v in row.verdicts.values():
                if not v:
                    continue
                t.checked += 1
                if v == FAIL:
                    t.failed += 1
                else:
                    t.passed += 1
                    if v == TIGHT:
                        t.tight += 1
        return t

    def line(self) -> str:
        return " ".join(f"{k}={v}" for k, v in asdict(self).items())


@dataclass
class UnitResult:
    spec: str
    n: int
    rows: list[Row]
    fields: list[str]
    max_ratio: dict
    seconds: float = 0.0


@dataclass
class SweepReport:
    config: dict
    rows: list[Row]
    fields: list[str]
    max_ratio: dict
    timings: dict = field(default_factory=dict)

    @property
    def tallies(self) -> Tallies:
        return Tallies.of(self.rows)

    @property
    def failures(self) -> list[Row]:
        return [r for r in self.rows if FAIL in r.verdicts.values()]

    @property
    def errors(self) -> list[Row]:
        return [r for r in self.rows if r.kind == "error"]

    def exit_code(self) -> int:
        if self.errors:
            return 3
        return 1 if self.tallies.failed else 0


# ---------------------------------------------------------------------------
# running a unit


def _mark(v: bounds.BoundVerdict) -> str:
    if not v.holds:
        return FAIL
    return TIGHT if v.tight else PASS


def _ok(flag: bool) -> str:
    return PASS if flag else FAIL


def field_line(fd: FieldDescriptor) -> str:
    return f"q={fd.q} p={fd.p} k={fd.k} seed={fd.seed} modulus={fd.modulus_str()} generator={fd.generator}"


def run_unit(
    spec: str,
    n: int,
    checks: Iterable[str] = CHECKS,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    pairs: list[tuple[int, int]] | None = None,
) -> UnitResult:
    """Run the enabled checks for one ``(field, n)`` unit.

    ``pairs`` restricts the tuple checks to the given ``(a, b)``; otherwise
    every pair in (GF(q)*)^2 is used.
    """
    started = time.perf_counter()
    checks = set(parse_checks(list(checks)))
    p, k = parse_field_spec(spec)
    q = p**k
    ratios: dict = {}
    need = max(q ** (n + 1), (q - 1) ** n)
    if not checks:
        return UnitResult(spec, n, [], [], ratios, time.perf_counter() - started)
    if need > budget:
        row = Row("error", q, n, message=f"BudgetExceeded: needs {need} > budget {budget}")
        return UnitResult(spec, n, [row], [], ratios, time.perf_counter() - started)
    try:
        tower = build_tower(p, k, n + 1, seed)
    except TableLimitExceeded as exc:
        row = Row("error", q, n, message=f"BudgetExceeded: {exc}")
        return UnitResult(spec, n, [row], [], ratios, time.perf_counter() - started)
    fd = tower.sub
    rows: list[Row] = []

    def note_ratio(v: bounds.BoundVerdict) -> None:
        ratios[v.bound_name] = max(ratios.get(v.bound_name, 0.0), v.ratio)

    tuple_checks = checks & set(TUPLE_CHECKS)
    if tuple_checks:
        ell = n + 1
        prime_ell = ell >= 3 and is_prime(ell)
        special = None
        if "special" in tuple_checks and (n + 1) % p:
            special = bounds.special_u(fd, n)
        toric_cache: dict[int, int] = {}
        closed_cache: dict[int, int | None] = {}
        todo = pairs if pairs is not None else [(a, b) for a in fd.nonzero() for b in fd.nonzero()]
        for a, b in todo:
            if a == 0 or b == 0:
                raise ValueError("tuple checks need a and b nonzero")
            u = fd.div(b, fd.pow(a, n + 1))
            if u not in toric_cache:
                toric_cache[u] = count_toric(fd, u, n, budget=budget)
            rec = make_record(tower, a, b, n_toric=toric_cache[u], budget=budget)
            v: dict[str, str] = {}
            if "lemma21" in tuple_checks:
                v["lemma21"] = _ok(lemma21_holds(rec))
            for name, fn in (
                ("katz", bounds.katz_bound),
                ("improved", bounds.improved_bound),
                ("toric", bounds.toric_bound),
                ("frobenius", bounds.frobenius_trace_bound),
            ):
                if name in tuple_checks:
                    bv = fn(rec)
                    note_ratio(bv)
                    v[name] = _mark(bv)
            if special is not None and u == special:
                marks = []
                for refined in (False, True):
                    if refined and n % 2:
                        continue
                    bv = bounds.special_u_bound(rec, fd, refined)
                    note_ratio(bv)
                    marks.append(_mark(bv))
                v["special"] = FAIL if FAIL in marks else (TIGHT if TIGHT in marks else PASS)
            if "gauss" in tuple_checks:
                if u not in closed_cache:
                    try:
                        closed_cache[u] = closed_form_toric(fd, u, n)
                    except (RoundingFailure, NotDivisible):
                        closed_cache[u] = None
                try:
                    tn = closed_form_trace_norm(fd, a, b, n)
                except (RoundingFailure, NotDivisible):
                    tn = None
                v["gauss"] = _ok(closed_cache[u] == rec.N_toric and tn == rec.N_trace_norm)
            if prime_ell and "interval" in tuple_checks:
                v["interval"] = _ok(bounds.interval_check(rec))
            if prime_ell and "divisibility" in tuple_checks:
                v["divisibility"] = _ok(bounds.divisibility_check(fd, ell, a, b, rec.N_trace_norm))
            rows.append(Row("tuple", q, n, a, b, u, rec.N_trace_norm, rec.N_toric, rec.frobenius_trace, v))

    if "zero_trace" in checks and pairs is None:
        for b in fd.nonzero():
            count = count_trace_norm(tower, 0, b, budget)
            bv = bounds.zero_trace_bound(fd, b, n, count)
            note_ratio(bv)
            rows.append(Row("zero", q, n, 0, b, None, count, verdicts={"zero_trace": _mark(bv)}))

    unit_v: dict[str, str] = {}
    if "davenport_hasse" in checks:
        try:
            ok = all(davenport_hasse_check(chi, n + 1, tower) for chi in characters(fd))
        except RoundingFailure:
            ok = False
        unit_v["davenport_hasse"] = _ok(ok)
    if "partition" in checks:
        unit_v["partition"] = _ok(partition_identities(tower, budget))
    if unit_v:
        rows.append(Row("unit", q, n, verdicts=unit_v))

    infos = [field_line(tower.sub), field_line(tower.big)]
    return UnitResult(spec, n, rows, infos, ratios, time.perf_counter() - started)


def _run_unit_args(args):
    return run_unit(*args)


def run_sweep(config: SweepConfig) -> SweepReport:
    units = [(spec, n) for spec in config.fields for n in config.n_values]
    args = [(spec, n, config.checks, config.budget, config.seed) for spec, n in units]
    if config.workers > 1 and len(units) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_unit_args, args))
    else:
        results = [_run_unit_args(a) for a in args]
    rows: list[Row] = []
    infos: list[str] = []
    ratios: dict = {}
    timings: dict = {}
    for res in results:
        rows.extend(res.rows)
        for line in res.fields:
            if line not in infos:
                infos.append(line)
        for name, r in res.max_ratio.items():
            ratios[name] = max(ratios.get(name, 0.0), r)
        timings[f"{res.spec}/n={res.n}"] = res.seconds
    return SweepReport(config.echo(), rows, infos, ratios, timings)


# ---------------------------------------------------------------------------
# serialisation


def _timestamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _ratio_text(ratios: dict) -> str:
    return " ".join(f"{k}={ratios[k]:.6f}" for k in sorted(ratios))


def format_csv(report: SweepReport, timings: bool = False) -> str:
    buf = io.StringIO()
    buf.write(f"# tracenorm report generated {_timestamp()}\n")
    buf.write(f"# config {json.dumps(report.config, sort_keys=True)}\n")
    for line in report.fields:
        buf.write(f"# field {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in report.rows:
        writer.writerow(row.cells())
    buf.write(f"# tallies {report.tallies.line()}\n")
    buf.write(f"# max_ratio {_ratio_text(report.max_ratio)}\n")
    if timings:
        for unit, secs in report.timings.items():
            buf.write(f"# time {unit} {secs:.3f}\n")
    return buf.getvalue()


def format_structured(report: SweepReport, timings: bool = False) -> str:
    doc = {
        "generated": _timestamp(),
        "config": report.config,
        "fields": report.fields,
        "columns": list(COLUMNS),
        "rows": [row.cells() for row in report.rows],
        "tallies": asdict(report.tallies),
        "max_ratio": {k: report.max_ratio[k] for k in sorted(report.max_ratio)},
    }
    if timings:
        doc["timings"] = report.timings
    return json.dumps(doc, indent=1) + "\n"


def write_report(report: SweepReport, path: str | None, fmt: str = "csv", timings: bool = False) -> str:
    text = format_structured(report, timings) if fmt == "structured" else format_csv(report, timings)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def _row_from_cells(cells: list[str]) -> Row:
    def num(s):
        return int(s) if s != "" else None

    kind = cells[0]
    q, n, a, b, u, ntn, ntor, t = (num(c) for c in cells[1:9])
    if kind == "error":
        return Row(kind, q, n, message=cells[9])
    verdicts = {c: v for c, v in zip(CHECKS, cells[9:]) if v}
    return Row(kind, q, n, a, b, u, ntn, ntor, t, verdicts)


def parse_report(text: str) -> tuple[SweepReport, dict]:
    """Parse either output format; returns the report and the written tallies."""
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        rows = [_row_from_cells([str(c) for c in cells]) for cells in doc["rows"]]
        report = SweepReport(doc["config"], rows, doc["fields"], doc["max_ratio"])
        return report, doc["tallies"]
    config: dict = {}
    infos: list[str] = []
    written: dict = {}
    ratios: dict = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# config "):
            config = json.loads(line[len("# config ") :])
        elif line.startswith("# field "):
            infos.append(line[len("# field ") :])
        elif line.startswith("# tallies "):
            written = {k: int(v) for k, v in (kv.split("=") for kv in line.split()[2:])}
        elif line.startswith("# max_ratio"):
            ratios = {k: float(v) for k, v in (kv.split("=") for kv in line.split()[2:])}
        elif not line.startswith("#"):
            body.append(line)
    reader = csv.reader(body)
    header = next(reader)
    if tuple(header) != COLUMNS:
        raise ValueError("unexpected report columns")
    rows = [_row_from_cells(cells) for cells in reader]
    return SweepReport(config, rows, infos, ratios), written


def read_report(path: str) -> tuple[SweepReport, dict]:
    with open(path) as fh:
        return parse_report(fh.read())
