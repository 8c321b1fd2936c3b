"""
Expectation manifests: command lines paired with expected outputs.

A manifest is an INI-style text file.  Each ``[entry NAME]`` section is one
check::

    [entry table1]
    command    = verify --which table1
    expected   = expected/table1.csv
    columns    = quadrature, closed_form
    tolerance  = 1e-3
    provenance = published
    anchor     = normalisation-integral table

Keys
    command     arguments of ``lwqm`` (CSV output is forced)
    exit        expected exit status (default 0)
    expected    CSV file, relative to the manifest; its columns are compared
                with the same-named columns of the command output, row by row
    columns     subset of expected columns to compare (default: all)
    rows        expected number of output rows (optional)
    tolerance   relative tolerance for numeric cells (default 1e-9)
    abs_floor   absolute tolerance added to the relative one (default 0)
    provenance  ``published``, ``derived`` or ``trivial``
    anchor      where a published value is printed (required for ``published``)
    oracle      script that generated the expected file (required for ``derived``)
"""

from __future__ import annotations

import configparser
import io
import math
import shlex
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

from .export import read_csv

PROVENANCE_TAGS = ("published", "derived", "trivial")


class ManifestError(ValueError):
    """The manifest text is malformed or violates a provenance rule."""


@dataclass(frozen=True)
class ManifestEntry:
    name: str
    command: Tuple[str, ...]
    provenance: str
    exit: int = 0
    expected: Optional[Path] = None
    columns: Optional[Tuple[str, ...]] = None
    rows: Optional[int] = None
    tolerance: float = 1e-9
    abs_floor: float = 0.0
    anchor: str = ""
    oracle: str = ""

    def __post_init__(self):
        if self.provenance not in PROVENANCE_TAGS:
            raise ManifestError(f"{self.name}: unknown provenance {self.provenance!r}")
        if self.provenance == "published" and not self.anchor:
            raise ManifestError(f"{self.name}: a published entry needs an anchor")
        if self.provenance == "derived" and not self.oracle:
            raise ManifestError(f"{self.name}: a derived entry needs an oracle script")
        if not self.command:
            raise ManifestError(f"{self.name}: empty command")


@dataclass(frozen=True)
class ExpectationManifest:
    entries: Tuple[ManifestEntry, ...]
    base_dir: Path = Path(".")


def parse_manifest(text: str, base_dir: Path = Path(".")) -> ExpectationManifest:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ManifestError(str(exc)) from exc
    entries = []
    for section in cp.sections():
        if not section.startswith("entry "):
            raise ManifestError(f"unexpected section [{section}]")
        s = cp[section]
        name = section[len("entry "):].strip()
        known = {"command", "exit", "expected", "columns", "rows", "tolerance", "abs_floor",
                 "provenance", "anchor", "oracle"}
        extra = set(s.keys()) - known
        if extra:
            raise ManifestError(f"{name}: unknown keys {sorted(extra)}")
        cols = s.get("columns")
        entries.append(ManifestEntry(
            name=name,
            command=tuple(shlex.split(s.get("command", ""))),
            provenance=s.get("provenance", ""),
            exit=s.getint("exit", 0),
            expected=(base_dir / s["expected"]) if "expected" in s else None,
            columns=tuple(c.strip() for c in cols.split(",")) if cols else None,
            rows=s.getint("rows") if "rows" in s else None,
            tolerance=s.getfloat("tolerance", 1e-9),
            abs_floor=s.getfloat("abs_floor", 0.0),
            anchor=s.get("anchor", ""),
            oracle=s.get("oracle", ""),
        ))
    return ExpectationManifest(tuple(entries), base_dir)


def load_manifest(path: Path) -> ExpectationManifest:
    path = Path(path)
    return parse_manifest(path.read_text(), path.parent)


@dataclass(frozen=True)
class EntryResult:
    name: str
    passed: bool
    message: str


@dataclass(frozen=True)
class ManifestReport:
    results: Tuple[EntryResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def render(self) -> str:
        lines = [f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.message}" for r in self.results]
        n_ok = sum(r.passed for r in self.results)
        lines.append(f"{n_ok}/{len(self.results)} entries passed")
        return "\n".join(lines) + "\n"


def _same(a: str, b: str, rtol: float, atol: float) -> bool:
    try:
        x, y = float(a), float(b)
    except ValueError:
        return a == b
    if math.isnan(x) or math.isnan(y):
        return math.isnan(x) and math.isnan(y)
    return abs(x - y) <= atol + rtol * abs(y)


def _compare(entry: ManifestEntry, out_text: str) -> Tuple[bool, str]:
    head, rows = read_csv(out_text)
    if entry.rows is not None and len(rows) != entry.rows:
        return False, f"expected {entry.rows} rows, got {len(rows)}"
    if entry.expected is None:
        return True, f"{len(rows)} rows"
    ehead, erows = read_csv(entry.expected.read_text())
    cols = entry.columns or tuple(ehead)
    if len(erows) != len(rows):
        return False, f"expected {len(erows)} rows, got {len(rows)}"
    for c in cols:
        if c not in head or c not in ehead:
            return False, f"column {c!r} missing"
    for i, (got, exp) in enumerate(zip(rows, erows)):
        for c in cols:
            g, e = got[head.index(c)], exp[ehead.index(c)]
            if not _same(g, e, entry.tolerance, entry.abs_floor):
                return False, f"row {i} column {c!r}: got {g}, expected {e}"
    tol = f"rel {entry.tolerance:g}" + (f" + abs {entry.abs_floor:g}" if entry.abs_floor else "")
    return True, f"{len(rows)} rows x {len(cols)} columns within {tol}"


def run_entry(entry: ManifestEntry, base_dir: Path = Path(".")) -> EntryResult:
    from .cli import main

    if entry.provenance == "derived" and not (base_dir / entry.oracle).is_file():
        return EntryResult(entry.name, False, f"oracle script {entry.oracle!r} not found")
    argv = list(entry.command)
    if "--format" in argv:
        i = argv.index("--format")
        del argv[i:i + 2]
    argv += ["--format", "csv"]
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdout=out, stderr=err)
    if code != entry.exit:
        detail = err.getvalue().strip().splitlines()
        return EntryResult(entry.name, False, f"exit {code}, expected {entry.exit}"
                           + (f" ({detail[-1]})" if detail else ""))
    if code not in (0, 1):
        return EntryResult(entry.name, True, f"exit {code} as expected")
    try:
        ok, msg = _compare(entry, out.getvalue())
    except OSError as exc:
        ok, msg = False, f"cannot read expected file: {exc}"
    return EntryResult(entry.name, ok, msg)


def run_manifest(manifest: ExpectationManifest) -> ManifestReport:
    """Run every entry in file order and collect the results."""
    results: List[EntryResult] = [run_entry(e, manifest.base_dir) for e in manifest.entries]
    return ManifestReport(tuple(results))
