"""Worked-example fixtures and JSON validation with positioned diagnostics."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..conjclass import OperatorError, SelfAdjointOperator, SpectralData
from ..dim4 import PerpClosedFamily
from ..grassmann import FiniteUniverse
from ..subspace import Subspace, SubspaceError, coord, span, ortho_within


class FixtureError(KeyError):
    pass


def _sub(n, *rows):
    return span([list(r) for r in rows], n)


def _fixture_c4_adjacent():
    return {"X": coord(4, 1, 2), "Y": _sub(4, (1, 0, 0, 0), (0, 1, 1, 0))}


def _fixture_c5_partner():
    return {"X": coord(5, 1, 2), "Y": _sub(5, (1, 0, 0, 0, 0), (0, 1, 1, 0, 0)), "Z": coord(5, 1, 4)}


def _fixture_two_ext():
    return {"X": coord(4, 1, 2), "Y": coord(4, 3, 4), "Z": coord(4, 1, 3)}


def _fixture_noncompat_codim2():
    return {"X": coord(4, 1, 2), "Y": _sub(4, (1, 0, 1, 0), (0, 0, 0, 1))}


def _fixture_ops():
    sp = SpectralData(("0", "1", "2"), (2, 2, 2))
    A = SelfAdjointOperator(sp, [coord(6, 1, 2), coord(6, 3, 4), coord(6, 5, 6)])
    B = SelfAdjointOperator(sp, [coord(6, 1, 2), coord(6, 3, 5), coord(6, 4, 6)])
    Y2 = _sub(6, (0, 0, 1, 0, 0, 0), (0, 0, 0, 1, 1, 0))
    C = SelfAdjointOperator(sp, [coord(6, 1, 2), Y2, ortho_within(Y2, coord(6, 3, 4, 5, 6))])
    return {"A": A, "B": B, "B_noncommuting": C}


def _fixture_family():
    return {"family": PerpClosedFamily(frozenset({coord(4, 1, 2), coord(4, 3, 4)}))}


FIXTURES = {
    "c4-adjacent-noncompatible": _fixture_c4_adjacent,
    "c5-unique-partner": _fixture_c5_partner,
    "c4-two-extensions": _fixture_two_ext,
    "c4-noncompatible-codim2": _fixture_noncompat_codim2,
    "c6-operators": _fixture_ops,
    "c4-perp-family": _fixture_family,
}


def fixture_objects(name: str) -> dict:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise FixtureError(f"unknown fixture {name!r}; known: {', '.join(sorted(FIXTURES))}") from None


def emit_fixture(name: str, out_dir: str | Path) -> list[Path]:
    """Write one JSON file per object of the fixture and re-validate each."""
    objs = fixture_objects(name)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for key, obj in objs.items():
        path = out / f"{key}.json"
        path.write_text(json.dumps(obj.to_json(), sort_keys=True, indent=2) + "\n")
        diags = validate_file(path)
        if diags:
            raise ValueError(f"fixture {name}/{key} failed validation: {diags[0].message}")
        paths.append(path)
    return paths


@dataclass(frozen=True)
class Diagnostic:
    path: str
    line: int
    column: int
    message: str

    def __str__(self):
        return f"{self.path}:{self.line}:{self.column}: {self.message}"

    def to_json(self) -> dict:
        return {"path": self.path, "line": self.line, "column": self.column, "message": self.message}


def _validate_report(data: dict):
    for key in ("lemma", "trials", "passed", "failed", "seed"):
        if key not in data:
            raise ValueError(f"report lacks {key!r}")
    if data["passed"] + data["failed"] != data["trials"]:
        raise ValueError("passed + failed differs from trials")
    if "aggregate" in data and (data["aggregate"] == "pass") != (data["failed"] == 0):
        raise ValueError("aggregate verdict contradicts the failure count")


def _detect_and_load(data):
    if not isinstance(data, dict):
        raise ValueError("top-level JSON value must be an object")
    if "eigenvalues" in data:
        return SelfAdjointOperator.from_json(data)
    if "vertices" in data:
        return FiniteUniverse.from_json(data)
    if "ambient" in data or "basis" in data:
        return Subspace.from_json(data)
    if "members" in data:
        return PerpClosedFamily(frozenset(Subspace.from_json(m) for m in data["members"]))
    if "lemma" in data:
        return _validate_report(data)
    raise ValueError("unrecognised document: expected a subspace, universe, operator, family or report")


def _locate(text: str, key: str) -> tuple[int, int]:
    """Line and column of the first occurrence of ``"key"``, or (1, 1)."""
    needle = json.dumps(key)
    pos = text.find(needle)
    if pos < 0:
        return 1, 1
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def validate_file(path: str | Path) -> list[Diagnostic]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        return [Diagnostic(str(path), 0, 0, f"cannot read file: {exc.strerror}")]
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        return [Diagnostic(str(path), exc.lineno, exc.colno, f"malformed JSON: {exc.msg}")]
    try:
        _detect_and_load(data)
    except (SubspaceError, OperatorError, ValueError, KeyError, TypeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        anchor = "basis" if "basis" in text else ("eigenspaces" if "eigenspaces" in text else "")
        line, col = _locate(text, anchor) if anchor else (1, 1)
        return [Diagnostic(str(path), line, col, f"invariant violated: {msg}")]
    return []
