"""File formats: joint record tables, pair logs, hypergraphs, marginal
problems.

Joint format: CSV, a header line of observable names, then one line of
0/1 values per record.  Pair-log format: CSV with fixed header
``obs_a,val_a,obs_b,val_b``.  Hypergraph format: ``atom NAME`` lines,
then ``context A B ...`` lines; ``#`` starts a comment.  Marginal
problems: JSON (see :func:`read_marginals`).

Parsers report 1-based line and field positions on failure and ignore
blank lines; whitespace around fields is trimmed.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .datasets import JointRecordDataset, PairLogDataset
from .errors import HeaderMismatch, NonBinaryValue, ParseError
from .feasibility import JointFeasibilityProblem
from .hypergraph import ContextHypergraph
from .observables import ObservableSet

PAIRLOG_HEADER = ("obs_a", "val_a", "obs_b", "val_b")


def _data_lines(text: str, allow_comments: bool = False):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if allow_comments and "#" in line:
            line = line.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _parse_bit(field: str, lineno: int, column: int) -> int:
    value = field.strip()
    if value == "0":
        return 0
    if value == "1":
        return 1
    raise NonBinaryValue(f"expected 0 or 1, got {value!r}", line=lineno, column=column)


def read_joint(path) -> JointRecordDataset:
    """Parse a joint record file.

    Raises:
        ParseError / NonBinaryValue / HeaderMismatch with line and field
        position.
    """
    text = Path(path).read_text()
    lines = _data_lines(text)
    try:
        header_line, header = next(lines)
    except StopIteration:
        raise ParseError("empty file: missing header") from None
    names = [f.strip() for f in header.split(",")]
    if any(not n for n in names):
        raise HeaderMismatch("empty observable name in header", line=header_line)
    try:
        observables = ObservableSet.from_ids(names, source=str(path))
    except ValueError as exc:
        raise HeaderMismatch(str(exc), line=header_line) from None
    records = []
    for lineno, line in lines:
        fields = line.split(",")
        if len(fields) != len(names):
            raise ParseError(
                f"expected {len(names)} fields, got {len(fields)}", line=lineno
            )
        records.append(
            [_parse_bit(f, lineno, col) for col, f in enumerate(fields, start=1)]
        )
    array = np.array(records, dtype=np.uint8) if records else np.zeros((0, len(names)), np.uint8)
    return JointRecordDataset(observables, array)


def write_joint(dataset: JointRecordDataset, path) -> None:
    lines = [",".join(dataset.observables.ids())]
    for record in dataset.records:
        lines.append(",".join(str(int(v)) for v in record))
    Path(path).write_text("\n".join(lines) + "\n")


def read_pairlog(path) -> PairLogDataset:
    """Parse a pair-log file; observables are collected in order of first
    appearance."""
    text = Path(path).read_text()
    lines = _data_lines(text)
    try:
        header_line, header = next(lines)
    except StopIteration:
        raise ParseError("empty file: missing header") from None
    fields = tuple(f.strip() for f in header.split(","))
    if fields != PAIRLOG_HEADER:
        raise HeaderMismatch(
            f"pair-log header must be {','.join(PAIRLOG_HEADER)!r}, got {header!r}",
            line=header_line,
        )
    names: list[str] = []
    seen: set[str] = set()
    entries = []
    for lineno, line in lines:
        parts = line.split(",")
        if len(parts) != 4:
            raise ParseError(f"expected 4 fields, got {len(parts)}", line=lineno)
        obs_a = parts[0].strip()
        obs_b = parts[2].strip()
        if not obs_a or not obs_b:
            raise ParseError("empty observable name", line=lineno)
        val_a = _parse_bit(parts[1], lineno, 2)
        val_b = _parse_bit(parts[3], lineno, 4)
        for name in (obs_a, obs_b):
            if name not in seen:
                seen.add(name)
                names.append(name)
        entries.append((obs_a, val_a, obs_b, val_b))
    if not names:
        raise ParseError("pair-log holds no entries")
    observables = ObservableSet.from_ids(names, source=str(path))
    return PairLogDataset.from_entries(observables, entries)


def write_pairlog(dataset: PairLogDataset, path) -> None:
    lines = [",".join(PAIRLOG_HEADER)]
    for obs_a, val_a, obs_b, val_b in dataset.entries():
        lines.append(f"{obs_a},{val_a},{obs_b},{val_b}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_hypergraph(path) -> ContextHypergraph:
    """Parse the hypergraph format: atom lines, then context lines."""
    atoms: list[str] = []
    contexts: list[tuple[str, ...]] = []
    for lineno, line in _data_lines(Path(path).read_text(), allow_comments=True):
        parts = line.split()
        keyword, rest = parts[0], parts[1:]
        if keyword == "atom":
            if len(rest) != 1:
                raise ParseError("atom lines take exactly one id", line=lineno)
            atoms.append(rest[0])
        elif keyword == "context":
            if not rest:
                raise ParseError("context lines need at least one atom id", line=lineno)
            contexts.append(tuple(rest))
        else:
            raise ParseError(
                f"expected 'atom' or 'context', got {keyword!r}", line=lineno, column=1
            )
    try:
        return ContextHypergraph(atoms=tuple(atoms), contexts=tuple(contexts))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def write_hypergraph(hypergraph: ContextHypergraph, path) -> None:
    lines = [f"atom {a}" for a in hypergraph.atoms]
    lines += ["context " + " ".join(c) for c in hypergraph.contexts]
    Path(path).write_text("\n".join(lines) + "\n")


def read_marginals(path) -> JointFeasibilityProblem:
    """Parse a marginal problem from JSON.

    Schema::

        {
          "observables": ["A", "B", "C"],
          "num_outcomes": 2,
          "pairs": [{"pair": ["A", "B"], "table": [[0.5, 0.0], [0.0, 0.5]]}],
          "tolerance": 1e-8            // optional
        }
    """
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", line=exc.lineno, column=exc.colno) from None
    try:
        names = list(doc["observables"])
        n = int(doc["num_outcomes"])
        pair_entries = doc["pairs"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing or malformed field: {exc}") from None
    index = {name: i for i, name in enumerate(names)}
    if len(index) != len(names):
        raise ParseError("observable names must be distinct")
    marginals = {}
    for entry in pair_entries:
        try:
            a, b = entry["pair"]
            table = np.asarray(entry["table"], dtype=np.float64)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed pair entry: {exc}") from None
        if a not in index or b not in index:
            raise ParseError(f"pair ({a!r}, {b!r}) references unknown observables")
        ia, ib = index[a], index[b]
        if ia == ib:
            raise ParseError(f"pair ({a!r}, {b!r}) must name two distinct observables")
        key = (ia, ib) if ia < ib else (ib, ia)
        marginals[key] = table if ia < ib else table.T
    tolerance = float(doc.get("tolerance", 1e-8))
    try:
        return JointFeasibilityProblem(
            num_observables=len(names),
            num_outcomes=n,
            pair_marginals=marginals,
            tolerance=tolerance,
            observable_ids=tuple(names),
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from None
