"""Readers for sample and graph files.

Sample tuples are JSON objects ``{"m1": .., "m2": .., "n": .., "matrices": [...]}``
with row-major nested arrays. TDAG sample matrices are CSV files with one
row per variable (or JSON arrays of rows). Graphs are edge lists, one
``j i`` pair per line for the edge ``j -> i``, or JSON objects
``{"nodes": [...], "edges": [[j, i], ...]}``.

Every parse error is an :class:`InputError` whose message starts with
``path:line:column``.
"""

from __future__ import annotations

import csv
import json
import re
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from .tdag import Dag

__all__ = ["InputError", "read_sample_tuple", "read_sample_matrix", "read_graph", "parse_label"]

PathLike = Union[str, Path]

_INT_RE = re.compile(r"[+-]?\d+\Z")


class InputError(ValueError):
    """Malformed or inconsistent input file."""

    def __init__(self, path, msg: str, line: Optional[int] = None, col: Optional[int] = None):
        self.path, self.line, self.col = str(path), line, col
        loc = self.path
        if line is not None:
            loc += f":{line}"
            if col is not None:
                loc += f":{col}"
        super().__init__(f"{loc}: {msg}")


def _read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(path, f"cannot read file ({exc.strerror})") from exc
    except UnicodeDecodeError as exc:
        raise InputError(path, "file is not valid UTF-8 text") from exc


def _load_json(path: PathLike, text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(path, exc.msg, exc.lineno, exc.colno) from exc


def _locate(text: str, key: str):
    """Line and column of the first occurrence of a JSON key, for diagnostics."""
    idx = text.find(f'"{key}"')
    if idx < 0:
        return None, None
    line = text.count("\n", 0, idx) + 1
    return line, idx - (text.rfind("\n", 0, idx) + 1) + 1


def read_sample_tuple(path: PathLike) -> np.ndarray:
    """Read a JSON sample tuple; returns an array of shape ``(n, m1, m2)``."""
    text = _read_text(path)
    obj = _load_json(path, text)
    if not isinstance(obj, dict):
        raise InputError(path, "expected a JSON object with keys m1, m2, n, matrices", 1, 1)
    missing = [k for k in ("m1", "m2", "n", "matrices") if k not in obj]
    if missing:
        raise InputError(path, f"missing key(s): {', '.join(missing)}", 1, 1)
    dims = {}
    for k in ("m1", "m2", "n"):
        v = obj[k]
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise InputError(path, f"'{k}' must be a positive integer, got {v!r}", *_locate(text, k))
        dims[k] = v
    mats = obj["matrices"]
    where = _locate(text, "matrices")
    if not isinstance(mats, list) or len(mats) != dims["n"]:
        got = len(mats) if isinstance(mats, list) else type(mats).__name__
        raise InputError(path, f"'matrices' must hold n = {dims['n']} matrices, got {got}", *where)
    out = np.empty((dims["n"], dims["m1"], dims["m2"]))
    for t, mat in enumerate(mats):
        if not isinstance(mat, list) or len(mat) != dims["m1"]:
            raise InputError(path, f"matrices[{t}] must have m1 = {dims['m1']} rows", *where)
        for r, row in enumerate(mat):
            if not isinstance(row, list) or len(row) != dims["m2"]:
                raise InputError(
                    path, f"matrices[{t}][{r}] must have m2 = {dims['m2']} entries", *where
                )
            for c, x in enumerate(row):
                if isinstance(x, bool) or not isinstance(x, (int, float)):
                    raise InputError(path, f"matrices[{t}][{r}][{c}] is not a number: {x!r}", *where)
                out[t, r, c] = x
    if not np.all(np.isfinite(out)):
        raise InputError(path, "matrices contain non-finite entries", *where)
    return out


def _parse_number(tok: str, exact: bool):
    tok = tok.strip()
    if exact:
        return Fraction(tok)
    val = float(tok)
    if not np.isfinite(val):
        raise ValueError("non-finite")
    return val


def read_sample_matrix(path: PathLike, exact: bool = False) -> Union[np.ndarray, List[List[Fraction]]]:
    """Read a TDAG sample matrix, one row per variable.

    CSV by default; files ending in ``.json`` hold a list of rows or an
    object ``{"rows": [...]}``. With ``exact`` the entries are parsed as
    Fractions (decimal or ``p/q`` literals) and a list of lists is returned.
    """
    text = _read_text(path)
    if str(path).endswith(".json"):
        obj = _load_json(path, text)
        if isinstance(obj, dict):
            obj = obj.get("rows")
        if not isinstance(obj, list) or not obj:
            raise InputError(path, "expected a non-empty list of rows", 1, 1)
        rows_tok = []
        for r, row in enumerate(obj):
            if not isinstance(row, list):
                raise InputError(path, f"row {r} is not a list", 1, 1)
            rows_tok.append([(str(x), r + 1, c + 1) for c, x in enumerate(row)])
    else:
        rows_tok = []
        for lineno, rec in enumerate(csv.reader(text.splitlines()), start=1):
            if not rec or all(not t.strip() for t in rec) or rec[0].lstrip().startswith("#"):
                continue
            col, toks = 1, []
            for t in rec:
                toks.append((t, lineno, col))
                col += len(t) + 1
            rows_tok.append(toks)
        if not rows_tok:
            raise InputError(path, "no data rows")
    width = len(rows_tok[0])
    rows = []
    for toks in rows_tok:
        if len(toks) != width:
            _, line, _ = toks[0]
            raise InputError(path, f"row has {len(toks)} entries, expected {width}", line, 1)
        row = []
        for tok, line, col in toks:
            try:
                row.append(_parse_number(tok, exact))
            except (ValueError, ZeroDivisionError):
                raise InputError(path, f"cannot parse number {tok.strip()!r}", line, col) from None
        rows.append(row)
    return rows if exact else np.array(rows, dtype=float)


def parse_label(tok: str):
    """Node labels that look like integers become ints, anything else stays a string."""
    return int(tok) if _INT_RE.match(tok) else tok


def read_graph(path: PathLike) -> Dag:
    """Read a DAG from an edge list or a JSON object.

    In the edge-list format a line with one token declares an isolated node
    and ``#`` starts a comment.
    """
    text = _read_text(path)
    if str(path).endswith(".json") or text.lstrip().startswith("{"):
        obj = _load_json(path, text)
        if not isinstance(obj, dict) or "edges" not in obj:
            raise InputError(path, "expected a JSON object with an 'edges' list", 1, 1)
        nodes, edges = obj.get("nodes", []), obj["edges"]
        if not isinstance(nodes, list) or not isinstance(edges, list):
            raise InputError(path, "'nodes' and 'edges' must be lists", *_locate(text, "edges"))
        for e in edges:
            if not isinstance(e, list) or len(e) != 2:
                raise InputError(path, f"edge {e!r} is not a pair", *_locate(text, "edges"))
        try:
            return Dag(nodes, [tuple(e) for e in edges])
        except (ValueError, TypeError) as exc:
            raise InputError(path, str(exc)) from exc
    nodes, edges = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
        if not toks:
            continue
        if len(toks) > 2:
            raise InputError(path, "expected 'j i' or a single node label", lineno, toks[2][1])
        labels = [parse_label(t) for t, _ in toks]
        if len(labels) == 1:
            nodes.append(labels[0])
        else:
            if labels[0] == labels[1]:
                raise InputError(path, f"self-loop at node {labels[0]!r}", lineno, toks[0][1])
            edges.append(tuple(labels))
    if not nodes and not edges:
        raise InputError(path, "graph file declares no nodes")
    all_labels = nodes + [v for e in edges for v in e]
    if len({type(v) for v in all_labels}) > 1:
        raise InputError(path, "node labels mix integers and names")
    try:
        return Dag(sorted(set(all_labels)), edges)
    except ValueError as exc:
        raise InputError(path, str(exc)) from exc
