"""CSV exchange formats for matrices and vectors.

All formats are UTF-8 CSV with a header row and 0-based integer indices:

* opinion matrix:   ``i,j,b,d,u``   (omitted pairs default to full uncertainty)
* evidence matrix:  ``i,j,p,n``     (omitted pairs default to (0, 0))
* rating matrix:    ``i,j,rating``
* starting vector:  ``i,s``
* functional trust: ``i,p,n``       (direct evidence about the proposition)

Values are printed with 17 significant digits, which round-trips float64.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import EbslError
from .engine import OpinionMatrix
from .ingest import EvidenceMatrix
from .opinion import Evidence


def _fmt(v: float) -> str:
    return format(v, ".17g")


def _read_rows(path: str | Path, header: tuple[str, ...]) -> list[list[str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        rows = [row for row in reader if row]
    if not rows or tuple(h.strip().lower() for h in rows[0]) != header:
        raise EbslError(f"{path}: expected header {','.join(header)}")
    body = rows[1:]
    for row in body:
        if len(row) != len(header):
            raise EbslError(f"{path}: malformed row {row!r}")
    return body


def write_opinion_matrix(path: str | Path, M: OpinionMatrix) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "j", "b", "d", "u"])
        for i in range(M.n):
            for j in range(M.n):
                w.writerow([i, j, _fmt(M.b[i, j]), _fmt(M.d[i, j]), _fmt(M.u[i, j])])


def read_opinion_matrix(path: str | Path) -> OpinionMatrix:
    body = _read_rows(path, ("i", "j", "b", "d", "u"))
    entries = [(int(r[0]), int(r[1]), float(r[2]), float(r[3]), float(r[4])) for r in body]
    n = max((max(i, j) for i, j, *_ in entries), default=-1) + 1
    b = np.zeros((n, n))
    d = np.zeros((n, n))
    u = np.ones((n, n))
    for i, j, bb, dd, uu in entries:
        b[i, j], d[i, j], u[i, j] = bb, dd, uu
    return OpinionMatrix(b, d, u)


def write_evidence_matrix(path: str | Path, E: EvidenceMatrix) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "j", "p", "n"])
        for i in range(E.size):
            for j in range(E.size):
                if E.p[i, j] or E.n[i, j]:
                    w.writerow([i, j, _fmt(E.p[i, j]), _fmt(E.n[i, j])])


def read_evidence_matrix(path: str | Path, size: int | None = None) -> EvidenceMatrix:
    body = _read_rows(path, ("i", "j", "p", "n"))
    entries = [(int(r[0]), int(r[1]), float(r[2]), float(r[3])) for r in body]
    n = max((max(i, j) for i, j, *_ in entries), default=-1) + 1
    if size is not None:
        n = max(n, size)
    p = np.zeros((n, n))
    neg = np.zeros((n, n))
    for i, j, pp, nn in entries:
        p[i, j], neg[i, j] = pp, nn
    return EvidenceMatrix(p, neg)


def write_rating_matrix(path: str | Path, A: np.ndarray) -> None:
    A = np.asarray(A, dtype=np.float64)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "j", "rating"])
        for i in range(A.shape[0]):
            for j in range(A.shape[1]):
                w.writerow([i, j, _fmt(A[i, j])])


def read_rating_matrix(path: str | Path) -> np.ndarray:
    body = _read_rows(path, ("i", "j", "rating"))
    entries = [(int(r[0]), int(r[1]), float(r[2])) for r in body]
    n = max((max(i, j) for i, j, _ in entries), default=-1) + 1
    A = np.zeros((n, n))
    for i, j, v in entries:
        A[i, j] = v
    return A


def write_start_vector(path: str | Path, s: np.ndarray) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "s"])
        for i, v in enumerate(np.asarray(s, dtype=np.float64)):
            w.writerow([i, _fmt(v)])


def read_start_vector(path: str | Path) -> np.ndarray:
    body = _read_rows(path, ("i", "s"))
    entries = sorted((int(r[0]), float(r[1])) for r in body)
    s = np.zeros(max((i for i, _ in entries), default=-1) + 1)
    for i, v in entries:
        s[i] = v
    return s


def write_trust_input(path: str | Path, trust: Mapping[int, Evidence]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "p", "n"])
        for i in sorted(trust):
            ev = trust[i]
            w.writerow([i, _fmt(ev.p), _fmt(ev.n)])


def read_trust_input(path: str | Path) -> dict[int, Evidence]:
    body = _read_rows(path, ("i", "p", "n"))
    return {int(r[0]): Evidence(float(r[1]), float(r[2])) for r in body}
