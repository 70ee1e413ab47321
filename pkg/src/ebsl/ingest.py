"""Interaction-log ingestion.

Parses CSV logs of signed byte transfers, accumulates them into an evidence
matrix, optionally clusters nodes, and converts evidence to a direct
referral trust matrix.

Sign convention (swappable via ``reverse_direction``): a record
(source, target, amount) with amount > 0 means source downloaded from
target, crediting positive evidence to entry (source, target); a negative
amount means source uploaded to target, adding |amount| as negative
evidence to the same entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import EbslError, InvalidEvidenceError, ParseError
from .engine import OpinionMatrix
from .opinion import AlgebraParams, DEFAULT_PARAMS, Evidence

LOG_HEADER = ("source", "target", "amount")


@dataclass(frozen=True)
class InteractionRecord:
    source: str
    target: str
    amount: int

    def __post_init__(self):
        if self.source == self.target:
            raise ParseError(f"self-interaction {self.source!r} rejected")
        if self.amount == 0:
            raise ParseError(f"zero-amount interaction {self.source!r}->{self.target!r}")


@dataclass(frozen=True)
class ParseResult:
    records: tuple[InteractionRecord, ...]
    skipped: int


class EvidenceMatrix:
    """Dense n x n grid of (p, n) evidence with zero diagonal."""

    __slots__ = ("p", "n", "labels")

    def __init__(self, p: np.ndarray, n: np.ndarray, labels: Sequence[str] | None = None):
        p = np.asarray(p, dtype=np.float64)
        n = np.asarray(n, dtype=np.float64)
        if p.ndim != 2 or p.shape[0] != p.shape[1] or n.shape != p.shape:
            raise InvalidEvidenceError(f"evidence matrix needs square arrays, got {p.shape}")
        if not (np.isfinite(p).all() and np.isfinite(n).all()):
            raise InvalidEvidenceError("non-finite evidence entries")
        if (p < 0).any() or (n < 0).any():
            raise InvalidEvidenceError("negative evidence entries")
        if np.diagonal(p).any() or np.diagonal(n).any():
            raise InvalidEvidenceError("evidence matrix diagonal must be zero")
        if labels is not None and len(labels) != p.shape[0]:
            raise InvalidEvidenceError("label count does not match matrix size")
        for a in (p, n):
            a.flags.writeable = False
        self.p, self.n = p, n
        self.labels = tuple(labels) if labels is not None else None

    @property
    def size(self) -> int:
        return self.p.shape[0]

    def entry(self, i: int, j: int) -> Evidence:
        return Evidence(float(self.p[i, j]), float(self.n[i, j]))

    def total_mass(self) -> float:
        return float(self.p.sum() + self.n.sum())


def _parse_line(line: str, lineno: int) -> InteractionRecord:
    parts = [f.strip() for f in line.split(",")]
    if len(parts) != 3:
        raise ParseError(f"line {lineno}: expected 3 fields, got {len(parts)}")
    src, dst, raw = parts
    if not src or not dst:
        raise ParseError(f"line {lineno}: empty node id")
    try:
        amount = int(raw)
    except ValueError:
        raise ParseError(f"line {lineno}: amount {raw!r} is not an integer") from None
    try:
        return InteractionRecord(src, dst, amount)
    except ParseError as exc:
        raise ParseError(f"line {lineno}: {exc}") from None


def parse_log(stream: IO[str] | Iterable[str], strict: bool = True) -> ParseResult:
    """Parse a CSV interaction log (optional ``source,target,amount`` header).

    In strict mode any malformed line raises with its line number; in
    lenient mode malformed lines are skipped and counted.
    """
    records: list[InteractionRecord] = []
    skipped = 0
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        if lineno == 1 and tuple(f.strip().lower() for f in line.split(",")) == LOG_HEADER:
            continue
        try:
            records.append(_parse_line(line, lineno))
        except ParseError:
            if strict:
                raise
            skipped += 1
    return ParseResult(tuple(records), skipped)


def build_evidence_matrix(
    records: Iterable[InteractionRecord],
    scale: float = 1.0,
    reverse_direction: bool = False,
) -> EvidenceMatrix:
    """Accumulate records into per-pair evidence, divided by ``scale``.

    Node indices follow the lexicographically sorted distinct node ids, so
    identical logs always produce identical matrices.
    """
    if not scale > 0:
        raise InvalidEvidenceError(f"scale must be > 0, got {scale}")
    records = list(records)
    labels = sorted({r.source for r in records} | {r.target for r in records})
    index = {name: i for i, name in enumerate(labels)}
    n = len(labels)
    p = np.zeros((n, n))
    neg = np.zeros((n, n))
    for r in records:
        i, j = index[r.source], index[r.target]
        if reverse_direction:
            i, j = j, i
        if r.amount > 0:
            p[i, j] += r.amount / scale
        else:
            neg[i, j] += -r.amount / scale
    return EvidenceMatrix(p, neg, labels)


def cluster_nodes(records: Iterable[InteractionRecord], k: int) -> dict[str, int]:
    """Deterministic partition of the observed nodes into k clusters.

    Sorted node ids are split into k contiguous buckets whose sizes differ
    by at most one.
    """
    labels = sorted({r.source for r in records} | {r.target for r in records})
    if not 1 <= k <= len(labels):
        raise EbslError(f"cluster count {k} out of range [1, {len(labels)}]")
    q, rem = divmod(len(labels), k)
    assignment: dict[str, int] = {}
    pos = 0
    for cluster in range(k):
        size = q + (1 if cluster < rem else 0)
        for name in labels[pos:pos + size]:
            assignment[name] = cluster
        pos += size
    return assignment


def cluster_evidence_matrix(E: EvidenceMatrix, assignment: dict[str, int]) -> EvidenceMatrix:
    """Sum member-pair evidence per cluster pair; intra-cluster mass is dropped."""
    if E.labels is None:
        raise EbslError("clustering requires a labeled evidence matrix")
    k = max(assignment.values()) + 1
    ca = np.array([assignment[name] for name in E.labels])
    p = np.zeros((k, k))
    n = np.zeros((k, k))
    np.add.at(p, (ca[:, None], ca[None, :]), E.p)
    np.add.at(n, (ca[:, None], ca[None, :]), E.n)
    idx = np.arange(k)
    p[idx, idx] = 0.0
    n[idx, idx] = 0.0
    return EvidenceMatrix(p, n, [str(c) for c in range(k)])


def evidence_to_opinion_matrix(
    E: EvidenceMatrix, params: AlgebraParams = DEFAULT_PARAMS
) -> OpinionMatrix:
    """Entrywise evidence-to-opinion mapping; diagonal forced to U."""
    s = E.p + E.n + params.c
    b = E.p / s
    d = E.n / s
    idx = np.arange(E.size)
    b[idx, idx] = 0.0
    d[idx, idx] = 0.0
    return OpinionMatrix(b, d, 1.0 - b - d)
