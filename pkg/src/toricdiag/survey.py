"""Per-dimension surveys with a resumable, append-only result cache.

Cache format: one JSON object per line, fields in the order of
:data:`RECORD_FIELDS`.  A record is keyed by ``(dim, index,
engine_version)``; records from another engine version are ignored, so a
version bump forces recomputation.
"""

from __future__ import annotations

import json
import signal
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .database import load_database
from .exceptional import certify
from .fan import bondal_criterion, unimodular

ENGINE_VERSION = f"toricdiag-{__version__}"

RECORD_FIELDS = (
    "dim", "index", "status", "unimodular", "bondal_criterion", "hhl_success", "strong",
    "ordering_exists", "collection_size", "resolution_ranks", "runtime_ms", "engine_version",
)


@dataclass(frozen=True)
class SurveyRecord:
    dim: int
    index: int
    status: str  # "ok" or "timeout"
    unimodular: bool
    bondal_criterion: bool
    hhl_success: bool | None
    strong: bool | None
    ordering_exists: bool | None
    collection_size: int | None
    resolution_ranks: tuple[int, ...] | None
    runtime_ms: int
    engine_version: str = ENGINE_VERSION

    def __post_init__(self):
        if self.status == "ok":
            assert self.hhl_success == (self.ordering_exists and self.strong)

    @property
    def key(self):
        return self.dim, self.index, self.engine_version

    def to_json(self) -> str:
        d = asdict(self)
        if d["resolution_ranks"] is not None:
            d["resolution_ranks"] = list(d["resolution_ranks"])
        return json.dumps({k: d[k] for k in RECORD_FIELDS})

    @classmethod
    def from_json(cls, line: str) -> "SurveyRecord":
        d = json.loads(line)
        if d.get("resolution_ranks") is not None:
            d["resolution_ranks"] = tuple(d["resolution_ranks"])
        return cls(**{k: d[k] for k in RECORD_FIELDS})


class ResultCache:
    """Append-only record log; the orchestrating process is the only writer."""

    def __init__(self, path: str | Path | None):
        self.path = Path(path) if path else None
        self.records: dict[tuple, SurveyRecord] = {}
        if self.path and self.path.exists():
            text = self.path.read_text()
            if text and not text.endswith("\n"):
                # cut a torn final line so the next append starts cleanly
                text = text[: text.rfind("\n") + 1]
                self.path.write_text(text)
            for line in text.splitlines():
                if not line.strip():
                    continue
                try:
                    rec = SurveyRecord.from_json(line)
                except (ValueError, KeyError, TypeError):
                    continue  # a torn final line from an interrupted run
                self.records[rec.key] = rec

    def get(self, dim: int, index: int) -> SurveyRecord | None:
        return self.records.get((dim, index, ENGINE_VERSION))

    def add(self, rec: SurveyRecord):
        self.records[rec.key] = rec
        if self.path:
            with self.path.open("a") as fh:
                fh.write(rec.to_json() + "\n")


class _Timeout(Exception):
    pass


def _alarm(signum, frame):
    raise _Timeout


def survey_one(dim: int, index: int, timeout: float | None = None, directory=None) -> SurveyRecord:
    rec = load_database(dim, directory)[index]
    assert rec.index == index
    fan = rec.fan
    t0 = time.perf_counter()
    uni = unimodular(fan)
    bondal = bool(bondal_criterion(fan))
    old = None
    if timeout:
        old = signal.signal(signal.SIGALRM, _alarm)
        signal.setitimer(signal.ITIMER_REAL, timeout)
    try:
        v = certify(fan)
    except _Timeout:
        ms = int(1000 * (time.perf_counter() - t0))
        return SurveyRecord(dim, index, "timeout", uni, bondal, None, None, None, None, None, ms)
    finally:
        if timeout:
            signal.setitimer(signal.ITIMER_REAL, 0)
            signal.signal(signal.SIGALRM, old)
    ms = int(1000 * (time.perf_counter() - t0))
    return SurveyRecord(
        dim, index, "ok", uni, bondal, v.success, v.strong, v.ordering_exists,
        len(v.collection), tuple(v.resolution_ranks), ms,
    )


def _task(args):
    return survey_one(*args)


def parse_range(text: str | None, size: int) -> range:
    """``"A..B"`` (inclusive) or ``None`` for the whole database."""
    if not text:
        return range(size)
    a, sep, b = text.partition("..")
    if not sep:
        return range(int(a), int(a) + 1)
    lo = int(a) if a else 0
    hi = int(b) if b else size - 1
    return range(lo, min(hi, size - 1) + 1)


def run_survey(
    dim: int,
    jobs: int = 1,
    cache: ResultCache | None = None,
    indices: Iterable[int] | None = None,
    timeout: float | None = None,
    directory=None,
    progress=None,
) -> list[SurveyRecord]:
    """Certify every requested variety, reusing cached records; results sorted by index."""
    db = load_database(dim, directory)
    indices = list(range(len(db)) if indices is None else indices)
    cache = cache or ResultCache(None)
    todo = [i for i in indices if cache.get(dim, i) is None]
    args = [(dim, i, timeout, directory) for i in todo]
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for rec in pool.map(_task, args, chunksize=4):
                cache.add(rec)
                if progress:
                    progress(rec)
    else:
        for a in args:
            rec = _task(a)
            cache.add(rec)
            if progress:
                progress(rec)
    return [cache.get(dim, i) for i in indices]


@dataclass(frozen=True)
class SurveySummary:
    dim: int
    total: int
    database_size: int
    successes: tuple[int, ...]
    unimodular: tuple[int, ...]
    bondal: tuple[int, ...]
    ordering_only: tuple[int, ...]  # ordering exists but the collection is not strong
    timeouts: tuple[int, ...]

    @property
    def proportion(self) -> Fraction:
        return Fraction(len(self.successes), self.database_size)


def summarize(dim: int, records: Sequence[SurveyRecord], database_size: int) -> SurveySummary:
    ok = [r for r in records if r.status == "ok"]
    return SurveySummary(
        dim=dim,
        total=len(records),
        database_size=database_size,
        successes=tuple(r.index for r in ok if r.hhl_success),
        unimodular=tuple(r.index for r in records if r.unimodular),
        bondal=tuple(r.index for r in records if r.bondal_criterion),
        ordering_only=tuple(r.index for r in ok if r.ordering_exists and not r.strong),
        timeouts=tuple(r.index for r in records if r.status == "timeout"),
    )


def format_summary(s: SurveySummary) -> str:
    """Text report; byte-identical for identical record sets."""
    p = s.proportion
    lines = [
        f"dimension {s.dim}: {s.total} of {s.database_size} varieties surveyed",
        f"HHL full strong exceptional: {len(s.successes)}/{s.total}",
        f"unimodular: {len(s.unimodular)}/{s.total}",
        f"Bondal criterion: {len(s.bondal)}/{s.total}",
        f"exceptional ordering but not strong: {len(s.ordering_only)}",
        f"timeouts: {len(s.timeouts)}",
        f"f({s.dim}) = {len(s.successes)}/{s.database_size}" + ("" if p.denominator == s.database_size else f" = {p}"),
        "success indices: {" + ", ".join(map(str, s.successes)) + "}",
    ]
    if s.ordering_only:
        lines.append("ordering without strongness: {" + ", ".join(map(str, s.ordering_only)) + "}")
    if s.timeouts:
        lines.append("timed out: {" + ", ".join(map(str, s.timeouts)) + "}")
    return "\n".join(lines) + "\n"
