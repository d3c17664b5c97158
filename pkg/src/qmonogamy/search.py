"""Randomized scan of tripartite pure states for monogamy violations."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .bounds import RoofConfig
from .errors import ConfigInvalid, WrongArity
from .monogamy import MonogamyReport, audit, audit_all_foci
from .qstate import PureState
from .states import RNG_ALGORITHM, haar_random_pure

SCAN_RESTARTS = 2
SCAN_MAX_ITERS = 300
REFINE_FACTOR = 4


def scan_roof_config(seed: int) -> RoofConfig:
    return RoofConfig(seed=seed, restarts=SCAN_RESTARTS, max_iters=SCAN_MAX_ITERS)


@dataclass(frozen=True)
class ScanConfig:
    dims: tuple[int, int, int]
    samples: int
    seed: int
    margin_threshold: float = 1e-6
    roof_cfg: RoofConfig | None = None
    inject: tuple[PureState, ...] = field(default=())

    def __post_init__(self):
        if len(self.dims) != 3:
            raise WrongArity(f"scan needs three subsystem dims, got {list(self.dims)}")
        if self.samples < 1:
            raise ConfigInvalid(f"samples must be >= 1, got {self.samples}")
        if self.margin_threshold < 0:
            raise ConfigInvalid("margin_threshold must be >= 0")
        if any(s.dims != tuple(self.dims) for s in self.inject):
            raise ConfigInvalid("injected states must match the scan dims")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if self.roof_cfg is None:
            object.__setattr__(self, "roof_cfg", scan_roof_config(self.seed))


@dataclass(frozen=True)
class ScanRecord:
    seed_offset: int
    state_hash: str
    reports: tuple[dict, ...]
    best_margin: float
    candidate: bool

    def to_dict(self) -> dict:
        return {
            "seed_offset": self.seed_offset,
            "state_hash": self.state_hash,
            "best_margin": self.best_margin,
            "candidate": self.candidate,
            "rng": RNG_ALGORITHM,
            "reports": list(self.reports),
        }


def state_hash(psi: PureState) -> str:
    h = hashlib.sha256()
    h.update(np.asarray(psi.dims, dtype="<i8").tobytes())
    h.update(np.ascontiguousarray(psi.amplitudes, dtype="<c16").tobytes())
    return h.hexdigest()


def _summary(r: MonogamyReport) -> tuple[dict, float]:
    """Per-focus summary and its margin, preferring lower-bound pairwise values."""
    lower = r.term_b.lower.value_sq + r.term_c.lower.value_sq
    margin = lower - r.c2_focus_rest.value_sq
    doc = {
        "focus": r.focus,
        "verdict": r.verdict.value,
        "c2_focus_rest": r.c2_focus_rest.value_sq,
        "pair_lower": [r.term_b.lower.value_sq, r.term_c.lower.value_sq],
        "pair_upper": [None if t.upper is None else t.upper.value_sq for t in (r.term_b, r.term_c)],
        "certainty": [r.term_b.lower.certainty.value, r.term_c.lower.certainty.value],
        "margin": margin,
    }
    return doc, margin


def sample_state(cfg: ScanConfig, index: int) -> PureState:
    if index < len(cfg.inject):
        return cfg.inject[index]
    return haar_random_pure(cfg.dims, [cfg.seed, index])


def scan_sample(cfg: ScanConfig, index: int) -> ScanRecord:
    """Audit sample ``index``; a pure function of ``(cfg, index)``."""
    psi = sample_state(cfg, index)
    sample_seed = int(np.random.SeedSequence([cfg.roof_cfg.seed, index]).generate_state(1)[0])
    roof = replace(cfg.roof_cfg, seed=sample_seed)
    docs, margins = zip(*(_summary(r) for r in audit_all_foci(psi, roof)))
    best = float(max(margins))
    return ScanRecord(index, state_hash(psi), tuple(docs), best, best > cfg.margin_threshold)


def _sort(records: Sequence[ScanRecord]) -> list[ScanRecord]:
    return sorted(records, key=lambda r: (-r.best_margin, r.seed_offset))


def scan(cfg: ScanConfig, workers: int = 1) -> list[ScanRecord]:
    """Audit ``cfg.samples`` states and return records by descending ``best_margin``."""
    indices = range(cfg.samples)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(scan_sample, [cfg] * cfg.samples, indices))
    else:
        records = [scan_sample(cfg, i) for i in indices]
    return _sort(records)


def merge(*batches: Sequence[ScanRecord]) -> list[ScanRecord]:
    return _sort([r for b in batches for r in b])


def refine(psi: PureState, focus: int, cfg: RoofConfig) -> MonogamyReport:
    """Re-audit with at least four times the scan budget."""
    escalated = replace(
        cfg,
        restarts=max(REFINE_FACTOR * cfg.restarts, REFINE_FACTOR * SCAN_RESTARTS),
        max_iters=max(REFINE_FACTOR * cfg.max_iters, REFINE_FACTOR * SCAN_MAX_ITERS),
    )
    return audit(psi, focus, escalated)


def to_jsonl(records: Sequence[ScanRecord]) -> str:
    return "".join(json.dumps(r.to_dict()) + "\n" for r in records)


def summary_csv(cfg: ScanConfig, records: Sequence[ScanRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["dims", "samples", "candidates", "max_margin"])
    w.writerow([
        "x".join(str(d) for d in cfg.dims),
        len(records),
        sum(r.candidate for r in records),
        f"{max(r.best_margin for r in records):.12g}",
    ])
    return buf.getvalue()

