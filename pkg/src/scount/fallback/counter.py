"""Certified-by-consistency realization counts from repeated homotopy runs."""
from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from ..graph import Graph
from .homotopy import FINITE, INFINITE, SINGULAR, UNCLASSIFIED, TrackerOptions, cluster, solve
from .polysys import eliminate_pinned
from .realization import RealizationSystem, build_system, sample_lengths

log = logging.getLogger(__name__)


class FallbackError(RuntimeError):
    """Numerical failure; ``certificate`` holds whatever evidence was gathered."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class UncertifiedError(FallbackError):
    pass


class PairingError(FallbackError):
    pass


class TrialDisagreement(FallbackError):
    pass


@dataclass
class FallbackConfig:
    seed: int = 0
    trials: int = 3
    multihom: bool = False
    tol: float = 1e-10
    track_tol: float = 1e-7
    dedup_tol: float = 1e-6
    max_steps: int = 10_000
    retries: int = 2
    interval: tuple[float, float] = (0.5, 3.5)
    max_total_degree_vars: int = 20
    batch_size: int = 4096
    jobs: int = 1

    def tracker(self) -> TrackerOptions:
        return TrackerOptions(tol=self.tol, track_tol=self.track_tol, dedup_tol=self.dedup_tol, max_steps=self.max_steps,
                              batch_size=self.batch_size)


@dataclass
class TrialRecord:
    seed: int | None
    gauge: tuple[int, int]
    start_system: str
    paths_tracked: int
    paths_converged: int
    paths_diverged_to_infinity: int
    singular_endpoints: int
    failed_paths: int
    distinct_endpoints: int
    symmetry_pairing_ok: bool
    count: int
    twist_retries: int = 0
    retracked_paths: int = 0
    steps: int = 0


@dataclass
class CountCertificate:
    records: list[TrialRecord] = field(default_factory=list)
    agreed_count: int | None = None

    @property
    def trials(self) -> list[int]:
        return [r.count for r in self.records]

    def _sum(self, name):
        return sum(getattr(r, name) for r in self.records)

    @property
    def paths_tracked(self) -> int:
        return self._sum("paths_tracked")

    @property
    def paths_converged(self) -> int:
        return self._sum("paths_converged")

    @property
    def paths_diverged_to_infinity(self) -> int:
        return self._sum("paths_diverged_to_infinity")

    @property
    def singular_endpoints(self) -> int:
        return self._sum("singular_endpoints")

    @property
    def distinct_endpoints(self) -> list[int]:
        return [r.distinct_endpoints for r in self.records]

    @property
    def symmetry_pairing_ok(self) -> bool:
        return all(r.symmetry_pairing_ok for r in self.records)

    def to_json(self) -> dict:
        return {
            "agreed_count": self.agreed_count,
            "trials": self.trials,
            "paths_tracked": self.paths_tracked,
            "paths_converged": self.paths_converged,
            "paths_diverged_to_infinity": self.paths_diverged_to_infinity,
            "singular_endpoints": self.singular_endpoints,
            "distinct_endpoints": self.distinct_endpoints,
            "symmetry_pairing_ok": self.symmetry_pairing_ok,
            "records": [asdict(r) for r in self.records],
        }


def _pairing_ok(sols: np.ndarray, signs: np.ndarray, tol: float) -> bool:
    """Every solution has a distinct partner under the residual half-turn."""
    if len(sols) % 2:
        return False
    if not len(sols):
        return True
    ids = cluster(np.concatenate([sols, sols * signs]), tol)
    n = len(sols)
    own, image = ids[:n], ids[n:]
    return len(set(own)) == n and sorted(own) == sorted(image) and not (own == image).any()


def solve_count(rs: RealizationSystem, cfg: FallbackConfig | None = None, seed=None) -> CountCertificate:
    """Count realizations for one length assignment; retries with a new twist on failure."""
    cfg = cfg or FallbackConfig()
    t0 = time.perf_counter()
    reduced, kept, fixed = eliminate_pinned(rs.polys)
    if cfg.multihom:
        where = {old: new for new, old in enumerate(kept)}
        groups = [[where[i] for i in grp if i in where] for grp in rs.vertex_groups()]
        groups = [g for g in groups if g]
    else:
        if rs.n_unknowns > cfg.max_total_degree_vars:
            raise UncertifiedError(
                f"total-degree homotopy refused for {rs.n_unknowns} > {cfg.max_total_degree_vars} "
                "variables; enable the multi-homogeneous start system")
        groups = None
    signs = rs.symmetry_signs()
    rng = np.random.default_rng(seed)
    opts = cfg.tracker()
    rec = None
    for attempt in range(cfg.retries + 1):
        res = solve(reduced, groups, rng, opts)
        full = np.empty((len(res.solutions), rs.n_unknowns), dtype=complex)
        full[:, kept] = res.solutions
        for i, val in fixed.items():
            full[:, i] = val
        paired = _pairing_ok(full, signs, cfg.dedup_tol)
        failed = res.count(UNCLASSIFIED)
        rec = TrialRecord(
            seed=seed if isinstance(seed, int) else None, gauge=rs.gauge,
            start_system="multihom" if groups is not None else "total-degree",
            paths_tracked=res.paths, paths_converged=res.count(FINITE),
            paths_diverged_to_infinity=res.count(INFINITE), singular_endpoints=res.count(SINGULAR),
            failed_paths=failed, distinct_endpoints=len(full), symmetry_pairing_ok=paired,
            count=len(full) // 2, twist_retries=attempt, retracked_paths=res.retracked,
            steps=res.steps)
        clean = failed == 0 and res.duplicates == 0 and res.count(FINITE) == len(full)
        log.debug("trial on %s took %.2fs", rs.graph, time.perf_counter() - t0)
        if clean and paired:
            return CountCertificate([rec], rec.count)
        log.info("trial on %s: failed=%d duplicates=%d pairing=%s, new twist", rs.graph, failed,
                 res.duplicates, paired)
    cert = CountCertificate([rec], None)
    if not rec.symmetry_pairing_ok:
        raise PairingError("pairing violated: endpoint set is not closed under the residual half-turn", cert)
    raise UncertifiedError("uncertified: some paths could not be classified", cert)


def _trial_seeds(seed: int, trials: int):
    for child in np.random.SeedSequence(seed).spawn(trials):
        lengths_ss, solver_ss = child.spawn(2)
        yield int(lengths_ss.generate_state(1)[0]), solver_ss


def run_fallback(g: Graph, cfg: FallbackConfig | None = None) -> CountCertificate:
    """Independent random-length trials; all must agree."""
    cfg = cfg or FallbackConfig()

    def one(args):
        lseed, sseed = args
        rs = build_system(g, sample_lengths(g, lseed, cfg.interval))
        cert = solve_count(rs, cfg, seed=sseed)
        cert.records[0].seed = lseed
        return cert.records[0]

    seeds = list(_trial_seeds(cfg.seed, cfg.trials))
    if cfg.jobs > 1:
        with ThreadPoolExecutor(cfg.jobs) as pool:
            records = list(pool.map(one, seeds))
    else:
        records = [one(s) for s in seeds]
    cert = CountCertificate(records)
    counts = set(cert.trials)
    if len(counts) != 1:
        raise TrialDisagreement(f"trials disagree: {cert.trials}", cert)
    cert.agreed_count = counts.pop()
    return cert


def fallback_count(g: Graph, cfg: FallbackConfig | None = None) -> int:
    return run_fallback(g, cfg).agreed_count
