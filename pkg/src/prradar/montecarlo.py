"""Monte Carlo estimation of detection performance.

Estimates the probability of detection (mean fraction of true targets
found) and the expected number of false targets over independent seeded
trials, and sweeps (N, r) along the sparsity regime r = floor(N^(1-delta))
with the detector parameter pinned to delta/4. Trials are pure functions of
(master_seed, trial_index), so thread-parallel runs aggregate to identical
results at any worker count.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .channel import NoiseModel, make_channel, synthesize_echo
from .detector import DetectorConfig, classify, detect
from .seeding import CHANNEL_STREAM, NOISE_STREAM, subseed
from .sequences import gen_alltop, gen_random_phase, is_prime

SEQ_KINDS = ("alltop", "random_phase")

SWEEP_CSV_HEADER = "n,r,trials,pd,pd_stderr,eft,eft_stderr,ms_per_trial"


@dataclass(frozen=True)
class TrialConfig:
    """One Monte Carlo scenario; the detector runs at regime_delta/4."""

    n_len: int
    r: int
    snr_db: float = 10.0
    regime_delta: float = 0.5
    seq_kind: str = "alltop"
    master_seed: int = 0
    noise_enabled: bool = True
    seq_seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.regime_delta < 1.0:
            raise ValueError(f"regime_delta must lie in (0, 1), got {self.regime_delta}")
        if not 1 <= self.r <= self.n_len**2:
            raise ValueError(f"need 1 <= r <= N^2, got r={self.r} with N={self.n_len}")
        if self.seq_kind not in SEQ_KINDS:
            raise ValueError(f"seq_kind must be one of {SEQ_KINDS}, got {self.seq_kind!r}")
        if self.seq_kind == "alltop" and (self.n_len < 5 or not is_prime(self.n_len)):
            raise ValueError(f"alltop requires prime N >= 5, got N={self.n_len}")

    @property
    def detector_delta(self) -> float:
        return self.regime_delta / 4.0

    def probe_sequence(self) -> np.ndarray:
        if self.seq_kind == "alltop":
            return gen_alltop(self.n_len)
        return gen_random_phase(self.n_len, self.seq_seed)


@dataclass(frozen=True)
class SweepRow:
    """Aggregated estimates for one (N, r) point; stderr fields are None
    when a single trial leaves the sample variance undefined."""

    n_len: int
    r: int
    trials: int
    p_d_hat: float
    p_d_stderr: float | None
    e_ft_hat: float
    e_ft_stderr: float | None
    ms_per_trial: float


@dataclass
class SweepReport:
    rows: list[SweepRow]
    config: dict

    def to_json_dict(self) -> dict:
        return {"config": dict(self.config), "rows": [asdict(r) for r in self.rows]}


def run_trial(cfg: TrialConfig, trial_index: int, probe: np.ndarray | None = None) -> tuple[int, int]:
    """One end-to-end draw -> (true detections, false detections).

    Fully determined by (cfg, trial_index). The channel draw and the noise
    draw use disjoint seed paths, so regenerating the channel with a fresh
    noise realization keeps the targets fixed.
    """
    if probe is None:
        probe = cfg.probe_sequence()
    chan = make_channel(
        cfg.n_len, cfg.r, subseed(cfg.master_seed, trial_index, CHANNEL_STREAM)
    )
    noise = NoiseModel(snr_db=cfg.snr_db, enabled=cfg.noise_enabled)
    echo = synthesize_echo(
        chan, probe, noise, subseed(cfg.master_seed, trial_index, NOISE_STREAM)
    )
    found = detect(probe, echo, DetectorConfig(delta=cfg.detector_delta))
    report = classify(found, chan)
    return report.n_true, report.n_false


def aggregate_outcomes(outcomes, r: int, *, n_len: int = 0, ms_per_trial: float = 0.0) -> SweepRow:
    """Fold per-trial (N_t, N_f) counts into estimator values.

    p_d_hat = sum N_t / (r * T); e_ft_hat = sum N_f / T; standard errors
    from the sample variance of per-trial N_t/r and N_f.
    """
    trials = len(outcomes)
    if trials < 1:
        raise ValueError("need at least one trial outcome")
    nt = np.array([o[0] for o in outcomes], dtype=float)
    nf = np.array([o[1] for o in outcomes], dtype=float)
    p_d_hat = float(nt.sum()) / (r * trials)
    e_ft_hat = float(nf.sum()) / trials
    if trials >= 2:
        p_d_se = float(np.std(nt / r, ddof=1)) / math.sqrt(trials)
        e_ft_se = float(np.std(nf, ddof=1)) / math.sqrt(trials)
    else:
        p_d_se = None
        e_ft_se = None
    return SweepRow(
        n_len=n_len,
        r=r,
        trials=trials,
        p_d_hat=p_d_hat,
        p_d_stderr=p_d_se,
        e_ft_hat=e_ft_hat,
        e_ft_stderr=e_ft_se,
        ms_per_trial=ms_per_trial,
    )


def estimate_metrics(cfg: TrialConfig, trials: int, threads: int = 1) -> SweepRow:
    """Run ``trials`` independent trials, optionally thread-parallel.

    Aggregation is by trial index over integer counts, so the row is
    identical for any ``threads`` value.
    """
    trials = int(trials)
    if trials < 1:
        raise ValueError("need trials >= 1")
    probe = cfg.probe_sequence()

    def one(index: int) -> tuple[int, int, float]:
        t0 = time.perf_counter()
        n_true, n_false = run_trial(cfg, index, probe=probe)
        return n_true, n_false, (time.perf_counter() - t0) * 1e3

    if threads <= 1:
        results = [one(i) for i in range(trials)]
    else:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            results = list(pool.map(one, range(trials)))
    ms = float(np.mean([x[2] for x in results]))
    return aggregate_outcomes(
        [(x[0], x[1]) for x in results], cfg.r, n_len=cfg.n_len, ms_per_trial=ms
    )


def regime_sparsity(n_len: int, regime_delta: float) -> int:
    """Sparsity at the regime boundary: max(1, floor(N^(1-delta)))."""
    return max(1, math.floor(float(n_len) ** (1.0 - float(regime_delta))))


def sweep(
    regime_delta: float,
    n_list,
    snr_db: float = 10.0,
    trials: int = 200,
    seq_kind: str = "alltop",
    master_seed: int = 0,
    *,
    noise_enabled: bool = True,
    threads: int = 1,
    seq_seed: int = 0,
) -> SweepReport:
    """One estimator row per N, with r pinned to the regime boundary."""
    n_list = [int(n) for n in n_list]
    if not n_list:
        raise ValueError("n_list must not be empty")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be strictly ascending")
    if seq_kind == "alltop":
        bad = [n for n in n_list if n < 5 or not is_prime(n)]
        if bad:
            raise ValueError(f"alltop requires prime N >= 5; offending entries: {bad}")
    rows = []
    for n in n_list:
        cfg = TrialConfig(
            n_len=n,
            r=regime_sparsity(n, regime_delta),
            snr_db=snr_db,
            regime_delta=regime_delta,
            seq_kind=seq_kind,
            master_seed=master_seed,
            noise_enabled=noise_enabled,
            seq_seed=seq_seed,
        )
        rows.append(estimate_metrics(cfg, trials, threads=threads))
    config = {
        "regime_delta": float(regime_delta),
        "n_list": n_list,
        "snr_db": float(snr_db),
        "trials": int(trials),
        "seq_kind": seq_kind,
        "master_seed": int(master_seed),
        "noise_enabled": bool(noise_enabled),
        "threads": int(threads),
        "seq_seed": int(seq_seed),
        "detector_delta": float(regime_delta) / 4.0,
    }
    return SweepReport(rows=rows, config=config)


def _fmt_float(x: float | None) -> str:
    return "" if x is None else format(float(x), ".17g")


def write_sweep_csv(report: SweepReport, path) -> None:
    """Stable text encoding of the sweep rows.

    Every column except the trailing ms_per_trial is a deterministic
    function of the sweep config; ms_per_trial is wall-clock measurement.
    Undefined stderr (single trial) is written as an empty field.
    """
    with open(path, "w", newline="") as fh:
        fh.write(SWEEP_CSV_HEADER + "\n")
        for row in report.rows:
            fields = [
                str(row.n_len),
                str(row.r),
                str(row.trials),
                _fmt_float(row.p_d_hat),
                _fmt_float(row.p_d_stderr),
                _fmt_float(row.e_ft_hat),
                _fmt_float(row.e_ft_stderr),
                format(row.ms_per_trial, ".3f"),
            ]
            fh.write(",".join(fields) + "\n")


def write_sweep_json(report: SweepReport, path) -> None:
    with open(path, "w") as fh:
        json.dump(report.to_json_dict(), fh, indent=2)
        fh.write("\n")
