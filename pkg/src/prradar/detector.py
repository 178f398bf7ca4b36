"""Threshold detector on the ambiguity grid.

The detector computes the full cross-ambiguity of the probing sequence
against the received echo and returns every cell whose magnitude reaches
N^(-1/2+delta) (inclusive). Scoring against ground truth is purely
set-based: a detection at a true shift counts as true no matter which term
pushed it over the threshold. Ground truth never enters the detector
itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ambiguity import TimeFreqShift, ambiguity_fast, shift_apply
from .channel import ChannelParams
from .sequences import as_sequence


@dataclass(frozen=True)
class DetectorConfig:
    """``delta`` sets the peak threshold N^(-1/2+delta); an explicit
    override replaces it (calibration experiments only)."""

    delta: float
    threshold_override: float | None = None

    def __post_init__(self):
        if not 0.0 < self.delta < 0.5:
            raise ValueError(f"delta must lie in (0, 1/2), got {self.delta}")
        if self.threshold_override is not None and self.threshold_override < 0.0:
            raise ValueError("threshold override must be nonnegative")

    def threshold(self, n_len: int) -> float:
        if self.threshold_override is not None:
            return float(self.threshold_override)
        return float(n_len) ** (-0.5 + self.delta)


@dataclass(frozen=True)
class TermBreakdown:
    """Magnitudes of the three components of the peak value at a true shift:
    the attenuation itself, the cross-talk from the other targets, and the
    noise projection."""

    main_abs: float
    cross_abs: float
    noise_abs: float


@dataclass
class DetectionReport:
    detected: set[TimeFreqShift]
    n_true: int
    n_false: int
    per_target: list[TermBreakdown] | None = None

    def to_json_dict(self) -> dict:
        out = {
            "detected": [{"tau": v.tau, "omega": v.omega} for v in sorted(self.detected)],
            "n_true": self.n_true,
            "n_false": self.n_false,
        }
        if self.per_target is not None:
            out["per_target"] = [
                {
                    "alpha_abs": t.main_abs,
                    "cross_abs": t.cross_abs,
                    "noise_abs": t.noise_abs,
                }
                for t in self.per_target
            ]
        return out


def delta_peaks(grid, threshold: float) -> set[TimeFreqShift]:
    """All cells with magnitude >= threshold (inclusive comparison)."""
    mags = np.abs(np.asarray(grid))
    taus, omegas = np.nonzero(mags >= threshold)
    return {TimeFreqShift(int(t), int(w)) for t, w in zip(taus, omegas)}


def detect(s, r_echo, cfg: DetectorConfig) -> set[TimeFreqShift]:
    """Return the shifts at which the echo's ambiguity grid peaks.

    Consumes only (probing sequence, echo, delta); uses the fast grid path.
    """
    s_arr = as_sequence(s, unit_norm=True)
    grid = ambiguity_fast(s_arr, r_echo)
    return delta_peaks(grid, cfg.threshold(s_arr.size))


def decompose_terms(s, truth: ChannelParams, noise_w, k: int) -> tuple[complex, complex, complex]:
    """Split the measured peak value at true target k into
    (attenuation, cross, noise) components.

    The three parts sum to the measured ambiguity value at that shift:
    cross is sum_{j != k} alpha_j <shift(v_k) s, shift(v_j) s>, noise is
    <shift(v_k) s, W>. Pass ``noise_w=None`` for a noiseless echo.
    """
    s_arr = as_sequence(s)
    if s_arr.size != truth.n_len:
        raise ValueError(
            f"sequence length {s_arr.size} does not match channel N={truth.n_len}"
        )
    if not 0 <= int(k) < truth.r:
        raise IndexError(f"target index {k} out of range for r={truth.r}")
    k = int(k)
    probe_k = shift_apply(s_arr, truth.targets[k].shift)
    main = complex(truth.targets[k].alpha)
    cross = 0j
    for j, t in enumerate(truth.targets):
        if j != k:
            cross += t.alpha * np.vdot(probe_k, shift_apply(s_arr, t.shift))
    if noise_w is None:
        noise = 0j
    else:
        w_arr = np.asarray(noise_w, dtype=np.complex128)
        if w_arr.shape != (truth.n_len,):
            raise ValueError("noise realization length does not match channel")
        noise = complex(np.vdot(probe_k, w_arr))
    return main, complex(cross), noise


def classify(detected, truth: ChannelParams, *, s=None, noise_w=None) -> DetectionReport:
    """Score a detected set against the channel support by set membership.

    Supply the probing sequence (and the noise realization, if any) to
    attach the per-target breakdown of peak values to the report.
    """
    support = truth.support()
    det = {
        TimeFreqShift(int(v[0]), int(v[1])).reduced(truth.n_len) for v in detected
    }
    per_target = None
    if s is not None:
        per_target = []
        for k in range(truth.r):
            main, cross, noise = decompose_terms(s, truth, noise_w, k)
            per_target.append(TermBreakdown(abs(main), abs(cross), abs(noise)))
    return DetectionReport(
        detected=det,
        n_true=len(det & support),
        n_false=len(det - support),
        per_target=per_target,
    )
