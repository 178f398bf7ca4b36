"""Sparse delay-Doppler channel synthesis.

A channel is a superposition of r attenuated time-frequency shifts; the
attenuation vector is a uniform point on the complex unit sphere, the
shifts are drawn without replacement from the N x N grid, and the echo adds
circularly-symmetric white Gaussian noise at a fixed SNR. Channel draws and
noise draws always come from disjoint seed streams, so either can be
regenerated independently of the other.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .ambiguity import TimeFreqShift, shift_apply
from .seeding import SeedLike, as_rng

ALPHA_NORM_ATOL = 1e-12


@dataclass(frozen=True)
class Target:
    """One scatterer: a grid shift and its complex attenuation."""

    shift: TimeFreqShift
    alpha: complex


@dataclass(frozen=True)
class ChannelParams:
    """The ground-truth channel: r distinct targets with unit total power."""

    n_len: int
    targets: tuple[Target, ...]

    def __post_init__(self):
        n = int(self.n_len)
        if n < 1:
            raise ValueError("n_len must be positive")
        canon = tuple(
            Target(TimeFreqShift(*t.shift).reduced(n), complex(t.alpha))
            for t in self.targets
        )
        object.__setattr__(self, "n_len", n)
        object.__setattr__(self, "targets", canon)
        r = len(canon)
        if not 1 <= r <= n * n:
            raise ValueError(f"need 1 <= r <= N^2 targets, got r={r} with N={n}")
        if len({t.shift for t in canon}) != r:
            raise ValueError("target shifts must be pairwise distinct mod N")
        power = sum(abs(t.alpha) ** 2 for t in canon)
        if abs(power - 1.0) > ALPHA_NORM_ATOL:
            raise ValueError(
                f"attenuations must satisfy sum |alpha_k|^2 = 1, got {power!r}"
            )

    @property
    def r(self) -> int:
        return len(self.targets)

    @property
    def shifts(self) -> tuple[TimeFreqShift, ...]:
        return tuple(t.shift for t in self.targets)

    @property
    def alphas(self) -> np.ndarray:
        return np.array([t.alpha for t in self.targets], dtype=np.complex128)

    def support(self) -> frozenset[TimeFreqShift]:
        """The set of true shifts on the grid."""
        return frozenset(t.shift for t in self.targets)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n_len,
            "targets": [
                {
                    "tau": t.shift.tau,
                    "omega": t.shift.omega,
                    "alpha_re": t.alpha.real,
                    "alpha_im": t.alpha.imag,
                }
                for t in self.targets
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ChannelParams":
        targets = tuple(
            Target(
                TimeFreqShift(int(t["tau"]), int(t["omega"])),
                complex(float(t["alpha_re"]), float(t["alpha_im"])),
            )
            for t in data["targets"]
        )
        return cls(n_len=int(data["n"]), targets=targets)

    def save_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load_json(cls, path) -> "ChannelParams":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


@dataclass(frozen=True)
class NoiseModel:
    """AWGN at a fixed N-independent SNR.

    Per-sample variance is 10^(-snr_db/10)/N, so a unit-power channel output
    against this noise has total SNR ``snr_db`` and noise projections onto
    unit vectors scale like N^(-1/2).
    """

    snr_db: float = 10.0
    enabled: bool = True

    def sigma2(self, n_len: int) -> float:
        if not self.enabled:
            return 0.0
        return 10.0 ** (-self.snr_db / 10.0) / n_len


def sample_attenuations(r: int, seed: SeedLike) -> np.ndarray:
    """Uniform point on the complex unit sphere in C^r.

    Drawn as 2r independent standard Gaussians, normalized; rotation
    invariance of the Gaussian makes the direction uniform.
    """
    r = int(r)
    if r < 1:
        raise ValueError(f"need at least one attenuation, got r={r}")
    rng = as_rng(seed)
    vec = rng.standard_normal(r) + 1j * rng.standard_normal(r)
    return vec / np.linalg.norm(vec)


def sample_shifts(n_len: int, r: int, seed: SeedLike) -> list[TimeFreqShift]:
    """r distinct cells drawn uniformly without replacement from Z_N x Z_N.

    Coinciding shifts would merge into a single effective target and corrupt
    true/false accounting, hence without replacement.
    """
    n_len, r = int(n_len), int(r)
    if r < 1:
        raise ValueError(f"need at least one shift, got r={r}")
    if r > n_len * n_len:
        raise ValueError(
            f"cannot place {r} distinct shifts on a {n_len}x{n_len} grid"
        )
    rng = as_rng(seed)
    cells = rng.choice(n_len * n_len, size=r, replace=False)
    return [TimeFreqShift(int(c) // n_len, int(c) % n_len) for c in cells]


def make_channel(n_len: int, r: int, seed: SeedLike) -> ChannelParams:
    """Random channel: shifts and attenuations from two sub-streams of ``seed``."""
    if isinstance(seed, np.random.Generator):
        raise TypeError(
            "make_channel derives two sub-streams; pass an int or SeedSequence"
        )
    base = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(int(seed))
    # stateless equivalent of base.spawn(2): repeated calls with the same
    # seed object must yield the same channel
    shift_ss = np.random.SeedSequence(entropy=base.entropy, spawn_key=(*base.spawn_key, 0))
    alpha_ss = np.random.SeedSequence(entropy=base.entropy, spawn_key=(*base.spawn_key, 1))
    shifts = sample_shifts(n_len, r, shift_ss)
    alphas = sample_attenuations(r, alpha_ss)
    return ChannelParams(
        n_len=n_len,
        targets=tuple(Target(s, complex(a)) for s, a in zip(shifts, alphas)),
    )


def apply_channel(params: ChannelParams, s) -> np.ndarray:
    """Superpose the r attenuated time-frequency shifts of ``s`` (linear in s)."""
    arr = np.asarray(s, dtype=np.complex128)
    if arr.ndim != 1 or arr.size != params.n_len:
        raise ValueError(
            f"sequence of length {arr.size if arr.ndim == 1 else arr.shape} "
            f"does not match channel N={params.n_len}"
        )
    out = np.zeros(params.n_len, dtype=np.complex128)
    for t in params.targets:
        out += t.alpha * shift_apply(arr, t.shift)
    return out


def sample_noise(n_len: int, noise: NoiseModel, seed: SeedLike) -> np.ndarray:
    """Circularly-symmetric complex AWGN draw; zeros when noise is disabled."""
    n_len = int(n_len)
    if not noise.enabled:
        return np.zeros(n_len, dtype=np.complex128)
    rng = as_rng(seed)
    scale = np.sqrt(noise.sigma2(n_len) / 2.0)
    return scale * (rng.standard_normal(n_len) + 1j * rng.standard_normal(n_len))


def synthesize_echo(params: ChannelParams, s, noise: NoiseModel, seed: SeedLike) -> np.ndarray:
    """Channel output plus noise.

    With noise disabled the result is bit-identical to ``apply_channel``;
    the noise seed belongs to a stream disjoint from the channel draw.
    """
    clean = apply_channel(params, s)
    if not noise.enabled:
        return clean
    return clean + sample_noise(params.n_len, noise, seed)
