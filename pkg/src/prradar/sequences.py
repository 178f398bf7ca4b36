"""Probing-sequence construction and pseudo-randomness certification.

Sequences are length-N complex vectors (plain numpy arrays). A probing
sequence has unit squared L2 norm; it counts as B-pseudo-random when its
auto-ambiguity magnitude stays at or below B/sqrt(N) everywhere off the
grid origin. Two generators are provided: the deterministic cubic-phase
sequence for prime N (B = 1 exactly), and seeded random-phase sequences for
arbitrary N (B certified empirically per seed).

Quadratic chirps exp(2*pi*i*n^2/N) are deliberately not offered: their
auto-ambiguity concentrates on the line omega = 2*tau at magnitude 1, so
they are not pseudo-random in the above sense.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ambiguity import ambiguity_fast
from .seeding import SeedLike, as_rng

UNIT_NORM_ATOL = 1e-12


def as_sequence(values, *, unit_norm: bool = False) -> np.ndarray:
    """Validate ``values`` as a 1-D complex vector, optionally norm-one."""
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("expected a non-empty 1-D complex vector")
    if unit_norm:
        power = float(np.sum(np.abs(arr) ** 2))
        if abs(power - 1.0) > UNIT_NORM_ATOL:
            raise ValueError(
                f"probing sequence must have unit squared norm, got {power!r}"
            )
    return arr


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def gen_alltop(n_len: int) -> np.ndarray:
    """Cubic-phase probing sequence exp(2*pi*i*n^3/N)/sqrt(N).

    Requires prime N >= 5: with gcd(3, N) = 1 the off-origin auto-ambiguity
    collapses to quadratic Gauss sums of magnitude exactly sqrt(N), so every
    off-origin cell is either 0 or 1/sqrt(N) and the sequence is certified
    at B = 1.
    """
    n_len = int(n_len)
    if n_len < 5 or not is_prime(n_len):
        raise ValueError(
            "cubic-phase sequences need a prime length >= 5 "
            f"(the Gauss-sum argument needs gcd(3, N) = 1); got n_len={n_len}"
        )
    n = np.arange(n_len, dtype=np.int64)
    cubes = ((n * n) % n_len) * n % n_len  # stepwise mod keeps int64 exact
    return np.exp(2j * np.pi * cubes / n_len) / np.sqrt(n_len)


def gen_random_phase(n_len: int, seed: SeedLike = 0) -> np.ndarray:
    """Unit-modulus sequence exp(i*theta_n)/sqrt(N), theta_n i.i.d. uniform.

    Deterministic in ``seed``; norm-one by construction.
    """
    n_len = int(n_len)
    if n_len < 1:
        raise ValueError(f"n_len must be >= 1, got {n_len}")
    rng = as_rng(seed)
    theta = 2.0 * np.pi * rng.random(n_len)
    return np.exp(1j * theta) / np.sqrt(n_len)


@dataclass(frozen=True)
class PseudoRandomCert:
    """Certificate that max off-origin |A(phi, phi)| <= b_constant/sqrt(N)."""

    n_len: int
    max_offorigin: float
    b_constant: float

    def __post_init__(self):
        if self.max_offorigin > self.b_constant / np.sqrt(self.n_len) + 1e-12:
            raise ValueError(
                "inconsistent certificate: max_offorigin exceeds B/sqrt(N)"
            )


def certify_pseudo_random(phi) -> PseudoRandomCert:
    """Measure the off-origin peak of the auto-ambiguity grid.

    Returns the minimal B, i.e. max_offorigin * sqrt(N). Full grid
    evaluation, O(N^2 log N); meant to run once per sequence.
    """
    arr = as_sequence(phi, unit_norm=True)
    mags = np.abs(ambiguity_fast(arr, arr))
    mags[0, 0] = 0.0
    max_off = float(mags.max())
    return PseudoRandomCert(
        n_len=arr.size,
        max_offorigin=max_off,
        b_constant=max_off * float(np.sqrt(arr.size)),
    )


def write_csv(values, path) -> None:
    """Write a sequence as CSV rows ``index,re,im`` at full float64 precision."""
    arr = as_sequence(values)
    with open(path, "w", newline="") as fh:
        fh.write("index,re,im\n")
        for i, z in enumerate(arr):
            fh.write(f"{i},{z.real:.17g},{z.imag:.17g}\n")


def read_csv(path) -> np.ndarray:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 3:
        raise ValueError(f"expected 3 columns (index,re,im) in {path}")
    return np.asarray(data[:, 1] + 1j * data[:, 2], dtype=np.complex128)


def write_bin(values, path) -> None:
    """Compact binary layout: little-endian float64, interleaved re/im."""
    as_sequence(values).astype("<c16").tofile(path)


def read_bin(path) -> np.ndarray:
    arr = np.fromfile(path, dtype="<c16").astype(np.complex128)
    if arr.size == 0:
        raise ValueError(f"no samples found in {path}")
    return arr
