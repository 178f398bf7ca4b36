"""Pydantic request/response models for the HTTP service.

Complex vectors travel as parallel ``re``/``im`` float lists; grids as
nested lists in delay-major order. Detected shifts are serialized sorted by
(tau, omega) so responses are byte-stable for a given request.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

SeqKind = Literal["alltop", "random_phase"]


class SequenceIn(BaseModel):
    """A probing sequence, either by generator spec or by explicit values."""

    kind: Optional[SeqKind] = None
    n: Optional[int] = Field(default=None, ge=1)
    seed: int = 0
    re: Optional[list[float]] = None
    im: Optional[list[float]] = None

    @model_validator(mode="after")
    def _one_form(self) -> "SequenceIn":
        by_spec = self.kind is not None and self.n is not None
        by_values = self.re is not None and self.im is not None
        if by_spec == by_values:
            raise ValueError("provide either (kind, n) or (re, im), not both")
        if by_values and len(self.re) != len(self.im):
            raise ValueError("re and im must have equal length")
        if by_values and len(self.re) == 0:
            raise ValueError("empty sequence")
        return self


class SequenceOut(BaseModel):
    n: int
    re: list[float]
    im: list[float]


class CertifyOut(BaseModel):
    n: int
    max_offorigin: float
    b_constant: float


class GridIn(BaseModel):
    f: SequenceIn
    g: Optional[SequenceIn] = None  # defaults to f (auto-ambiguity)
    impl: Literal["fast", "naive"] = "fast"


class GridOut(BaseModel):
    n: int
    re: list[list[float]]
    im: list[list[float]]


class TargetModel(BaseModel):
    tau: int
    omega: int
    alpha_re: float
    alpha_im: float


class ShiftOut(BaseModel):
    tau: int
    omega: int


class TargetDiagOut(BaseModel):
    tau: int
    omega: int
    alpha_abs: float
    cross_abs: float
    noise_abs: float


class DetectIn(BaseModel):
    n: int = Field(ge=1)
    seq_kind: SeqKind = "alltop"
    seq_seed: int = 0
    r: Optional[int] = Field(default=None, ge=1)
    channel_seed: int = 0
    targets: Optional[list[TargetModel]] = None
    snr_db: float = 10.0
    noise_enabled: bool = True
    noise_seed: int = 0
    delta: float = 0.125
    threshold_override: Optional[float] = None

    @model_validator(mode="after")
    def _channel_form(self) -> "DetectIn":
        if (self.r is None) == (self.targets is None):
            raise ValueError("provide either r (sampled channel) or explicit targets")
        return self


class DetectOut(BaseModel):
    n: int
    delta: float
    threshold: float
    detected: list[ShiftOut]
    n_true: int
    n_false: int
    per_target: list[TargetDiagOut]
    truth: list[TargetModel]


class SweepIn(BaseModel):
    regime_delta: float = 0.5
    n_list: list[int]
    snr_db: float = 10.0
    trials: int = Field(default=200, ge=1)
    seq_kind: SeqKind = "alltop"
    master_seed: int = 0
    noise_enabled: bool = True
    threads: int = Field(default=1, ge=1)
    seq_seed: int = 0


class SweepRowOut(BaseModel):
    n: int
    r: int
    trials: int
    pd: float
    pd_stderr: Optional[float]
    eft: float
    eft_stderr: Optional[float]
    ms_per_trial: float


class SweepOut(BaseModel):
    config: dict
    rows: list[SweepRowOut]


class SliceOracleIn(BaseModel):
    r: int = 16
    epsilon: float = 0.01
    samples: int = 100_000
    seed: int = 0
    first_coord_scale: float = 1.0


class IntersectivityIn(BaseModel):
    r: int = 9
    delta: float = 1.0
    n_atoms: int = 64
    tables: int = 10_000
    seed: int = 0
    # explicit single-table check instead of the randomized search
    atom_weights: Optional[list[float]] = None
    event_table: Optional[list[list[bool]]] = None

    @model_validator(mode="after")
    def _table_form(self) -> "IntersectivityIn":
        if (self.atom_weights is None) != (self.event_table is None):
            raise ValueError("atom_weights and event_table must be given together")
        return self


class OrthogonalityIn(BaseModel):
    r: int = 64
    delta: float = 0.25
    ell: float = 1.0
    c_bound: float = 1.0
    n: int = 256
    samples: int = 10_000
    seed: int = 0


class NoiseOracleIn(BaseModel):
    n: int = 256
    snr_db: float = 0.0
    epsilon: float = 0.25
    num_vectors: int = 1000
    samples: int = 100
    seed: int = 0


class OracleOut(BaseModel):
    lemma: str
    params: dict
    samples: int
    empirical_rate: float
    claimed_bound: float
    passed: bool
    seed: Optional[int]
    detail: dict


class HealthOut(BaseModel):
    status: str
    version: str
