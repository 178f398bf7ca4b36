"""HTTP service wrapping the simulator.

Every endpoint is a pure function of its request body: all randomness is
seeded through the request, so identical requests produce identical
responses (timing fields aside). Domain validation errors surface as
HTTP 422 with the underlying message.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..ambiguity import ambiguity_fast, ambiguity_naive
from ..channel import ChannelParams, NoiseModel, Target, TimeFreqShift, make_channel, sample_noise, apply_channel
from ..detector import DetectorConfig, classify, delta_peaks
from ..montecarlo import sweep
from ..oracles import (
    intersectivity_search,
    oracle_almost_orthogonality,
    oracle_intersectivity,
    oracle_slice_largeness,
    oracle_sqrt_cancellation,
)
from ..seeding import subseed
from ..sequences import certify_pseudo_random, gen_alltop, gen_random_phase
from . import schemas


def _build_sequence(payload: schemas.SequenceIn) -> np.ndarray:
    if payload.re is not None:
        return np.asarray(payload.re) + 1j * np.asarray(payload.im)
    if payload.kind == "alltop":
        return gen_alltop(payload.n)
    return gen_random_phase(payload.n, payload.seed)


def _sequence_out(values: np.ndarray) -> schemas.SequenceOut:
    return schemas.SequenceOut(
        n=values.size, re=values.real.tolist(), im=values.imag.tolist()
    )


def _oracle_out(report) -> schemas.OracleOut:
    return schemas.OracleOut(**report.to_json_dict())


def create_app() -> FastAPI:
    app = FastAPI(
        title="prradar",
        version=__version__,
        description="Delay-Doppler detection simulator: probing sequences, "
        "ambiguity grids, peak detection, Monte Carlo metrics, and "
        "concentration oracles.",
    )

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/health", response_model=schemas.HealthOut)
    def health() -> schemas.HealthOut:
        return schemas.HealthOut(status="ok", version=__version__)

    @app.post("/sequences/generate", response_model=schemas.SequenceOut)
    def sequences_generate(payload: schemas.SequenceIn) -> schemas.SequenceOut:
        return _sequence_out(_build_sequence(payload))

    @app.post("/sequences/certify", response_model=schemas.CertifyOut)
    def sequences_certify(payload: schemas.SequenceIn) -> schemas.CertifyOut:
        cert = certify_pseudo_random(_build_sequence(payload))
        return schemas.CertifyOut(
            n=cert.n_len,
            max_offorigin=cert.max_offorigin,
            b_constant=cert.b_constant,
        )

    @app.post("/ambiguity/grid", response_model=schemas.GridOut)
    def ambiguity_grid(payload: schemas.GridIn) -> schemas.GridOut:
        f = _build_sequence(payload.f)
        g = f if payload.g is None else _build_sequence(payload.g)
        grid = ambiguity_fast(f, g) if payload.impl == "fast" else ambiguity_naive(f, g)
        return schemas.GridOut(
            n=grid.shape[0], re=grid.real.tolist(), im=grid.imag.tolist()
        )

    @app.post("/detect", response_model=schemas.DetectOut)
    def detect_endpoint(payload: schemas.DetectIn) -> schemas.DetectOut:
        if payload.seq_kind == "alltop":
            probe = gen_alltop(payload.n)
        else:
            probe = gen_random_phase(payload.n, payload.seq_seed)
        if payload.targets is not None:
            truth = ChannelParams(
                n_len=payload.n,
                targets=tuple(
                    Target(
                        TimeFreqShift(t.tau, t.omega),
                        complex(t.alpha_re, t.alpha_im),
                    )
                    for t in payload.targets
                ),
            )
        else:
            truth = make_channel(payload.n, payload.r, subseed(payload.channel_seed))
        noise = NoiseModel(snr_db=payload.snr_db, enabled=payload.noise_enabled)
        noise_w = sample_noise(payload.n, noise, subseed(payload.noise_seed))
        echo = apply_channel(truth, probe) + noise_w
        cfg = DetectorConfig(
            delta=payload.delta, threshold_override=payload.threshold_override
        )
        grid = ambiguity_fast(probe, echo)
        found = delta_peaks(grid, cfg.threshold(payload.n))
        report = classify(
            found, truth, s=probe, noise_w=noise_w if payload.noise_enabled else None
        )
        return schemas.DetectOut(
            n=payload.n,
            delta=payload.delta,
            threshold=cfg.threshold(payload.n),
            detected=[
                schemas.ShiftOut(tau=v.tau, omega=v.omega)
                for v in sorted(report.detected)
            ],
            n_true=report.n_true,
            n_false=report.n_false,
            per_target=[
                schemas.TargetDiagOut(
                    tau=t.shift.tau,
                    omega=t.shift.omega,
                    alpha_abs=d.main_abs,
                    cross_abs=d.cross_abs,
                    noise_abs=d.noise_abs,
                )
                for t, d in zip(truth.targets, report.per_target)
            ],
            truth=[
                schemas.TargetModel(
                    tau=t.shift.tau,
                    omega=t.shift.omega,
                    alpha_re=t.alpha.real,
                    alpha_im=t.alpha.imag,
                )
                for t in truth.targets
            ],
        )

    @app.post("/sweep", response_model=schemas.SweepOut)
    def sweep_endpoint(payload: schemas.SweepIn) -> schemas.SweepOut:
        report = sweep(
            regime_delta=payload.regime_delta,
            n_list=payload.n_list,
            snr_db=payload.snr_db,
            trials=payload.trials,
            seq_kind=payload.seq_kind,
            master_seed=payload.master_seed,
            noise_enabled=payload.noise_enabled,
            threads=payload.threads,
            seq_seed=payload.seq_seed,
        )
        return schemas.SweepOut(
            config=report.config,
            rows=[
                schemas.SweepRowOut(
                    n=row.n_len,
                    r=row.r,
                    trials=row.trials,
                    pd=row.p_d_hat,
                    pd_stderr=row.p_d_stderr,
                    eft=row.e_ft_hat,
                    eft_stderr=row.e_ft_stderr,
                    ms_per_trial=row.ms_per_trial,
                )
                for row in report.rows
            ],
        )

    @app.post("/lemmas/slice", response_model=schemas.OracleOut)
    def lemmas_slice(payload: schemas.SliceOracleIn) -> schemas.OracleOut:
        return _oracle_out(
            oracle_slice_largeness(
                payload.r,
                payload.epsilon,
                payload.samples,
                payload.seed,
                first_coord_scale=payload.first_coord_scale,
            )
        )

    @app.post("/lemmas/intersectivity", response_model=schemas.OracleOut)
    def lemmas_intersectivity(payload: schemas.IntersectivityIn) -> schemas.OracleOut:
        if payload.atom_weights is not None:
            report = oracle_intersectivity(
                payload.r, payload.delta, payload.atom_weights, payload.event_table
            )
        else:
            report = intersectivity_search(
                payload.r, payload.delta, payload.n_atoms, payload.tables, payload.seed
            )
        return _oracle_out(report)

    @app.post("/lemmas/orthogonality", response_model=schemas.OracleOut)
    def lemmas_orthogonality(payload: schemas.OrthogonalityIn) -> schemas.OracleOut:
        return _oracle_out(
            oracle_almost_orthogonality(
                payload.r,
                payload.delta,
                payload.ell,
                payload.c_bound,
                payload.n,
                payload.samples,
                payload.seed,
            )
        )

    @app.post("/lemmas/noise", response_model=schemas.OracleOut)
    def lemmas_noise(payload: schemas.NoiseOracleIn) -> schemas.OracleOut:
        return _oracle_out(
            oracle_sqrt_cancellation(
                payload.n,
                payload.snr_db,
                payload.epsilon,
                payload.num_vectors,
                payload.samples,
                payload.seed,
            )
        )

    return app


app = create_app()
