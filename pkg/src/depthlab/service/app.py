"""FastAPI application exposing the laboratory.

The CLI drives this app in-process through an ASGI transport, so the HTTP
surface is the single code path for both local runs and a shared server
(`depthlab serve`). Experiment runs are synchronous: desk-scale budgets keep
them in the seconds-to-minutes range and determinism is easier to audit
without a job queue.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import acceptance
from .. import measures as meas
from ..ballbodies import BallBodyOracle
from ..centroid import CentroidOracle
from ..depth import DepthOptions, TailEstimator, depth_estimate, expected_depth
from ..harness import config as hconfig
from ..harness import runner
from ..harness.records import ARTIFACT_VERSION, RunRecord
from ..rng import RngStream
from ..transforms import LaplaceOracle, TransformError, bt_radial_batch, cramer
from . import models as mdl


def _measure(ref: mdl.MeasureRef) -> meas.MeasureSpec:
    try:
        return meas.make_measure(ref.kind, ref.dimension)
    except meas.MeasureError as exc:
        raise HTTPException(status_code=422, detail=str(exc))


def _stream(ref: mdl.StreamRef) -> RngStream:
    return RngStream(ref.seed, ref.stream)


def _record_model(record: RunRecord) -> mdl.RunRecordModel:
    return mdl.RunRecordModel(
        experiment=record.experiment,
        config_hash=record.config_hash,
        version=record.version,
        seed=record.seed,
        started_at=record.started_at,
        finished_at=record.finished_at,
        metrics=[mdl.MetricTableModel(name=t.name, columns=t.columns, rows=t.rows, plot=t.plot)
                 for t in record.metrics],
        assertions=[mdl.AssertionModel(name=a.name, status=a.status, value=a.value, detail=a.detail)
                    for a in record.assertions],
        partial=record.partial,
        all_passed=record.all_passed,
    )


def create_app() -> FastAPI:
    app = FastAPI(title="depthlab", version=ARTIFACT_VERSION)

    @app.get("/health")
    def health():
        return {"status": "ok", "version": ARTIFACT_VERSION}

    @app.get("/measures")
    def catalog():
        return {
            "kinds": [
                {
                    "kind": k,
                    "atomic": k == meas.DISCRETE_CUBE,
                    "even": k in (meas.GAUSSIAN, meas.CUBE, meas.CUBE_UNIT,
                                  meas.DISCRETE_CUBE, meas.BALL),
                }
                for k in meas.CATALOG_KINDS
            ]
        }

    @app.post("/measures/density", response_model=mdl.ValueResponse)
    def density(req: mdl.DensityRequest):
        m = _measure(req.measure)
        try:
            return mdl.ValueResponse(value=meas.density(m, np.asarray(req.point)))
        except meas.MeasureError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/measures/sample", response_model=mdl.SampleResponse)
    def sample(req: mdl.SampleRequest):
        m = _measure(req.measure)
        pts = m.sample_batch(_stream(req.rng), req.count)
        return mdl.SampleResponse(points=pts.tolist())

    @app.post("/measures/stats", response_model=mdl.StatsResponse)
    def stats(req: mdl.StatsRequest):
        m = _measure(req.measure)
        try:
            st = meas.stats(m)
        except meas.MeasureError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return mdl.StatsResponse(
            mean=st.mean.tolist(),
            covariance=st.covariance.tolist(),
            sup_density=st.sup_density,
            isotropic_constant=st.isotropic_constant,
        )

    @app.post("/transforms/log-mgf", response_model=mdl.LogMgfResponse)
    def log_mgf(req: mdl.LogMgfRequest):
        m = _measure(req.measure)
        try:
            oracle = LaplaceOracle(m, mode=req.mode, mc_budget=req.mc_budget,
                                   rng=_stream(req.rng))
            val, se, reliable = oracle.log_mgf_with_error(np.asarray(req.u))
        except (meas.MeasureError, TransformError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return mdl.LogMgfResponse(value=val, std_error=se, reliable=reliable)

    @app.post("/transforms/cramer", response_model=mdl.CramerResponse)
    def cramer_endpoint(req: mdl.CramerRequest):
        m = _measure(req.measure)
        oracle = LaplaceOracle(m, rng=_stream(req.rng))
        cv = cramer(oracle, np.asarray(req.v), tol=req.tol)
        return mdl.CramerResponse(
            value=cv.value, maximizer=cv.maximizer.tolist(),
            converged=cv.converged, iterations=cv.iterations, diverged=cv.diverged,
        )

    @app.post("/transforms/bt-radial", response_model=mdl.BtRadialResponse)
    def bt_radial_endpoint(req: mdl.BtRadialRequest):
        m = _measure(req.measure)
        oracle = LaplaceOracle(m, rng=_stream(req.rng))
        res = bt_radial_batch(oracle, np.asarray(req.xi)[None, :], req.t, req.tol)
        return mdl.BtRadialResponse(radius=float(res.radii[0]), unbounded=bool(res.unbounded[0]))

    @app.post("/centroid/support", response_model=mdl.SupportResponse)
    def support(req: mdl.SupportRequest):
        m = _measure(req.measure)
        oracle = CentroidOracle(m, req.t, one_sided=req.one_sided, rng=_stream(req.rng))
        mom = oracle.support_with_error(np.asarray(req.y))
        return mdl.SupportResponse(value=mom.value, std_error=mom.std_error, reliable=mom.reliable)

    @app.post("/ballbodies/radial", response_model=mdl.ValueResponse)
    def kt_radial_endpoint(req: mdl.KtRadialRequest):
        m = _measure(req.measure)
        try:
            oracle = BallBodyOracle(m, req.t)
        except Exception as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return mdl.ValueResponse(value=oracle.radial(np.asarray(req.xi)))

    @app.post("/depth/tail", response_model=mdl.TailResponse)
    def tail(req: mdl.TailRequest):
        m = _measure(req.measure)
        tv = TailEstimator(m, _stream(req.rng)).tail(np.asarray(req.xi), req.threshold)
        return mdl.TailResponse(value=tv.value, std_error=tv.std_error)

    @app.post("/depth/point", response_model=mdl.DepthResponse)
    def depth_point(req: mdl.DepthRequest):
        m = _measure(req.measure)
        opts = DepthOptions(net_size=req.net_size, refine_rounds=req.refine_rounds,
                            pool_size=req.pool_size)
        est = depth_estimate(m, np.asarray(req.point), opts, _stream(req.rng))
        return mdl.DepthResponse(
            value=est.value, kind=est.kind, best_direction=est.best_direction.tolist(),
            std_error=est.std_error, tail_evaluations=est.tail_evaluations,
        )

    @app.post("/depth/expected", response_model=mdl.EstimateResponse)
    def depth_expected(req: mdl.ExpectedDepthRequest):
        m = _measure(req.measure)
        opts = DepthOptions(net_size=req.net_size, pool_size=req.pool_size)
        est = expected_depth(m, _stream(req.rng), req.n_samples, opts)
        return mdl.EstimateResponse(
            value=est.value, std_error=est.std_error,
            ci_low=est.ci_low, ci_high=est.ci_high, n_samples=est.n_samples,
        )

    @app.post("/experiments/run", response_model=mdl.RunRecordModel)
    def run_experiment(req: mdl.ExperimentRequest):
        try:
            cfg = hconfig.parse_config(req.config)
        except hconfig.ConfigError as exc:
            raise HTTPException(status_code=422, detail=exc.errors)
        cfg = hconfig.with_overrides(cfg, seed=req.seed_override, threads=req.threads_override)
        return _record_model(runner.run(cfg))

    @app.post("/experiments/verify", response_model=mdl.VerifyResponse)
    def verify(req: mdl.VerifyRequest):
        try:
            results = acceptance.run_suite(req.suite)
        except KeyError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return mdl.VerifyResponse(
            suite=req.suite,
            passed=all(r.passed for r in results),
            assertions=[mdl.AssertionModel(name=r.name, status=r.status,
                                           value=r.value, detail=r.detail)
                        for r in results],
        )

    return app
