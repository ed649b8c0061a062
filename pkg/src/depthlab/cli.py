"""Command-line interface.

`depthlab run` and `depthlab verify` are thin clients of the HTTP API: by
default they mount the FastAPI app in-process (no server needed, identical
code path), and `--server URL` points them at a remote `depthlab serve`
instance instead. Artifacts (CSV/JSON/SVG) are always written locally from
the returned run record.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import httpx

from .harness import config as hconfig
from .harness.emit import emit
from .harness.records import AssertionResult, MetricTable, RunRecord


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=None)
    # in-process client over the ASGI app: same code path as a real server
    import warnings

    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message=".*httpx.*", category=UserWarning)
        from starlette.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app(), base_url="http://depthlab.local")


def _record_from_payload(data: dict) -> RunRecord:
    return RunRecord(
        experiment=data["experiment"],
        config_hash=data["config_hash"],
        version=data["version"],
        seed=data["seed"],
        started_at=data["started_at"],
        finished_at=data["finished_at"],
        metrics=[MetricTable(t["name"], t["columns"], t["rows"], t.get("plot"))
                 for t in data["metrics"]],
        assertions=[AssertionResult(a["name"], a["status"], a["value"], a.get("detail", ""))
                    for a in data["assertions"]],
        partial=data["partial"],
    )


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    # validate locally first so config errors print with context
    try:
        cfg = hconfig.parse_config(text)
    except hconfig.ConfigError as exc:
        for err in exc.errors:
            print(f"config error: {err}", file=sys.stderr)
        return 2
    threads = args.threads
    if threads is None:
        env = os.environ.get("DEPTHLAB_THREADS")
        threads = int(env) if env else None

    with _client(args.server) as client:
        resp = client.post("/experiments/run", json={
            "config": text,
            "seed_override": args.seed,
            "threads_override": threads,
        })
        if resp.status_code != 200:
            print(f"error: server returned {resp.status_code}: {resp.text}", file=sys.stderr)
            return 2
        record = _record_from_payload(resp.json())

    out_dir = args.out or cfg.out
    formats = [f.strip() for f in args.formats.split(",") if f.strip()]
    paths = emit(record, out_dir, formats)
    for a in record.assertions:
        print(f"[{a.status.upper():7s}] {a.name}  value={a.value:.6g}  {a.detail}")
    for p in paths:
        print(f"wrote {p}")
    if record.partial:
        print("warning: partial run (see experiment-error assertion)", file=sys.stderr)
    return 0 if record.all_passed and not record.partial else 1


def _cmd_verify(args: argparse.Namespace) -> int:
    with _client(args.server) as client:
        resp = client.post("/experiments/verify", json={"suite": args.suite})
        if resp.status_code != 200:
            print(f"error: server returned {resp.status_code}: {resp.text}", file=sys.stderr)
            return 2
        data = resp.json()
    for a in data["assertions"]:
        print(f"[{a['status'].upper():7s}] {a['name']}  value={a['value']:.6g}  {a['detail']}")
    print(f"suite {data['suite']}: {'PASS' if data['passed'] else 'FAIL'}")
    return 0 if data["passed"] else 1


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="depthlab",
                                     description="depth-of-log-concave-measures laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment from a config file")
    p_run.add_argument("config", help="path to the config file")
    p_run.add_argument("--out", default=None, help="output directory (overrides config)")
    p_run.add_argument("--threads", type=int, default=None,
                       help="worker threads (fallback: DEPTHLAB_THREADS)")
    p_run.add_argument("--seed", type=int, default=None, help="seed override")
    p_run.add_argument("--server", default=None, help="remote depthlab server URL")
    p_run.add_argument("--formats", default="csv,json,svg", help="comma list: csv,json,svg")
    p_run.set_defaults(func=_cmd_run)

    p_verify = sub.add_parser("verify", help="run an acceptance suite")
    p_verify.add_argument("suite", help="suite name: acceptance-1..11, quick, all")
    p_verify.add_argument("--server", default=None, help="remote depthlab server URL")
    p_verify.set_defaults(func=_cmd_verify)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=_cmd_serve)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
