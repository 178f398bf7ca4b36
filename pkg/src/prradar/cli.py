"""Command-line client for the simulator service.

Subcommands mirror the service endpoints. By default requests are served by
an in-process instance of the app (no sockets involved); ``--server URL``
targets a running instance instead. Every run echoes its fully-resolved
configuration (defaults included) into a ``<out>.sidecar.json`` file, and
``rerun`` replays a sidecar to reproduce the outputs.

Exit status: 0 success, 1 input/usage error, 2 oracle verdict failure.
All randomness flows from explicit ``--seed`` flags; no environment
variables, wall clock, or entropy-pool seeding anywhere.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import math
import struct
import sys
from pathlib import Path

import httpx

from . import __version__
from .sequences import is_prime

SEQ_CHOICES = ("alltop", "random_phase")


class CliInputError(Exception):
    """Bad flags, bad files, or a 4xx from the service; exits with status 1."""


class ServiceClient:
    """Minimal JSON-over-HTTP client; in-process ASGI when no server given."""

    def __init__(self, server: str | None = None):
        self.server = server.rstrip("/") if server else None

    def post(self, path: str, payload: dict) -> dict:
        if self.server is not None:
            try:
                resp = httpx.post(self.server + path, json=payload, timeout=None)
            except httpx.HTTPError as exc:
                raise CliInputError(f"cannot reach service at {self.server}: {exc}")
        else:
            resp = asyncio.run(self._post_in_process(path, payload))
        if resp.status_code >= 400:
            try:
                detail = resp.json().get("detail", resp.text)
            except ValueError:
                detail = resp.text
            raise CliInputError(f"service rejected request ({resp.status_code}): {detail}")
        return resp.json()

    @staticmethod
    async def _post_in_process(path: str, payload: dict) -> httpx.Response:
        from .service.app import app

        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://prradar.internal", timeout=None
        ) as client:
            return await client.post(path, json=payload)


def _require_prime_for_alltop(kind: str, n: int) -> None:
    if kind == "alltop" and (n < 5 or not is_prime(n)):
        raise CliInputError(f"alltop requires prime N >= 5, got N={n}")


def _write_sidecar(out: Path, command: str, config: dict) -> Path:
    sidecar = Path(str(out) + ".sidecar.json")
    with open(sidecar, "w") as fh:
        json.dump({"command": command, "config": config, "out": str(out)}, fh, indent=2)
        fh.write("\n")
    return sidecar


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------- commands


def cmd_seq(config: dict, client: ServiceClient, out: Path) -> int:
    _require_prime_for_alltop(config["kind"], config["n"])
    seq = client.post(
        "/sequences/generate",
        {"kind": config["kind"], "n": config["n"], "seed": config["seed"]},
    )
    if config["format"] == "csv":
        with open(out, "w", newline="") as fh:
            fh.write("index,re,im\n")
            for i, (re, im) in enumerate(zip(seq["re"], seq["im"])):
                fh.write(f"{i},{_fmt(re)},{_fmt(im)}\n")
    else:
        interleaved = [v for re, im in zip(seq["re"], seq["im"]) for v in (re, im)]
        with open(out, "wb") as fh:
            fh.write(struct.pack(f"<{len(interleaved)}d", *interleaved))
    if config["certify"]:
        cert = client.post("/sequences/certify", {"re": seq["re"], "im": seq["im"]})
        print(json.dumps(cert))
    _write_sidecar(out, "seq", config)
    return 0


def cmd_ambiguity(config: dict, client: ServiceClient, out: Path) -> int:
    _require_prime_for_alltop(config["seq"], config["n"])
    grid = client.post(
        "/ambiguity/grid",
        {
            "f": {"kind": config["seq"], "n": config["n"], "seed": config["seed"]},
            "impl": config["impl"],
        },
    )
    with open(out, "w", newline="") as fh:
        fh.write("tau,omega,abs,re,im\n")
        for tau, (row_re, row_im) in enumerate(zip(grid["re"], grid["im"])):
            for omega, (re, im) in enumerate(zip(row_re, row_im)):
                fh.write(
                    f"{tau},{omega},{_fmt(math.hypot(re, im))},{_fmt(re)},{_fmt(im)}\n"
                )
    _write_sidecar(out, "ambiguity", config)
    return 0


def cmd_detect(config: dict, client: ServiceClient, out: Path) -> int:
    _require_prime_for_alltop(config["seq_kind"], config["n"])
    payload = {
        "n": config["n"],
        "seq_kind": config["seq_kind"],
        "seq_seed": config["seq_seed"],
        "snr_db": config["snr_db"],
        "noise_enabled": config["noise_enabled"],
        "noise_seed": config["noise_seed"],
        "delta": config["delta"],
        "threshold_override": config["threshold_override"],
    }
    if config["truth_file"] is not None:
        try:
            with open(config["truth_file"]) as fh:
                truth = json.load(fh)
        except OSError as exc:
            raise CliInputError(f"cannot read truth file {config['truth_file']}: {exc}")
        if int(truth.get("n", config["n"])) != config["n"]:
            raise CliInputError(
                f"truth file N={truth.get('n')} does not match --n {config['n']}"
            )
        payload["targets"] = truth["targets"]
    else:
        payload["r"] = config["r"]
        payload["channel_seed"] = config["channel_seed"]
    report = client.post("/detect", payload)
    with open(out, "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    print(f"threshold = {report['threshold']:.6g} (delta = {report['delta']})")
    print(
        f"detected {len(report['detected'])} shifts: "
        f"N_t = {report['n_true']}, N_f = {report['n_false']}"
    )
    for diag in report["per_target"]:
        print(
            f"  target (tau={diag['tau']}, omega={diag['omega']}): "
            f"|alpha| = {diag['alpha_abs']:.4f}, |cross| = {diag['cross_abs']:.4f}, "
            f"|noise| = {diag['noise_abs']:.4f}"
        )
    _write_sidecar(out, "detect", config)
    return 0


def cmd_sweep(config: dict, client: ServiceClient, out: Path) -> int:
    for n in config["n_list"]:
        _require_prime_for_alltop(config["seq_kind"], n)
    payload = {k: v for k, v in config.items()}
    result = client.post("/sweep", payload)
    with open(out, "w", newline="") as fh:
        fh.write("n,r,trials,pd,pd_stderr,eft,eft_stderr,ms_per_trial\n")
        for row in result["rows"]:
            fields = [
                str(row["n"]),
                str(row["r"]),
                str(row["trials"]),
                _fmt(row["pd"]),
                "" if row["pd_stderr"] is None else _fmt(row["pd_stderr"]),
                _fmt(row["eft"]),
                "" if row["eft_stderr"] is None else _fmt(row["eft_stderr"]),
                format(row["ms_per_trial"], ".3f"),
            ]
            fh.write(",".join(fields) + "\n")
    _write_sidecar(out, "sweep", config)
    for row in result["rows"]:
        print(
            f"N={row['n']} r={row['r']}: pd = {row['pd']:.4f}, "
            f"eft = {row['eft']:.4f} ({row['trials']} trials)"
        )
    return 0


_LEMMA_PATHS = {
    "slice": "/lemmas/slice",
    "intersect": "/lemmas/intersectivity",
    "orth": "/lemmas/orthogonality",
    "noise": "/lemmas/noise",
}


def cmd_lemmas(config: dict, client: ServiceClient, out: Path | None) -> int:
    which = config["which"]
    if which == "slice":
        payload = {
            "r": config["r"],
            "epsilon": config["epsilon"],
            "samples": config["samples"],
            "seed": config["seed"],
            "first_coord_scale": config["first_coord_scale"],
        }
    elif which == "intersect":
        payload = {
            "r": config["r"],
            "delta": config["delta"],
            "n_atoms": config["atoms"],
            "tables": config["tables"],
            "seed": config["seed"],
        }
        if config["table_file"] is not None:
            try:
                with open(config["table_file"]) as fh:
                    table = json.load(fh)
            except OSError as exc:
                raise CliInputError(f"cannot read table file {config['table_file']}: {exc}")
            payload["atom_weights"] = table["atom_weights"]
            payload["event_table"] = table["event_table"]
    elif which == "orth":
        payload = {
            "r": config["r"],
            "delta": config["delta"],
            "ell": config["ell"],
            "c_bound": config["c_bound"],
            "n": config["n"],
            "samples": config["samples"],
            "seed": config["seed"],
        }
    else:
        payload = {
            "n": config["n"],
            "snr_db": config["snr_db"],
            "epsilon": config["epsilon"],
            "num_vectors": config["num_vectors"],
            "samples": config["samples"],
            "seed": config["seed"],
        }
    report = client.post(_LEMMA_PATHS[which], payload)
    print(json.dumps(report, indent=2))
    if out is not None:
        with open(out, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
        _write_sidecar(out, "lemmas", config)
    return 0 if report["passed"] else 2


def cmd_rerun(args: argparse.Namespace, client: ServiceClient) -> int:
    try:
        with open(args.sidecar) as fh:
            sidecar = json.load(fh)
    except OSError as exc:
        raise CliInputError(f"cannot read sidecar {args.sidecar}: {exc}")
    command = sidecar.get("command")
    config = sidecar.get("config", {})
    out = Path(args.out) if args.out else Path(sidecar.get("out", ""))
    if not str(out):
        raise CliInputError("sidecar has no output path; pass --out")
    if args.threads is not None:
        if command != "sweep":
            raise CliInputError("--threads only applies to sweep reruns")
        config = {**config, "threads": args.threads}
    handlers = {
        "seq": cmd_seq,
        "ambiguity": cmd_ambiguity,
        "detect": cmd_detect,
        "sweep": cmd_sweep,
        "lemmas": cmd_lemmas,
    }
    if command not in handlers:
        raise CliInputError(f"sidecar names unknown command {command!r}")
    return handlers[command](config, client, out)


# ------------------------------------------------------------ arg parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prradar",
        description="Delay-Doppler detection simulator (thin client over the service API)",
    )
    parser.add_argument("--version", action="version", version=f"prradar {__version__}")
    parser.add_argument(
        "--server",
        default=None,
        help="base URL of a running service; default runs the app in-process",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seq", help="generate (and optionally certify) a probing sequence")
    p.add_argument("--n", type=int, required=True, help="sequence length N")
    p.add_argument("--kind", choices=SEQ_CHOICES, default="alltop")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("csv", "bin"), default="csv")
    p.add_argument("--certify", action="store_true", help="print the B certificate as JSON")
    p.add_argument("--out", required=True)

    p = sub.add_parser("ambiguity", help="export the auto-ambiguity grid as CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seq", choices=SEQ_CHOICES, default="alltop")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--impl", choices=("fast", "naive"), default="fast")
    p.add_argument("--out", required=True)

    p = sub.add_parser("detect", help="run one detection on a synthesized echo")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seq", dest="seq_kind", choices=SEQ_CHOICES, default="alltop")
    p.add_argument("--seq-seed", type=int, default=0)
    p.add_argument("--r", type=int, default=1, help="targets in the sampled channel")
    p.add_argument("--channel-seed", type=int, default=0)
    p.add_argument("--truth", default=None, help="channel JSON file instead of sampling")
    p.add_argument("--snr-db", type=float, default=10.0)
    p.add_argument("--noise-off", action="store_true")
    p.add_argument("--noise-seed", type=int, default=0)
    p.add_argument("--delta", type=float, default=0.125)
    p.add_argument("--threshold", type=float, default=None, help="override N^(-1/2+delta)")
    p.add_argument("--out", required=True)

    p = sub.add_parser("sweep", help="Monte Carlo sweep over N at the regime sparsity")
    p.add_argument("--n-list", required=True, help="comma-separated ascending N values")
    p.add_argument("--regime-delta", type=float, default=0.5)
    p.add_argument("--snr-db", type=float, default=10.0)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seq", dest="seq_kind", choices=SEQ_CHOICES, default="alltop")
    p.add_argument("--seq-seed", type=int, default=0)
    p.add_argument("--seed", dest="master_seed", type=int, default=0)
    p.add_argument("--noise-off", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True)

    p = sub.add_parser("lemmas", help="run a concentration oracle")
    p.add_argument("--which", choices=tuple(_LEMMA_PATHS), required=True)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--atoms", type=int, default=64)
    p.add_argument("--tables", type=int, default=10_000)
    p.add_argument("--table-file", default=None, help="JSON with atom_weights/event_table")
    p.add_argument("--ell", type=float, default=1.0)
    p.add_argument("--c", dest="c_bound", type=float, default=1.0)
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--snr-db", type=float, default=0.0)
    p.add_argument("--num-vectors", type=int, default=1000)
    p.add_argument("--biased-control", action="store_true",
                   help="shrink the first coordinate (slice oracle negative control)")
    p.add_argument("--out", default=None)

    p = sub.add_parser("rerun", help="replay a command from its sidecar")
    p.add_argument("sidecar")
    p.add_argument("--out", default=None, help="override the recorded output path")
    p.add_argument("--threads", type=int, default=None, help="override sweep worker count")

    p = sub.add_parser("serve", help="run the HTTP service under uvicorn")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


_LEMMA_DEFAULTS = {
    "slice": {"r": 16, "epsilon": 0.01, "samples": 100_000},
    "intersect": {"r": 9, "delta": 1.0, "samples": None},
    "orth": {"r": 64, "delta": 0.25, "samples": 10_000},
    "noise": {"epsilon": 0.25, "samples": 100},
}


def _lemma_config(args: argparse.Namespace) -> dict:
    defaults = _LEMMA_DEFAULTS[args.which]
    config = {
        "which": args.which,
        "seed": args.seed,
        "r": args.r if args.r is not None else defaults.get("r"),
        "epsilon": args.epsilon if args.epsilon is not None else defaults.get("epsilon"),
        "samples": args.samples if args.samples is not None else defaults.get("samples"),
        "delta": args.delta if args.delta is not None else defaults.get("delta"),
        "atoms": args.atoms,
        "tables": args.tables,
        "table_file": args.table_file,
        "ell": args.ell,
        "c_bound": args.c_bound,
        "n": args.n,
        "snr_db": args.snr_db,
        "num_vectors": args.num_vectors,
        "first_coord_scale": 0.01 if args.biased_control else 1.0,
    }
    return config


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; fold into the input-error status
        return 0 if exc.code in (0, None) else 1

    if args.command == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    client = ServiceClient(server=args.server)
    try:
        if args.command == "rerun":
            return cmd_rerun(args, client)
        if args.command == "seq":
            config = {
                "kind": args.kind,
                "n": args.n,
                "seed": args.seed,
                "format": args.format,
                "certify": args.certify,
            }
            return cmd_seq(config, client, Path(args.out))
        if args.command == "ambiguity":
            config = {
                "seq": args.seq,
                "n": args.n,
                "seed": args.seed,
                "impl": args.impl,
            }
            return cmd_ambiguity(config, client, Path(args.out))
        if args.command == "detect":
            config = {
                "n": args.n,
                "seq_kind": args.seq_kind,
                "seq_seed": args.seq_seed,
                "r": args.r,
                "channel_seed": args.channel_seed,
                "truth_file": args.truth,
                "snr_db": args.snr_db,
                "noise_enabled": not args.noise_off,
                "noise_seed": args.noise_seed,
                "delta": args.delta,
                "threshold_override": args.threshold,
            }
            return cmd_detect(config, client, Path(args.out))
        if args.command == "sweep":
            try:
                n_list = [int(x) for x in args.n_list.split(",") if x.strip()]
            except ValueError:
                raise CliInputError(f"--n-list must be comma-separated integers, got {args.n_list!r}")
            config = {
                "regime_delta": args.regime_delta,
                "n_list": n_list,
                "snr_db": args.snr_db,
                "trials": args.trials,
                "seq_kind": args.seq_kind,
                "master_seed": args.master_seed,
                "noise_enabled": not args.noise_off,
                "threads": args.threads,
                "seq_seed": args.seq_seed,
            }
            return cmd_sweep(config, client, Path(args.out))
        if args.command == "lemmas":
            out = Path(args.out) if args.out else None
            return cmd_lemmas(_lemma_config(args), client, out)
        raise CliInputError(f"unknown command {args.command!r}")
    except CliInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
