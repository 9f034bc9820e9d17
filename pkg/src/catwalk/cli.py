"""Command-line front end.

The CLI is a client of the HTTP service: by default it mounts the app
in-process (no socket, same request/response schemas), or talks to a
running server via --server.  `serve` starts that server.

Exit codes: 0 success, 1 property failure (verify, or stcon
--exit-status on an unreachable pair), 2 bad input, 3 violated internal
invariant.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import random
import sys
from typing import Any

import httpx

from .errors import InputError

EXIT_OK = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_INPUT = 2
EXIT_INVARIANT = 3


class _ServiceError(Exception):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


def _post(args: argparse.Namespace, path: str, payload: dict) -> dict:
    """POST to the service: over HTTP when --server is set, else to an
    in-process mount of the app."""
    server = getattr(args, "server", None)
    if server:
        resp = httpx.post(server.rstrip("/") + path, json=payload, timeout=None)
        return _unwrap(resp.status_code, resp.json())

    async def go() -> tuple[int, dict]:
        from .service import create_app

        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://catwalk.internal", timeout=None
        ) as client:
            resp = await client.post(path, json=payload)
            return resp.status_code, resp.json()

    status, body = asyncio.run(go())
    return _unwrap(status, body)


def _unwrap(status: int, body: dict) -> dict:
    if status == 200:
        return body
    message = body.get("error") or json.dumps(body)
    if status == 422:
        raise _ServiceError(message, EXIT_INPUT)
    raise _ServiceError(message, EXIT_INVARIANT)


def _read_graph_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read graph file {path}: {exc}") from exc


def _resolve_seed(args: argparse.Namespace) -> int:
    if getattr(args, "random_seed", False):
        seed = random.SystemRandom().randrange(1, 1 << 32)
        print(f"seed={seed}", file=sys.stderr)
        return seed
    return args.seed


def _write_metrics(path: str | None, records: list[dict]) -> None:
    if not path:
        return
    with open(path, "a", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record) + "\n")


def _add_common(p: argparse.ArgumentParser, graph_required: bool = True) -> None:
    p.add_argument("--graph", required=graph_required, help="graph file ('n m' header, 'u v' lines)")
    p.add_argument("--k", type=int, default=1, help="residue partition parameter")
    p.add_argument("--seed", type=int, default=0, help="tape init seed; 0 = all-zeros tape")
    p.add_argument("--random-seed", action="store_true", help="draw a fresh seed and echo it")
    p.add_argument("--metrics", help="append line-delimited JSON metrics here")
    p.add_argument("--strict-paper", action="store_true", help="use the full 2n-prime modulus set")
    p.add_argument("--packed", action="store_true", help="store registers in the packed single-integer form")
    p.add_argument("--parallel-moduli", action="store_true", help="one tape and thread per modulus")
    p.add_argument("--server", help="base URL of a running service (default: in-process)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catwalk",
        description="Exact walk counting and reachability on a verified catalytic tape.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count-walks", help="exact number of length-l walks from source to target")
    _add_common(p)
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--trace", action="store_true", help="stream per-update engine trace to stderr")
    p.add_argument("--witness", help="write the moduli/residues/value record here as JSON")

    p = sub.add_parser("stcon", help="decide directed reachability from source to target")
    _add_common(p)
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument(
        "--exit-status",
        action="store_true",
        help="exit 0 if reachable, 1 if not, instead of always 0",
    )

    p = sub.add_parser("verify", help="run the property-check suite")
    _add_common(p, graph_required=False)
    p.add_argument("--seeds", type=int, default=10, help="tape initializations per configuration")
    p.add_argument("--fault", choices=["skip-uncompute"], help="inject a deliberate bug")
    p.add_argument("--base-seed", type=int, default=20240, help="replay seed for the generated cases")

    p = sub.add_parser("bench", help="metrics over an (n, k) grid with formula assertions")
    p.add_argument("--sizes", default="4,8,16", help="comma-separated vertex counts")
    p.add_argument("--ks", default="1,2,4", help="comma-separated partition parameters")
    p.add_argument("--q", type=int, default=11, help="modulus for the metered runs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--metrics", help="append line-delimited JSON metrics here")
    p.add_argument("--server", help="base URL of a running service (default: in-process)")

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _graph_payload(args: argparse.Namespace) -> dict[str, Any]:
    return {"graph_text": _read_graph_text(args.graph)}


def cmd_count_walks(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args)
    payload = {
        "graph": _graph_payload(args),
        "source": args.source,
        "target": args.target,
        "length": args.length,
        "k": args.k,
        "seed": seed,
        "strict_paper": args.strict_paper,
        "packed": args.packed,
        "parallel_moduli": args.parallel_moduli,
        "trace": args.trace,
    }
    body = _post(args, "/count-walks", payload)
    for line in body.get("trace") or []:
        print(line, file=sys.stderr)
    print(body["count"])
    if args.witness:
        with open(args.witness, "w", encoding="utf-8") as fh:
            json.dump(body["witness"], fh)
            fh.write("\n")
    _write_metrics(args.metrics, [body["metrics"]])
    return EXIT_OK


def cmd_stcon(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args)
    payload = {
        "graph": _graph_payload(args),
        "source": args.source,
        "target": args.target,
        "k": args.k,
        "seed": seed,
        "strict_paper": args.strict_paper,
        "packed": args.packed,
        "parallel_moduli": args.parallel_moduli,
    }
    body = _post(args, "/stcon", payload)
    print(body["verdict"])
    _write_metrics(args.metrics, [body["metrics"]])
    if args.exit_status and not body["reachable"]:
        return EXIT_PROPERTY_FAILURE
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    payload: dict[str, Any] = {
        "seeds": args.seeds,
        "fault": args.fault,
        "packed": args.packed,
        "base_seed": args.base_seed,
    }
    if args.graph:
        payload["graph"] = _graph_payload(args)
    body = _post(args, "/verify", payload)
    for check in body["checks"]:
        mark = "PASS" if check["passed"] else "FAIL"
        print(f"{mark} {check['name']} ({check['cases']} cases): {check['detail']}")
    if body["passed"]:
        print("all checks passed")
        return EXIT_OK
    print("verification FAILED", file=sys.stderr)
    return EXIT_PROPERTY_FAILURE


def cmd_bench(args: argparse.Namespace) -> int:
    sizes = [int(x) for x in args.sizes.split(",") if x]
    ks = [int(x) for x in args.ks.split(",") if x]
    body = _post(args, "/bench", {"sizes": sizes, "ks": ks, "q": args.q, "seed": args.seed})
    records = body["records"]
    header = f"{'n':>4} {'k':>4} {'len':>4} {'catalyst':>9} {'peak_ws':>8} {'depth':>6} {'runs':>5} {'wall_s':>8}"
    print(header)
    for r in records:
        print(
            f"{r['n']:>4} {r['k']:>4} {r['length']:>4} {r['catalyst_bits']:>9} "
            f"{r['peak_workspace_bits']:>8} {r['peak_stack_depth']:>6} {r['runs']:>5} "
            f"{r['wall_time_s']:>8.4f}"
        )
    _write_metrics(args.metrics, records)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "count-walks": cmd_count_walks,
        "stcon": cmd_stcon,
        "verify": cmd_verify,
        "bench": cmd_bench,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except _ServiceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except httpx.HTTPError as exc:
        print(f"error: cannot reach server: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
