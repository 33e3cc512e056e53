"""Command-line front end, a thin client of the laboratory service.

By default requests are routed through the FastAPI application in-process
(no server needed); ``--url`` targets a running instance instead, and
``bsl serve`` starts one.  Experiment descriptors go in as JSON, reports
come out as JSON, a text table, or CSV.

Commands
--------
bsl norm --sigma 1.0 --theta 0.0
bsl classify --config pair.json
bsl decay --sigma 1.0 --theta 0.0 --n-max 60 --direction adjoint
bsl verify-paper [--config overrides.json] [--seed 0xB705] [--trunc 256]
bsl serve [--host 127.0.0.1] [--port 8000]

Exit codes: 0 success (and every battery check passed), 1 battery
failures, 2 usage/schema/domain errors.  The environment variable
BSL_TRUNC overrides the default truncation order.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import httpx

from . import __version__
from .battery import DEFAULT_SEED
from .hardy import DEFAULT_TRUNC

_FORMATS = ("json", "text", "csv")


def _parse_seed(text: str) -> int:
    return int(text, 16) if text.lower().startswith("0x") else int(text, 0)


def _default_trunc() -> int:
    env = os.environ.get("BSL_TRUNC")
    if env is None:
        return DEFAULT_TRUNC
    try:
        return int(env)
    except ValueError as exc:
        raise SystemExit(f"error: BSL_TRUNC is not an integer: {env!r}") from exc


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        _fail(f"cannot read config {path}: {exc}")


def _fail(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)
    raise SystemExit(2)


def _post(args, endpoint: str, payload: dict) -> dict:
    if args.url:
        with httpx.Client(base_url=args.url, timeout=600.0) as client:
            response = client.post(endpoint, json=payload)
    else:
        import asyncio

        from .service.app import app  # deferred: keeps --help fast

        async def _run() -> httpx.Response:
            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(
                transport=transport, base_url="http://lab", timeout=None
            ) as client:
                return await client.post(endpoint, json=payload)

        response = asyncio.run(_run())
    if response.status_code in (400, 422):
        detail = response.json().get("detail", response.text)
        if isinstance(detail, list):  # pydantic validation report
            detail = "; ".join(
                ".".join(str(p) for p in err.get("loc", ())) + ": " + err.get("msg", "")
                for err in detail
            )
        _fail(f"{endpoint} rejected the request: {detail}")
    response.raise_for_status()
    return response.json()


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _to_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def _kv_csv(payload: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key in sorted(payload):
        writer.writerow([key, payload[key]])
    return buf.getvalue().rstrip("\n")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _cmd_norm(args) -> int:
    if args.config:
        payload = _load_json(args.config)
    else:
        if args.sigma is None:
            _fail("norm needs --sigma (or --config)")
        payload = {
            "params": {"sigma": args.sigma, "theta": args.theta},
            "trunc": min(args.trunc, 1024),
        }
    data = _post(args, "/norm", payload)
    if args.format == "json":
        _emit(args, _to_json(data))
    elif args.format == "csv":
        _emit(args, _kv_csv(data))
    else:
        _emit(
            args,
            "operator norm\n"
            f"  closed form     {data['formula']:.12f}\n"
            f"  truncated svd   {data['truncated_singular_value']:.12f}\n"
            f"  gap             {data['gap']:.3e}\n"
            f"  power iteration {data['iterations']} steps, "
            f"residual {data['residual']:.3e}",
        )
    return 0


def _cmd_classify(args) -> int:
    if not args.config:
        _fail("classify needs --config with the pair descriptor")
    payload = _load_json(args.config)
    payload.setdefault("trunc", args.trunc)
    if args.pair_id:
        payload["pair_id"] = args.pair_id
    data = _post(args, "/classify", payload)
    if args.format == "json":
        _emit(args, _to_json(data))
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["pair_id", "equivalent", "reason", "ratio_residual"])
        writer.writerow(
            [data.get("pair_id") or "", data["equivalent"], data["reason"],
             repr(data["ratio_residual"])]
        )
        _emit(args, buf.getvalue().rstrip("\n"))
    else:
        verdict = "equivalent" if data["equivalent"] else "not equivalent"
        _emit(
            args,
            f"{verdict} ({data['reason']}), ratio residual "
            f"{data['ratio_residual']:.3e}, angle gap {data['theta_gap']:.3e}",
        )
    return 0


def _cmd_decay(args) -> int:
    if args.config:
        payload = _load_json(args.config)
    else:
        if args.sigma is None:
            _fail("decay needs --sigma (or --config)")
        if args.n_max >= args.trunc:
            _fail(f"n_max {args.n_max} must stay below the truncation {args.trunc}")
        payload = {
            "params": {"sigma": args.sigma, "theta": args.theta},
            "direction": args.direction,
            "n_max": args.n_max,
            "trunc": args.trunc,
        }
    data = _post(args, "/decay", payload)
    if args.format == "json":
        _emit(args, _to_json(data))
        return 0
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "measured", "bound"])
    for row in data["rows"]:
        writer.writerow([row["n"], repr(row["measured"]), repr(row["bound"])])
    table = buf.getvalue().rstrip("\n")
    if args.format == "csv":
        _emit(args, table)
    else:
        ok = "within" if data["satisfied"] else "VIOLATES"
        _emit(args, table + f"\n# decay {ok} the closed-form bound")
    return 0


def _cmd_verify(args) -> int:
    payload = {
        "config": _load_json(args.config) if args.config else {},
        "seed": args.seed,
        "trunc": args.trunc,
    }
    data = _post(args, "/verify-paper", payload)
    if args.format == "json":
        _emit(args, _to_json(data))
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["name", "expected", "computed", "tolerance", "pass"])
        for c in data["checks"]:
            writer.writerow(
                [c["name"], repr(c["expected"]), repr(c["computed"]),
                 repr(c["tolerance"]), c["pass"]]
            )
        _emit(args, buf.getvalue().rstrip("\n"))
    else:
        from .battery import report_as_text

        _emit(args, report_as_text(data))
    return 0 if data["all_pass"] else 1


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bsl",
        description="Brownian shift laboratory: experiment descriptors in, reports out.",
    )
    parser.add_argument("--version", action="version", version=f"bsl {__version__}")
    parser.add_argument("--url", default=None,
                        help="target a running service instead of in-process")
    parser.add_argument("--seed", type=_parse_seed, default=DEFAULT_SEED,
                        metavar="HEX", help="RNG seed for randomized sweeps")
    parser.add_argument("--trunc", type=int, default=_default_trunc(), metavar="N",
                        help="truncation order (env BSL_TRUNC overrides the default)")
    parser.add_argument("--out", default=None, metavar="PATH",
                        help="write the report to a file instead of stdout")
    parser.add_argument("--format", choices=_FORMATS, default="text")

    sub = parser.add_subparsers(dest="command", required=True)

    p_norm = sub.add_parser("norm", help="closed-form norm against the truncation")
    p_norm.add_argument("--sigma", type=float, default=None)
    p_norm.add_argument("--theta", type=float, default=0.0)
    p_norm.add_argument("--config", default=None, metavar="PATH")
    p_norm.set_defaults(func=_cmd_norm)

    p_cls = sub.add_parser("classify", help="unitary equivalence of a subspace pair")
    p_cls.add_argument("--config", default=None, metavar="PATH",
                       help="JSON pair descriptor (spec1/spec2, optional params)")
    p_cls.add_argument("--pair-id", default=None)
    p_cls.set_defaults(func=_cmd_classify)

    p_dec = sub.add_parser("decay", help="normalized power decay report")
    p_dec.add_argument("--sigma", type=float, default=None)
    p_dec.add_argument("--theta", type=float, default=0.0)
    p_dec.add_argument("--direction", choices=("forward", "adjoint"),
                       default="forward")
    p_dec.add_argument("--n-max", type=int, default=60)
    p_dec.add_argument("--config", default=None, metavar="PATH")
    p_dec.set_defaults(func=_cmd_decay)

    p_ver = sub.add_parser("verify-paper", help="run the full verification battery")
    p_ver.add_argument("--config", default=None, metavar="PATH",
                       help="JSON overrides for the battery configuration")
    p_ver.set_defaults(func=_cmd_verify)

    p_srv = sub.add_parser("serve", help="start the HTTP service")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8000)
    p_srv.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except httpx.HTTPError as exc:
        print(f"error: transport failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
