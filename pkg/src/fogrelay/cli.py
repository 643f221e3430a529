"""Command-line client for the relay toolkit service.

The CLI is a thin client: it loads and validates the config file, sends
one request to the HTTP service (an in-process instance by default, or a
remote server via --server), and writes the returned tables as CSV files.

Exit codes: 0 success, 1 config/validation error, 2 runtime/numerical or
I/O error.
"""

import argparse
import asyncio
import sys

import httpx

from .config import ConfigError, ExperimentConfig, config_to_dict, load_config
from .csvio import write_table
from .experiments import TableData

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class RemoteClient:
    """POSTs against a running server."""

    def __init__(self, base_url: str):
        self._client = httpx.Client(base_url=base_url, timeout=3600.0)

    def post(self, path: str, payload: dict) -> httpx.Response:
        return self._client.post(path, json=payload)

    def close(self) -> None:
        self._client.close()


class InProcessClient:
    """Drives the service app directly, no socket (httpx ASGI transport)."""

    def __init__(self):
        from .service.app import app

        self._app = app

    def post(self, path: str, payload: dict) -> httpx.Response:
        async def call():
            transport = httpx.ASGITransport(app=self._app)
            async with httpx.AsyncClient(
                transport=transport, base_url="http://fogrelay.local"
            ) as client:
                return await client.post(path, json=payload)

        return asyncio.run(call())

    def close(self) -> None:
        pass


def _client(server: str | None):
    return RemoteClient(server) if server else InProcessClient()


def _load(args) -> dict:
    if args.config:
        cfg = load_config(args.config)
    else:
        cfg = ExperimentConfig()
    payload = config_to_dict(cfg)
    if args.seed is not None:
        payload["seed"] = args.seed
    if args.out is not None:
        payload["output_dir"] = args.out
    return payload


def _post(client, path: str, payload: dict) -> dict:
    try:
        resp = client.post(path, payload)
    except httpx.HTTPError as exc:
        raise CliError(f"request failed: {exc}", EXIT_RUNTIME) from exc
    if resp.status_code >= 500:
        raise CliError(f"server error: {resp.json().get('detail', resp.text)}", EXIT_RUNTIME)
    if resp.status_code >= 400:
        detail = resp.json().get("detail", resp.text)
        raise CliError(f"invalid request: {detail}", EXIT_CONFIG)
    return resp.json()


def _write_tables(out_dir: str, *tables: dict) -> list:
    paths = []
    for t in tables:
        table = TableData(name=t["name"], header=tuple(t["header"]),
                          rows=tuple(tuple(r) for r in t["rows"]))
        try:
            paths.append(write_table(out_dir, table))
        except OSError as exc:
            raise CliError(f"cannot write output: {exc}", EXIT_RUNTIME) from exc
    return paths


def cmd_optimize(client, payload, args) -> None:
    body = {"config": payload, "scheme": args.scheme}
    data = _post(client, "/optimize", body)
    out_dir = payload.get("output_dir", ".")
    paths = _write_tables(out_dir, data["trajectory"], data["summary"])
    print(
        f"{args.scheme}: final_outage={data['final_outage']:.6e} "
        f"theta={data['theta']} improvement_vs_flfp={data['improvement_vs_flfp_pct']:.2f}%"
    )
    for p in paths:
        print(f"wrote {p}")


def cmd_sweep(client, payload, args) -> None:
    body = {"config": payload, "variable": args.var}
    data = _post(client, "/sweep", body)
    out_dir = payload.get("output_dir", ".")
    paths = _write_tables(out_dir, data["table"])
    print(f"sweep {args.var}: {len(data['table']['rows'])} rows")
    for p in paths:
        print(f"wrote {p}")


def cmd_brute_force(client, payload, args) -> None:
    data = _post(client, "/brute-force", {"config": payload})
    out_dir = payload.get("output_dir", ".")
    paths = _write_tables(out_dir, data["table"])
    print(f"brute-force minimum p_out={data['p_out']:.6e}")
    for p in paths:
        print(f"wrote {p}")


def cmd_select(client, payload, args) -> None:
    data = _post(client, "/select", {"config": payload})
    out_dir = payload.get("output_dir", ".")
    paths = _write_tables(
        out_dir,
        data["deployment"],
        data["convergence"],
        data["phases"],
        data["fairness"],
    )
    print(f"selection over {len(data['phases']['rows'])} phases, "
          f"jain_index={data['jain_index']:.4f}")
    for p in paths:
        print(f"wrote {p}")


def cmd_montecarlo(client, payload, args) -> None:
    data = _post(client, "/montecarlo", {"config": payload})
    out_dir = payload.get("output_dir", ".")
    paths = _write_tables(out_dir, data["table"])
    print(f"montecarlo: {len(data['table']['rows'])} scenarios")
    for p in paths:
        print(f"wrote {p}")


def cmd_serve(args) -> None:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fogrelay",
        description="Two-hop amplify-and-forward relay outage toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="path to a key=value config file")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--out", help="override the output directory")
        p.add_argument("--server", help="base URL of a running service "
                                        "(default: run in-process)")

    p = sub.add_parser("optimize", help="run one design scheme over the slot budget")
    p.add_argument("--scheme", required=True, choices=["flfp", "olfp", "opfl", "olop"])
    common(p)
    p.set_defaults(fn=cmd_optimize)

    p = sub.add_parser("sweep", help="sweep relay power or endpoint separation")
    p.add_argument("--var", required=True, choices=["power", "separation"])
    common(p)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("brute-force", help="exhaustive position/power grid search")
    common(p)
    p.set_defaults(fn=cmd_brute_force)

    p = sub.add_parser("select", help="relay deployment + selection protocol")
    common(p)
    p.set_defaults(fn=cmd_select)

    p = sub.add_parser("montecarlo", help="estimator comparison across scenarios")
    common(p)
    p.set_defaults(fn=cmd_montecarlo)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=None)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        cmd_serve(args)
        return EXIT_OK
    try:
        payload = _load(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    client = _client(args.server)
    try:
        args.fn(client, payload, args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    finally:
        client.close()
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
