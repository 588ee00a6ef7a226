"""Command-line client for the graphsamp service.

The CLI owns local file I/O and defers all computation to the HTTP service:
by default an in-process instance of the app, or a remote server via
``--server URL`` / ``GRAPHSAMP_SERVER``. Outputs land in the directory named
by ``GRAPHSAMP_OUT`` (default ``./out``) unless an output path is absolute.

Exit codes: 0 success, 1 usage or input error, 2 assertion failure
(a failed selftest check or experiment assertion).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import httpx
import numpy as np

from . import fileio
from .errors import GraphSampError
from .graphs import Graph

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ASSERTION = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; the CLI contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


class ServiceClient:
    """Minimal JSON POST wrapper over in-process or remote transport."""

    def __init__(self, server: str | None):
        if server:
            self._client = httpx.Client(base_url=server, timeout=600.0)
        else:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service.app import create_app

            self._client = TestClient(create_app())

    def post(self, path: str, payload: dict) -> dict:
        response = self._client.post(path, json=payload)
        if response.status_code >= 400:
            try:
                detail = response.json().get("detail")
            except Exception:
                detail = response.text
            raise UsageError(f"{path} failed ({response.status_code}): {detail}")
        return response.json()


def _out_dir() -> Path:
    return Path(os.environ.get("GRAPHSAMP_OUT", "out"))


def _resolve_out(path: str) -> Path:
    candidate = Path(path)
    if not candidate.is_absolute():
        candidate = _out_dir() / candidate
    candidate.parent.mkdir(parents=True, exist_ok=True)
    return candidate


def _write(path: str, content: str) -> Path:
    target = _resolve_out(path)
    target.write_text(content, encoding="utf-8")
    return target


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _graph_payload(path: str) -> dict:
    graph = fileio.graph_from_csv(_read_text(path))
    return {"node_count": graph.node_count, "edges": list(graph.edges)}


def _read_node_set(path: str) -> list[int]:
    text = _read_text(path)
    if path.endswith(".json"):
        data = json.loads(text)
        return [int(v) for v in data["ordered_nodes"]]
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if lines and lines[0].lower() == "node":
        lines = lines[1:]
    return [int(line.split(",")[0]) for line in lines]


def _sampler_spec(args) -> dict:
    if args.mode == "vertex":
        if not args.set_file:
            raise UsageError("--mode vertex needs --set-file")
        return {
            "mode": "vertex",
            "nodes": _read_node_set(args.set_file),
            "prefilter": args.prefilter,
        }
    if args.ratio is None:
        raise UsageError("--mode frequency needs --ratio")
    return {"mode": "frequency", "kernel": args.kernel, "ratio": args.ratio}


def _add_sampler_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--mode", choices=["vertex", "frequency"], required=True)
    parser.add_argument("--set-file", help="node set CSV (header 'node') or select output JSON")
    parser.add_argument("--prefilter", help="kernel applied before vertex sampling")
    parser.add_argument("--ratio", type=int, help="folding ratio for frequency sampling")
    parser.add_argument("--kernel", default="identity", help="sampling kernel for frequency mode")


def _cmd_graph_gen(client: ServiceClient, args) -> int:
    payload = {
        "kind": args.kind,
        "node_count": args.nodes,
        "k_neighbors": args.k_neighbors,
        "cluster_sizes": [int(s) for s in args.clusters.split(",")] if args.clusters else None,
        "p_in": args.p_in,
        "p_out": args.p_out,
        "seed": args.seed,
    }
    data = client.post("/graph/generate", payload)
    g = Graph(data["graph"]["node_count"], tuple(tuple(e) for e in data["graph"]["edges"]))
    target = _write(args.out, fileio.graph_to_csv(g))
    print(f"wrote {g.node_count} nodes, {g.edge_count} edges to {target}")
    return EXIT_OK


def _cmd_sample(client: ServiceClient, args) -> int:
    payload = {
        "graph": _graph_payload(args.graph),
        "operator": args.operator,
        "sampler": _sampler_spec(args),
        "signal": [float(v) for v in fileio.signal_from_csv(_read_text(args.signal))],
    }
    data = client.post("/sample", payload)
    target = _write(args.out, fileio.samples_to_csv(data["samples"]))
    print(f"wrote {len(data['samples'])} samples to {target}")
    return EXIT_OK


def _cmd_select(client: ServiceClient, args) -> int:
    payload = {
        "graph": _graph_payload(args.graph),
        "operator": args.operator,
        "criterion": args.criterion,
        "budget": args.budget,
        "bandwidth": args.bandwidth,
        "seed": args.seed,
    }
    data = client.post("/select", payload)
    target = _write(args.out, json.dumps(data, indent=2) + "\n")
    print(f"selected {data['ordered_nodes']} -> {target}")
    return EXIT_OK


def _cmd_recover(client: ServiceClient, args) -> int:
    payload = {
        "graph": _graph_payload(args.graph),
        "operator": args.operator,
        "model": args.model,
        "sampler": _sampler_spec(args),
        "samples": [float(v) for v in fileio.samples_from_csv(_read_text(args.samples))],
    }
    if args.model.startswith("pwc"):
        if not args.partition_file:
            raise UsageError("--model pwc needs --partition-file")
        payload["partition_cells"] = [list(c) for c in fileio.partition_from_csv(_read_text(args.partition_file))]
        payload["model"] = "pwc"
    data = client.post("/recover", payload)
    recon_target = _write(args.out, fileio.signal_to_csv(data["reconstruction"]))
    report = {
        "residual_norm": data["residual_norm"],
        "ds_condition_held": data["ds_condition_held"],
        "smallest_singular_value": data["smallest_singular_value"],
    }
    report_target = _write(args.report, json.dumps(report, indent=2) + "\n")
    print(f"wrote reconstruction to {recon_target}, report to {report_target}")
    return EXIT_OK


def _cmd_mc_solve(client: ServiceClient, args) -> int:
    observed, observed_mask = fileio.matrix_from_csv(_read_text(args.matrix))
    if args.mask:
        _, mask = fileio.matrix_from_csv(_read_text(args.mask))
    else:
        mask = observed_mask
    payload = {
        "observed": {
            "rows": observed.shape[0],
            "cols": observed.shape[1],
            "entries": [(i, j, float(observed[i, j])) for i, j in mask],
        },
        "mask": [list(e) for e in mask],
        "row_graph": _graph_payload(args.row_graph),
        "col_graph": _graph_payload(args.col_graph),
        "alpha": args.alpha,
        "beta": args.beta,
        "tol": args.tol,
    }
    data = client.post("/mc/solve", payload)
    solution = np.array(data["solution"], dtype=float)
    target = _write(args.out, fileio.matrix_to_csv(solution))
    print(f"solved to relative residual {data['residual']:.3e}, wrote {target}")
    return EXIT_OK


def _cmd_mc_sample(client: ServiceClient, args) -> int:
    payload = {
        "row_graph": _graph_payload(args.row_graph),
        "col_graph": _graph_payload(args.col_graph),
        "strategy": args.strategy,
        "alpha": args.alpha,
        "beta": args.beta,
        "budget": args.budget,
        "row_bandwidth": args.kr,
        "col_bandwidth": args.kc,
    }
    data = client.post("/mc/sample", payload)
    mask = tuple((int(i), int(j)) for i, j in data["mask"])
    rows = 1 + max(i for i, _ in mask)
    cols = 1 + max(j for _, j in mask)
    target = _write(args.out, fileio.mask_to_csv((rows, cols), mask))
    print(f"selected {len(mask)} entries -> {target}")
    return EXIT_OK


def _parse_override(text: str):
    key, sep, raw = text.partition("=")
    if not sep:
        raise UsageError(f"override '{text}' must look like key=value")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def _cmd_experiment(client: ServiceClient, args) -> int:
    overrides = {}
    seed = args.seed
    if args.config:
        config = json.loads(_read_text(args.config))
        overrides.update(config.get("overrides", {}))
        if seed is None:
            seed = config.get("seed")
    overrides.update(dict(_parse_override(item) for item in args.set or []))
    payload = {"experiment": args.id, "seed": seed, "overrides": overrides}
    data = client.post("/experiment", payload)
    report_target = _write(f"{args.id}-report.json", json.dumps(data["report"], indent=2) + "\n")
    written = [str(report_target)]
    for name, rows in data["series"].items():
        if rows:
            written.append(str(_write(f"{args.id}-{name}.csv", fileio.series_to_csv(rows))))
    status = "passed" if data["passed"] else "FAILED"
    print(f"experiment {args.id} (seed {data['seed']}): {status}")
    for key, ok in data["report"].get("assertions", {}).items():
        print(f"  [{'pass' if ok else 'FAIL'}] {key}")
    print("wrote: " + ", ".join(written))
    return EXIT_OK if data["passed"] else EXIT_ASSERTION


def _cmd_selftest(client: ServiceClient, args) -> int:
    data = client.post("/selftest", {})
    for result in data["results"]:
        print(f"[{'pass' if result['passed'] else 'FAIL'}] {result['name']}: {result['detail']}")
    if data["all_passed"]:
        print("selftest: all checks passed")
        return EXIT_OK
    print("selftest: FAILURES above")
    return EXIT_ASSERTION


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("graphsamp.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="graphsamp", description=__doc__)
    parser.add_argument("--server", default=os.environ.get("GRAPHSAMP_SERVER"),
                        help="service URL; default runs the service in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    graph = sub.add_parser("graph", help="graph utilities")
    graph_sub = graph.add_subparsers(dest="graph_command", required=True)
    gen = graph_sub.add_parser("gen", help="generate a synthetic graph")
    gen.add_argument("--kind", required=True,
                     choices=["random-sensor", "community", "path", "cycle", "complete"])
    gen.add_argument("--nodes", type=int)
    gen.add_argument("--k-neighbors", type=int, default=6)
    gen.add_argument("--clusters", help="comma-separated community sizes")
    gen.add_argument("--p-in", type=float, default=0.8)
    gen.add_argument("--p-out", type=float, default=0.01)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default="graph.csv")

    sample = sub.add_parser("sample", help="sample a signal")
    sample.add_argument("--graph", required=True)
    sample.add_argument("--signal", required=True)
    sample.add_argument("--operator", choices=["combinatorial", "normalized"], default="combinatorial")
    _add_sampler_arguments(sample)
    sample.add_argument("--out", default="samples.csv")

    select = sub.add_parser("select", help="choose a sampling set")
    select.add_argument("--graph", required=True)
    select.add_argument("--criterion", required=True,
                        help="eopt | aopt | eopt-reg:gamma | localized:kernel | coherence:K | uniform")
    select.add_argument("--budget", type=int, required=True)
    select.add_argument("--bandwidth", type=int)
    select.add_argument("--seed", type=int, default=0)
    select.add_argument("--operator", choices=["combinatorial", "normalized"], default="combinatorial")
    select.add_argument("--out", default="selection.json")

    recover = sub.add_parser("recover", help="reconstruct a signal from samples")
    recover.add_argument("--graph", required=True)
    recover.add_argument("--model", required=True, help="bandlimited:K | pgs:K:kernel | pwc")
    recover.add_argument("--partition-file", help="partition CSV for --model pwc")
    recover.add_argument("--samples", required=True)
    recover.add_argument("--operator", choices=["combinatorial", "normalized"], default="combinatorial")
    _add_sampler_arguments(recover)
    recover.add_argument("--out", default="reconstruction.csv")
    recover.add_argument("--report", default="recovery-report.json")

    mc = sub.add_parser("mc", help="matrix completion")
    mc_sub = mc.add_subparsers(dest="mc_command", required=True)
    solve = mc_sub.add_parser("solve", help="fill a partially observed matrix")
    solve.add_argument("--matrix", required=True, help="observed entries (triple CSV)")
    solve.add_argument("--mask", help="mask file; defaults to the matrix's own entries")
    solve.add_argument("--row-graph", required=True)
    solve.add_argument("--col-graph", required=True)
    solve.add_argument("--alpha", type=float, default=0.1)
    solve.add_argument("--beta", type=float, default=0.1)
    solve.add_argument("--tol", type=float, default=1e-8)
    solve.add_argument("--out", default="completed.csv")
    mc_sample = mc_sub.add_parser("sample", help="choose entries to observe")
    mc_sample.add_argument("--row-graph", required=True)
    mc_sample.add_argument("--col-graph", required=True)
    mc_sample.add_argument("--strategy", choices=["greedy", "blcross"], required=True)
    mc_sample.add_argument("--alpha", type=float, default=0.1)
    mc_sample.add_argument("--beta", type=float, default=0.1)
    mc_sample.add_argument("--budget", type=int)
    mc_sample.add_argument("--kr", type=int)
    mc_sample.add_argument("--kc", type=int)
    mc_sample.add_argument("--out", default="mask.csv")

    experiment = sub.add_parser("experiment", help="run a canned experiment")
    experiment.add_argument("id", help="experiment id (see README)")
    experiment.add_argument("--seed", type=int, default=None)
    experiment.add_argument("--set", action="append", metavar="KEY=VALUE",
                            help="override an experiment parameter (repeatable)")

    sub.add_parser("selftest", help="run the built-in oracle checks")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "serve":
            return _cmd_serve(args)
        client = ServiceClient(args.server)
        if args.command == "graph":
            return _cmd_graph_gen(client, args)
        if args.command == "sample":
            return _cmd_sample(client, args)
        if args.command == "select":
            return _cmd_select(client, args)
        if args.command == "recover":
            return _cmd_recover(client, args)
        if args.command == "mc":
            if args.mc_command == "solve":
                return _cmd_mc_solve(client, args)
            return _cmd_mc_sample(client, args)
        if args.command == "experiment":
            return _cmd_experiment(client, args)
        if args.command == "selftest":
            return _cmd_selftest(client, args)
        raise UsageError(f"unknown command {args.command}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphSampError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
