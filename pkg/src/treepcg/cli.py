"""Command-line driver: generation, stretch reports, solving, verification
sweeps, and iteration-scaling studies.

Reports are deterministic: identical spec + seed produce byte-identical
CSV/JSON output.  The exit code of ``verify`` is the single source of truth
for automated acceptance runs.  Config precedence is CLI flags > config file
> defaults; the config file is flat ``key = value`` text.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .graphs import (
    DEFAULT_DENSE_CAP,
    GraphError,
    dense_laplacian,
    generate,
    is_connected,
    parse_generator_spec,
    read_edge_list,
    read_vector,
    write_edge_list,
    write_vector,
)
from .pcg import PcgConfig, exact_spectrum_bound, pcg_solve, stretch_only_bound, _snapped_root
from .spectral import generalized_spectrum, tail_count
from .treesolver import factor
from .trees import TreeError, low_stretch_heuristic_tree, max_weight_spanning_tree, stretch_report

TREE_METHODS = ("maxw", "akpw")
CHECKS = ("trace", "tails", "pcg-bound", "all")


class CliError(ValueError):
    """Bad command-line or config input."""


@dataclass
class ExperimentSpec:
    generator: str
    tree_method: str = "maxw"
    epsilon: float = 1e-8
    seeds: list = field(default_factory=lambda: [0])
    checks: str = "all"
    out: str | None = None
    dense_cap: int = DEFAULT_DENSE_CAP

    def __post_init__(self):
        if self.tree_method not in TREE_METHODS:
            raise CliError(f"unknown tree method {self.tree_method!r} (want maxw|akpw)")
        if self.checks not in CHECKS:
            raise CliError(f"unknown checks selector {self.checks!r}")
        if not self.seeds:
            raise CliError("at least one seed is required")
        if not (0.0 < self.epsilon < 1.0):
            raise CliError(f"epsilon must lie in (0, 1), got {self.epsilon}")


def build_tree(g, method: str, seed: int):
    if method == "maxw":
        return max_weight_spanning_tree(g)
    if method == "akpw":
        return low_stretch_heuristic_tree(g, seed)
    raise CliError(f"unknown tree method {method!r}")


# ---------------------------------------------------------------------------
# verify


def run_verify(spec: ExperimentSpec) -> dict:
    """Run the full oracle check suite over every seed; returns the report."""
    gen = parse_generator_spec(spec.generator)
    records = []
    failures = 0
    for seed in spec.seeds:
        g = generate(gen, seed)
        t = build_tree(g, spec.tree_method, seed)
        rep = stretch_report(g, t)
        record = {"seed": seed, "n": g.n, "m": g.m, "stretch_total": rep.total}
        ok = True
        s = generalized_spectrum(g, t, cap=spec.dense_cap)
        if spec.checks in ("trace", "all"):
            diff = abs(s.trace - rep.total)
            tol = 1e-9 * max(1.0, rep.total)
            record["trace"] = s.trace
            record["trace_abs_diff"] = diff
            record["trace_ok"] = diff <= tol
            ok = ok and record["trace_ok"]
        if spec.checks in ("tails", "all"):
            grid = np.logspace(0.0, math.log10(2.0 * s.lambda_max), 20)
            violations = sum(
                1 for thr in grid if tail_count(s, float(thr)) > rep.total / float(thr)
            )
            record["tail_violations"] = violations
            record["lambda_min"] = s.lambda_min
            record["lambda_max"] = s.lambda_max
            record["tails_ok"] = violations == 0
            ok = ok and record["tails_ok"]
        if spec.checks in ("pcg-bound", "all"):
            rng = np.random.default_rng([seed, 0xB0])
            b = rng.standard_normal(g.n)
            b -= b.mean()
            x_true = np.linalg.pinv(dense_laplacian(g, cap=spec.dense_cap)) @ b
            f = factor(t)
            cfg = PcgConfig(
                epsilon=spec.epsilon,
                max_iterations=max(4 * g.n, 100),
                record_history=True,
                reorthogonalize=True,
            )
            out = pcg_solve(g, f, b, cfg, x_true=x_true)
            observed = _first_accurate_iteration(out, spec.epsilon)
            exact = exact_spectrum_bound(s, rep.total, spec.epsilon)
            st_only = stretch_only_bound(rep.total, spec.epsilon)
            record["iterations_observed"] = observed
            record["bound_exact_spectrum"] = exact.k_bound
            record["bound_stretch_only"] = st_only.k_bound
            record["pcg_ok"] = (
                observed is not None
                and observed <= exact.k_bound
                and observed <= st_only.k_bound
            )
            ok = ok and record["pcg_ok"]
        record["ok"] = ok
        if not ok:
            failures += 1
        records.append(record)
    return {
        "spec": {
            "generator": str(gen),
            "tree_method": spec.tree_method,
            "epsilon": spec.epsilon,
            "seeds": list(spec.seeds),
            "checks": spec.checks,
            "dense_cap": spec.dense_cap,
        },
        "records": records,
        "failures": failures,
    }


def _first_accurate_iteration(outcome, epsilon):
    if outcome.a_norm_history is None:
        return None
    for k, err in enumerate(outcome.a_norm_history):
        if err <= epsilon:
            return k
    return None


# ---------------------------------------------------------------------------
# scaling


def run_scaling(generators, tree_method: str, epsilon: float, seeds) -> list:
    """Iterations-vs-stretch sweep; returns CSV rows sorted by m then seed."""
    rows = []
    for gen_text in generators:
        gen = parse_generator_spec(gen_text)
        for seed in seeds:
            g = generate(gen, seed)
            t = build_tree(g, tree_method, seed)
            rep = stretch_report(g, t)
            f = factor(t)
            rng = np.random.default_rng([seed, 0xB0])
            b = rng.standard_normal(g.n)
            b -= b.mean()
            cfg = PcgConfig(epsilon=epsilon, max_iterations=max(4 * g.n, 100))
            out = pcg_solve(g, f, b, cfg)
            st_only = stretch_only_bound(rep.total, epsilon)
            rows.append(
                {
                    "m": g.m,
                    "seed": seed,
                    "stretch_total": rep.total,
                    "stretch_cbrt": _snapped_root(rep.total, 1.0 / 3.0),
                    "iterations": out.iterations,
                    "k_bound": st_only.k_bound,
                }
            )
    rows.sort(key=lambda r: (r["m"], r["seed"]))
    return rows


def write_scaling_csv(rows, path) -> None:
    with open(path, "w") as fh:
        fh.write("m,seed,stretch_total,stretch_cbrt,iterations,k_bound\n")
        for r in rows:
            fh.write(
                f"{r['m']},{r['seed']},{r['stretch_total']!r},"
                f"{r['stretch_cbrt']!r},{r['iterations']},{r['k_bound']}\n"
            )


# ---------------------------------------------------------------------------
# solve


def run_solve(graph_path, b_path, tree_method: str, epsilon: float, seed: int = 0) -> tuple:
    g = read_edge_list(graph_path)
    if not is_connected(g):
        raise CliError("graph must be connected")
    b = read_vector(b_path)
    if len(b) != g.n:
        raise CliError(f"right-hand side has {len(b)} entries but graph has {g.n} vertices")
    t = build_tree(g, tree_method, seed)
    rep = stretch_report(g, t)
    f = factor(t)
    cfg = PcgConfig(epsilon=epsilon, max_iterations=max(4 * g.n, 100))
    out = pcg_solve(g, f, b, cfg)
    sidecar = {
        "iterations": out.iterations,
        "converged": out.converged,
        "final_residual": out.final_residual,
        "stretch_total": rep.total,
        "centered_input": out.centered_input,
        "epsilon": epsilon,
        "tree_method": tree_method,
    }
    return out.x, sidecar


# ---------------------------------------------------------------------------
# argument plumbing


def _write_json(obj, path):
    if path is None:
        json.dump(obj, sys.stdout, sort_keys=True, indent=2)
        sys.stdout.write("\n")
    else:
        with open(path, "w") as fh:
            json.dump(obj, fh, sort_keys=True, indent=2)
            fh.write("\n")


def _read_config(path) -> dict:
    cfg = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise CliError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            k, v = line.split("=", 1)
            cfg[k.strip().replace("-", "_")] = v.strip()
    return cfg


def _parse_seeds(text) -> list:
    try:
        return [int(s) for s in str(text).split(",") if s != ""]
    except ValueError as exc:
        raise CliError(f"bad seeds list {text!r}") from exc


_DEFAULTS = {
    "tree": "maxw",
    "eps": 1e-8,
    "seeds": "0",
    "dense_cap": DEFAULT_DENSE_CAP,
    "checks": "all",
}


def _resolve(args, key, cast=str):
    value = getattr(args, key.replace("-", "_"), None)
    if value is not None:
        return value
    if args.config:
        cfg = _read_config(args.config)
        if key.replace("-", "_") in cfg:
            return cast(cfg[key.replace("-", "_")])
    return _DEFAULTS.get(key.replace("-", "_"))


def _add_common(p):
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--tree", choices=TREE_METHODS, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--seeds", default=None, help="comma-separated seed list")
    p.add_argument("--out", default=None)
    p.add_argument("--dense-cap", type=int, default=None)


def make_parser():
    parser = argparse.ArgumentParser(
        prog="treepcg",
        description="Spanning-tree preconditioned Laplacian solver and verification harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph and write its edge list")
    p.add_argument("--gen", required=True, help='e.g. "grid:30x30:unit"')
    _add_common(p)

    p = sub.add_parser("stretch", help="build a tree and report its stretch")
    p.add_argument("--gen", default=None)
    p.add_argument("--graph", default=None)
    _add_common(p)

    p = sub.add_parser("solve", help="solve L_G x = b from files")
    p.add_argument("--graph", required=True)
    p.add_argument("--b", required=True, dest="b_path")
    _add_common(p)

    p = sub.add_parser("verify", help="run oracle checks over seeds (exit 1 on any failure)")
    p.add_argument("--gen", required=True)
    p.add_argument("--checks", choices=CHECKS, default=None)
    _add_common(p)

    p = sub.add_parser("scaling", help="iterations-vs-stretch sweep, CSV output")
    p.add_argument("--gen", required=True, action="append",
                   help="repeatable; one generator spec per size")
    _add_common(p)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        tree_method = _resolve(args, "tree")
        epsilon = float(_resolve(args, "eps", float))
        seeds = _parse_seeds(_resolve(args, "seeds"))
        dense_cap = int(_resolve(args, "dense_cap", int))
        out = args.out

        if args.command == "gen":
            g = generate(args.gen, seeds[0])
            if out is None:
                raise CliError("gen requires --out")
            write_edge_list(g, out)
            return 0

        if args.command == "stretch":
            if (args.graph is None) == (args.gen is None):
                raise CliError("stretch wants exactly one of --graph or --gen")
            g = read_edge_list(args.graph) if args.graph else generate(args.gen, seeds[0])
            if not is_connected(g):
                raise CliError("graph must be connected")
            t = build_tree(g, tree_method, seeds[0])
            rep = stretch_report(g, t)
            if out:
                rep.write_csv(out + ".csv")
                rep.write_json_summary(out + ".json")
            else:
                json.dump(rep.summary(), sys.stdout, sort_keys=True, indent=2)
                sys.stdout.write("\n")
            return 0

        if args.command == "solve":
            x, sidecar = run_solve(args.graph, args.b_path, tree_method, epsilon, seeds[0])
            if out is None:
                raise CliError("solve requires --out")
            write_vector(x, out)
            _write_json(sidecar, out + ".json")
            return 0

        if args.command == "verify":
            spec = ExperimentSpec(
                generator=args.gen,
                tree_method=tree_method,
                epsilon=epsilon,
                seeds=seeds,
                checks=_resolve(args, "checks"),
                dense_cap=dense_cap,
            )
            report = run_verify(spec)
            _write_json(report, out)
            return 1 if report["failures"] else 0

        if args.command == "scaling":
            rows = run_scaling(args.gen, tree_method, epsilon, seeds)
            if out:
                write_scaling_csv(rows, out)
            else:
                write_scaling_csv(rows, "/dev/stdout")
            return 0
    except (CliError, GraphError, TreeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
