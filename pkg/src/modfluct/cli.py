"""Experiment runner: config in, deterministic reports out.

Subcommands:
  run      execute one pipeline from a JSON (or TOML) config
  catalog  list model variants, basis observables and pipelines
  bench    time the numba kernels against the pure-numpy fallback

Exit codes: 0 all gated predicates pass, 1 a predicate failed, 2 bad usage.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import sys
import time
from fractions import Fraction
from math import factorial
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .combinatorics import graphs as G
from .combinatorics import partitions as P
from .combinatorics import perms as S
from .combinatorics.formal import from_json_dict
from .combinatorics.graphs import Graph
from .cumulants import (
    CumulantRegime,
    exact_cumulants,
    mc1_check,
    mc_cumulants,
    sample_statistics,
)
from .models import (
    DiscPermuton,
    RngSeed,
    UniformPermuton,
    exact_central_measure,
    family_of,
    model_from_json,
)
from .observables import Observable, evaluate, permuton_density, permuton_density_exact
from .stats import (
    concentration_check,
    kolmogorov_bound,
    kolmogorov_distance,
    standardize,
    tail_report,
    tv_test,
)

PIPELINES = ("density", "cumulants", "clt", "concentration", "tails", "oracle-tv", "mc1")

GRAPH_CATALOG = {
    "K2": G.K2,
    "K3": G.K3,
    "P3": G.P3,
    "P4": G.path_graph(4),
    "C4": G.cycle_graph(4),
    "K4": G.complete_graph(4),
}


class ConfigError(Exception):
    pass


def parse_observable(doc) -> tuple[str, object]:
    """Returns (family, basis object or Observable)."""
    if isinstance(doc, str):
        doc = {"name": doc}
    if "formal_sum_path" in doc:
        family = doc.get("family")
        if family not in ("graph", "permutation", "partition"):
            raise ConfigError("formal-sum observables need family graph|permutation|partition")
        payload = json.loads(Path(doc["formal_sum_path"]).read_text())
        parser = {"graph": Graph.parse, "permutation": S.parse, "partition": P.parse}[family]
        return family, Observable(family, from_json_dict(payload, parser))
    name = doc.get("name")
    if name is None:
        raise ConfigError(f"cannot parse observable {doc!r}")
    if name in GRAPH_CATALOG:
        return "graph", GRAPH_CATALOG[name]
    if name.startswith("k="):
        return "graph", Graph.parse(name)
    if name.startswith("("):
        return "partition", P.parse(name)
    try:
        return "permutation", S.parse(name)
    except ValueError as exc:
        raise ConfigError(f"unrecognized observable {name!r}") from exc


def obs_name(obs) -> str:
    if isinstance(obs, Graph):
        return obs.format()
    if isinstance(obs, Observable):
        return f"<formal sum, {len(obs.element)} terms>"
    if isinstance(obs, tuple):
        if sorted(obs) == list(range(1, len(obs) + 1)):
            return S.format_perm(obs)
        return "(" + P.format_partition(obs) + ")"
    return repr(obs)


def load_config(path: str) -> dict:
    text = Path(path).read_text()
    if path.endswith(".toml"):
        try:
            import tomllib
        except ImportError as exc:  # Python < 3.11
            raise ConfigError("TOML configs need Python 3.11+; use JSON") from exc
        return tomllib.loads(text)
    return json.loads(text)


def effective_config(args) -> dict:
    config = load_config(args.config) if args.config else {}
    if args.pipeline:
        config["pipeline"] = args.pipeline
    if args.seed is not None:
        config["seed"] = args.seed
    if args.threads is not None:
        config["threads"] = args.threads
    if args.out:
        config["out"] = args.out
    config.setdefault("threads", 1)
    config.setdefault("seed", 0)
    config.setdefault("thresholds", {})
    if "pipeline" not in config:
        raise ConfigError("no pipeline given (config key 'pipeline' or --pipeline)")
    if config["pipeline"] not in PIPELINES:
        raise ConfigError(f"unknown pipeline {config['pipeline']!r}; choose from {PIPELINES}")
    if "out" not in config:
        raise ConfigError("no output directory given (config key 'out' or --out)")
    return config


def config_hash(config: dict) -> str:
    return hashlib.sha256(json.dumps(config, sort_keys=True, default=str).encode()).hexdigest()[:16]


def write_csv(path: Path, header_comment: str, columns: list[str], rows) -> None:
    def cell(x) -> str:
        s = str(x)
        return '"' + s.replace('"', '""') + '"' if ("," in s or '"' in s) else s

    with path.open("w") as fh:
        fh.write(f"# {header_comment}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(cell(x) for x in row) + "\n")


def _num(x):
    if isinstance(x, Fraction):
        return str(x)
    return x


def run_pipeline(config: dict) -> tuple[bool, dict, dict[str, tuple[list[str], list]]]:
    """Returns (passed, report fields, csv files {name: (columns, rows)})."""
    pipeline = config["pipeline"]
    thresholds = config.get("thresholds", {})
    seed = RngSeed(int(config["seed"]))
    threads = int(config.get("threads", 1))
    model = model_from_json(config["model"]) if "model" in config else None
    if model is None:
        raise ConfigError("config needs a 'model'")
    results: list[dict] = []
    csvs: dict[str, tuple[list[str], list]] = {}
    passed = True

    if pipeline == "density":
        family, obs = parse_observable(config["observable"])
        budget = int(config.get("reps", 20000))
        stderr = ""
        if family == "permutation" and isinstance(obs, tuple) and isinstance(model, DiscPermuton):
            value, stderr = permuton_density(obs, model, budget=budget, seed=seed)
            method = "monte-carlo"
        else:
            value = evaluate(obs, model, budget=budget, seed=seed)
            method = "exact" if isinstance(value, Fraction) else "quadrature"
        entry = {
            "observable": obs_name(obs),
            "value": _num(value),
            "float_value": float(value),
            "method": method,
        }
        if stderr != "":
            entry["stderr"] = stderr
        if "expected" in thresholds:
            expected = Fraction(thresholds["expected"])
            tol = float(thresholds.get("tolerance", 0))
            entry["expected"] = str(expected)
            entry["ok"] = (
                value == expected if tol == 0 else abs(float(value) - float(expected)) <= tol
            )
            passed = passed and entry["ok"]
        results.append(entry)
        csvs["samples.csv"] = (
            ["observable", "model", "value", "stderr", "method", "budget", "seed"],
            [
                (
                    obs_name(obs),
                    json.dumps(config["model"], sort_keys=True),
                    float(value),
                    stderr,
                    method,
                    budget if method == "monte-carlo" else "",
                    config["seed"],
                )
            ],
        )
        return passed, {"results": results}, csvs

    family, obs = parse_observable(config["observable"])
    n_grid = [int(n) for n in config.get("n_grid", [])]
    if pipeline == "mc1":
        orders = int(thresholds.get("max_order", 4))
        rows = []
        for n in n_grid:
            report = exact_cumulants(model, obs, n, R=orders)
            checks = mc1_check(report)
            ok = all(c.ok for c in checks)
            passed = passed and ok
            results.append(
                {
                    "n": n,
                    "kappa": [str(k) for k in report.kappa],
                    "checks": [
                        {"order": c.order, "value": c.value, "bound": c.bound, "ok": c.ok} for c in checks
                    ],
                    "ok": ok,
                }
            )
            rows.extend((n, c.order, c.value, c.bound, c.ok) for c in checks)
        csvs["tails.csv"] = (["n", "order", "kappa", "bound", "ok"], rows)
        return passed, {"results": results}, csvs

    if pipeline == "oracle-tv":
        reps = int(config.get("reps", 100000))
        threshold = float(thresholds.get("tv", 0.02))
        for n in n_grid:
            if family_of(model) == "thoma":
                from .models import sample_partition_counts

                exact = exact_central_measure(model, n)
                counts = sample_partition_counts(model, n, reps, seed)
                tv, ok = tv_test(counts, exact, threshold)
                key_fmt = P.format_partition
            elif isinstance(model, UniformPermuton):
                exact = {
                    sigma: Fraction(1, factorial(n))
                    for sigma in itertools.permutations(range(1, n + 1))
                }
                counts = {}
                rng = seed.generator()
                for _ in range(reps):
                    sigma = tuple(int(v) + 1 for v in rng.permutation(n))
                    counts[sigma] = counts.get(sigma, 0) + 1
                tv, ok = tv_test(counts, exact, threshold)
                key_fmt = S.format_perm
            else:
                raise ConfigError("oracle-tv supports thoma models and the uniform permuton")
            passed = passed and ok
            results.append({"n": n, "reps": reps, "tv": tv, "threshold": threshold, "ok": ok})
            csvs[f"samples_n{n}.csv"] = (
                ["object", "count", "exact_probability"],
                sorted((key_fmt(k), counts.get(k, 0), float(exact[k])) for k in exact),
            )
        return passed, {"results": results}, csvs

    reps = int(config.get("reps", 0))
    if reps <= 0:
        raise ConfigError(f"pipeline {pipeline} needs 'reps'")
    sample_rows = []
    tail_rows = []
    for n in n_grid:
        regime = CumulantRegime.for_family(family_of(model), n, _obs_degree(family, obs))
        samples = sample_statistics(model, obs, n, reps, seed, threads=threads)
        if pipeline == "cumulants":
            report = mc_cumulants(model, obs, n, reps, seed, threads=threads, samples=samples)
            results.append({"n": n, **report.to_json()})
            sample_rows.extend((n, i, v) for i, v in enumerate(samples))
        elif pipeline == "clt":
            mode = str(config.get("standardize", "Y"))
            std = standardize(samples, mode, regime)
            d = kolmogorov_distance(std)
            sigma_n = float(np.std(samples, ddof=1)) / float(regime.N_n * regime.D_n) ** 0.5
            bound = kolmogorov_bound(regime, sigma_n) if sigma_n > 0 else float("inf")
            limit = float(thresholds.get("d_kol", np.inf))
            ok = d <= min(bound, limit)
            passed = passed and ok
            results.append(
                {"n": n, "d_kol": d, "bound": bound, "sigma_n": sigma_n, "threshold": limit, "ok": ok}
            )
            sample_rows.extend((n, i, v) for i, v in enumerate(std.values))
        elif pipeline == "concentration":
            scale = float(regime.N_n)
            t_values = samples / scale
            center, coefficient = _concentration_center(model, obs, t_values)
            x_grid = thresholds.get("x_grid", [0.02, 0.05, 0.1])
            rep = concentration_check(
                t_values, center, n, _obs_degree(family, obs), x_grid, coefficient=coefficient
            )
            passed = passed and rep.passed
            results.append({"n": n, **rep.to_json()})
            tail_rows.extend(
                (n, p.threshold, p.empirical, p.ci_high, p.bound, p.ok) for p in rep.points
            )
        elif pipeline == "tails":
            from .cumulants import compute_limits

            limits = compute_limits(obs, model)
            std = standardize(samples, "Y", regime)
            rep = tail_report(std, limits, regime)
            passed = passed and rep.passed
            results.append({"n": n, **rep.to_json()})
            tail_rows.extend(
                (n, p.threshold, p.empirical, p.gaussian, p.bound) for p in rep.points
            )
            sample_rows.extend((n, i, v) for i, v in enumerate(std.values))
    if sample_rows:
        csvs["samples.csv"] = (["n", "replicate", "value"], sample_rows)
    if tail_rows:
        columns = (
            ["n", "threshold", "empirical", "ci_high", "bound", "ok"]
            if pipeline == "concentration"
            else ["n", "threshold", "empirical", "gaussian", "corrected"]
        )
        csvs["tails.csv"] = (columns, tail_rows)
    return passed, {"results": results}, csvs


def _obs_degree(family: str, obs) -> int:
    if isinstance(obs, Graph):
        return obs.k
    if isinstance(obs, Observable):
        return obs.degree
    return sum(obs) if family == "partition" else len(obs)


def _concentration_center(model, obs, t_values) -> tuple[float, float]:
    """Concentration centering: the limit value where the 4*exp / exact-center
    statements apply (permutations, partitions), else the empirical mean."""
    if family_of(model) == "thoma":
        return float(evaluate(obs, model)), 4.0
    if family_of(model) == "permuton":
        try:
            return float(permuton_density_exact(obs, model)), 2.0
        except TypeError:
            return float(np.mean(t_values)), 2.0
    return float(np.mean(t_values)), 2.0


def cmd_run(args) -> int:
    try:
        config = effective_config(args)
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out_dir = Path(config["out"])
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.time()
    try:
        passed, fields, csvs = run_pipeline(config)
    except (ConfigError, ValueError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    elapsed = time.time() - started
    digest = config_hash(config)
    report = {
        "pipeline": config["pipeline"],
        "config": config,
        "config_hash": digest,
        "seed": config["seed"],
        "version": __version__,
        "kernel_backend": kernels.BACKEND,
        "passed": passed,
        "wall_seconds": round(elapsed, 3),
        **fields,
    }
    (out_dir / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True, default=str) + "\n")
    stamp = f"generated {time.strftime('%Y-%m-%dT%H:%M:%S')} modfluct {__version__} config {digest}"
    for name, (columns, rows) in csvs.items():
        write_csv(out_dir / name, stamp, columns, rows)
    print(f"{config['pipeline']}: {'PASS' if passed else 'FAIL'} ({elapsed:.1f}s) -> {out_dir}")
    return 0 if passed else 1


def cmd_catalog(_args) -> int:
    print("models:")
    for name in ("graphon:constant", "graphon:step", "graphon:product", "graphon:mean", "graphon:grid"):
        print(f"  {name}")
    for name in ("permuton:uniform", "permuton:from-permutation", "permuton:grid", "permuton:disc"):
        print(f"  {name}")
    print("  thoma (alpha, beta lists; gamma is the remainder)")
    print("observables:")
    print("  graphs:", ", ".join(sorted(GRAPH_CATALOG)), 'or any "k=5; 1-2,..." string')
    print("  permutations: one-line strings, e.g. 21, 231, 2413")
    print('  partitions: "(2)", "(3)", "(2,1)", ...')
    print("  formal sums: {'formal_sum_path': file, 'family': ...}")
    print("pipelines:", ", ".join(PIPELINES))
    print(f"kernel backend: {kernels.BACKEND} (set MODFLUCT_KERNELS=numba|numpy)")
    return 0


def cmd_bench(args) -> int:
    from timeit import timeit

    rng = np.random.default_rng(0)
    sigma = rng.permutation(args.n) + 1
    adj = rng.random((args.n, args.n)) < 0.3
    adj = np.triu(adj, 1)
    adj = adj | adj.T
    letters = rng.choice([1.0, 2.0, 3.0 + 0.5], size=args.n)
    cases = [
        ("inversion_count", lambda b: b.inversion_count(sigma)),
        ("pattern_profile k=3", lambda b: b.pattern_profile(sigma, 3)),
        ("triangle_count", lambda b: b.triangle_count(adj)),
        ("rsk_row_lengths", lambda b: b.rsk_row_lengths(letters, 2.5)),
    ]
    backends = []
    for name in ("numpy", "numba"):
        try:
            backends.append((name, kernels.load_backend(name)))
        except ImportError:
            print(f"{name}: unavailable")
    print(f"n = {args.n}, {args.repeat} calls per timing")
    header = f"{'kernel':24s}" + "".join(f"{name:>12s}" for name, _ in backends)
    print(header)
    for label, fn in cases:
        row = f"{label:24s}"
        reference = None
        for name, backend in backends:
            fn(backend)  # warm-up (JIT compile on the numba side)
            t = timeit(lambda: fn(backend), number=args.repeat) / args.repeat
            row += f"{t*1e6:>10.1f}us"
            value = fn(backend)
            if reference is None:
                reference = value
            else:
                same = np.array_equal(np.asarray(reference), np.asarray(value))
                if not same:
                    print(f"  MISMATCH in {label}")
                    return 1
        print(row)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="modfluct", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run one experiment pipeline")
    run_p.add_argument("--config", help="JSON (or TOML) config file")
    run_p.add_argument("--pipeline", choices=PIPELINES)
    run_p.add_argument("--seed", type=int)
    run_p.add_argument("--threads", type=int)
    run_p.add_argument("--out", help="output directory")
    run_p.set_defaults(func=cmd_run)
    cat_p = sub.add_parser("catalog", help="list models, observables and pipelines")
    cat_p.set_defaults(func=cmd_catalog)
    bench_p = sub.add_parser("bench", help="compare kernel backends")
    bench_p.add_argument("--n", type=int, default=200)
    bench_p.add_argument("--repeat", type=int, default=20)
    bench_p.set_defaults(func=cmd_bench)
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
