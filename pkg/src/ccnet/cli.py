"""Command line front end: ``python -m ccnet <command> ...``.

Exit status: 0 success, 1 infeasible instance or failed verification,
2 usage error or malformed input.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

from . import formats
from .generators import (GadgetParams, GeneratorError, HittingSetInstance, MinRepInstance, gadget_sidecar,
                         gen_hitting_gadget, gen_laminar_hierarchical, gen_minrep_cc, gen_random_metric,
                         gen_unique_games_gap, random_hitting_set, random_minrep)
from .hierarchical import NotHierarchicalError
from .ibgp import EXHAUSTIVE_LIMIT, check_hot_potato, derive_ibgp_safe_sets, verify_safe_paths
from .instance import CCError, InfeasibleInstanceError, all_pairs_distances
from .oracle import OracleOutOfRange
from .pipeline import ALGORITHMS, solve
from .report import SolveReport, write_report

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def default_seed():
    raw = os.environ.get("CCNET_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"CCNET_SEED must be an integer, got {raw!r}") from None


def bundled_manifest():
    return resources.files("ccnet") / "data" / "pop" / "manifest.json"


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_topology(path, rocketfuel):
    if rocketfuel:
        return formats.read_rocketfuel(path)
    with open(path) as fh:
        text = fh.read()
    if "->" in text:
        return formats.parse_rocketfuel(text, str(path))
    return formats.parse_topology(text, str(path))


def _load_metric(path):
    """Metric JSON, or a topology file whose shortest paths define the metric."""
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return formats.metric_from_json(text, str(path))
    return all_pairs_distances(_load_topology(path, False))


# ------------------------------------------------------------------ commands

def cmd_distances(args):
    metric = all_pairs_distances(_load_topology(args.topology, args.rocketfuel))
    _emit(formats.metric_to_json(metric) + "\n", args.output)
    return OK


def cmd_derive(args):
    sys_ = derive_ibgp_safe_sets(_load_metric(args.metric))
    _emit(formats.instance_to_json(sys_) + "\n", args.output)
    return OK


def _parse_t(raw, n):
    if raw is None:
        return None
    if raw == "n":
        return n
    try:
        t = int(raw)
    except ValueError:
        raise UsageError(f"--t must be an integer or 'n', got {raw!r}") from None
    if t < 1:
        raise UsageError("--t must be >= 1")
    return t


def cmd_solve(args):
    inst = formats.read_any_instance(args.instance)
    seed = args.seed if args.seed is not None else default_seed()
    res = solve(inst, args.algo, args.variant, _parse_t(args.t, inst.n), seed, args.retries, args.engine)
    if args.output:
        formats.write_overlay(res.overlay, args.output)
    if args.cert and res.certificate is not None:
        with open(args.cert, "w") as fh:
            fh.write(res.certificate.to_json())
    for i, (s, ok, size) in enumerate(res.attempts):
        print(f"attempt {i}: seed={s} size={size} verified={'yes' if ok else 'no'}", file=sys.stderr)
    value = len(res.overlay) if args.variant == "sum" else res.overlay.max_degree()
    rep = SolveReport(Path(args.instance).stem, inst.n, args.algo, value, res.verified,
                      res.runtime_ms, res.lower_bound, seed, args.variant)
    sys.stdout.write(write_report([rep], args.format))
    if not args.output:
        sys.stdout.write(formats.format_overlay(res.overlay))
    return OK if res.verified else FAIL


def cmd_verify(args):
    overlay = formats.read_overlay(args.overlay)
    if args.mode == "static":
        inst = formats.read_any_instance(args.instance)
        outside = overlay.outside(inst)
        if outside:
            print(f"overlay has edges outside the base graph: {outside[:5]}", file=sys.stderr)
            return FAIL
        rep = verify_safe_paths(inst, overlay)
        failures = [f"demand {d[0]} {d[1]}" for d in rep.failures]
    else:
        with open(args.instance) as fh:
            text = fh.read()
        if text.lstrip().startswith("{") and '"safe"' in text:
            raise UsageError(f"--mode {args.mode} needs a metric or topology, not an instance file")
        metric = _load_metric(args.instance)
        if args.mode == "exhaustive" and metric.n > EXHAUSTIVE_LIMIT:
            raise UsageError(f"exhaustive mode supports n <= {EXHAUSTIVE_LIMIT}, got n={metric.n}")
        rep = check_hot_potato(metric, overlay, args.mode)
        failures = [f"router {r} misses its closest egress for X_F={sorted(xf)}" for r, xf in rep.failures]
    if rep.ok:
        print(f"ok: overlay with {len(overlay)} edges passes {args.mode} verification")
        return OK
    print(f"FAILED: {len(failures)} failure(s)")
    for line in failures[:20]:
        print("  " + line)
    return FAIL


def _parse_sets(spec):
    sets = []
    for chunk in spec.split(";"):
        chunk = chunk.strip()
        if chunk:
            sets.append(frozenset(int(x) for x in chunk.split(",")))
    return sets


def cmd_gen(args):
    seed = args.seed if args.seed is not None else default_seed()
    sidecar = None
    fam = args.family
    if fam == "gadget":
        if args.sets:
            sets = _parse_sets(args.sets)
            hs = HittingSetInstance(max(max(t) for t in sets), tuple(sets))
        else:
            hs = random_hitting_set(args.elems, args.num_sets, seed)
        params = GadgetParams(M=formats.as_fraction(args.M), eps=None if args.eps is None else formats.as_fraction(args.eps),
                              ell=args.ell, alpha=args.alpha)
        metric = gen_hitting_gadget(hs, params, args.variant)
        text = formats.metric_to_json(metric)
        sidecar = gadget_sidecar(hs, metric, args.variant)
    elif fam == "minrep":
        mr = random_minrep(args.groups, args.group_size, args.edge_prob, args.d or 1, seed)
        inst = gen_minrep_cc(mr, args.variant)
        text = formats.instance_to_json(inst)
        reps = mr.min_rep()
        sidecar = {"family": "minrep", "variant": args.variant, "u_groups": mr.u_groups, "v_groups": mr.v_groups,
                   "edges": mr.edges, "d": mr.d, "super_edges": mr.super_edges(), "min_rep": sorted(reps)}
    elif fam == "ug-gap":
        inst, ug = gen_unique_games_gap(args.n_ug, args.ug_eps, args.d, args.k, seed, args.variant)
        text = formats.instance_to_json(inst)
        sidecar = {"family": "ug-gap", "variant": args.variant, "n_ug": args.n_ug, "k": ug.k,
                   "perms": {f"{u},{v}": list(p) for (u, v), p in ug.perms.items()}}
    elif fam == "laminar":
        inst = gen_laminar_hierarchical(args.n, seed, args.branching, args.extra_prob, direct_prob=args.direct_prob)
        text = formats.instance_to_json(inst)
    elif fam == "random-metric":
        metric = gen_random_metric(args.n, seed, args.extra_prob, args.max_weight)
        text = formats.metric_to_json(metric)
    else:  # argparse restricts choices
        raise UsageError(f"unknown family {fam!r}")
    _emit(text + "\n", args.output)
    if args.sidecar:
        if sidecar is None:
            sidecar = {"family": fam}
        with open(args.sidecar, "w") as fh:
            json.dump(sidecar, fh, indent=1, default=lambda o: sorted(o) if isinstance(o, (set, frozenset)) else str(o))
    return OK


def load_manifest(path):
    path = Path(str(path))
    try:
        obj = json.loads(path.read_text())
        entries = obj["instances"]
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise formats.FormatError(f"bad manifest: {exc}", str(path)) from None
    out = []
    for i, e in enumerate(entries):
        if "path" not in e:
            raise formats.FormatError(f"manifest entry {i} has no path", str(path))
        p = Path(e["path"])
        if not p.is_absolute():
            p = path.parent / p
        out.append({"name": e.get("name", p.stem), "path": str(p), "algo": e.get("algo", "pd"),
                    "variant": e.get("variant", "sum"), "t": e.get("t"), "seed": e.get("seed"),
                    "retries": e.get("retries", 0)})
    return out


def run_entry(entry, default_seed_value=0, timed=True):
    inst = formats.read_any_instance(entry["path"])
    t = inst.n if entry["t"] in (None, "n") else int(entry["t"])
    seed = entry["seed"] if entry["seed"] is not None else default_seed_value
    res = solve(inst, entry["algo"], entry["variant"], t, seed, entry["retries"])
    value = len(res.overlay) if entry["variant"] == "sum" else res.overlay.max_degree()
    return SolveReport(entry["name"], inst.n, entry["algo"], value, res.verified,
                       res.runtime_ms if timed else None, res.lower_bound, seed, entry["variant"])


def cmd_report(args):
    manifest = args.manifest or bundled_manifest()
    entries = load_manifest(manifest)
    seed = default_seed()
    timed = not args.deterministic
    if args.algo:
        for e in entries:
            e["algo"] = args.algo
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            reports = list(ex.map(run_entry, entries, [seed] * len(entries), [timed] * len(entries)))
    else:
        reports = [run_entry(e, seed, timed) for e in entries]
    _emit(write_report(reports, args.format), args.output)
    return OK if all(r.verified for r in reports) else FAIL


# -------------------------------------------------------------------- parser

def build_parser():
    p = argparse.ArgumentParser(prog="ccnet", description="Constrained Connectivity and iBGP overlay toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("distances", help="topology -> metric JSON")
    d.add_argument("topology")
    d.add_argument("--rocketfuel", action="store_true", help="input uses '<a> -> <b> <w>' lines")
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_distances)

    d = sub.add_parser("derive", help="metric (or topology) -> iBGP safe-set instance")
    d.add_argument("metric")
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_derive)

    s = sub.add_parser("solve", help="compute an overlay")
    s.add_argument("instance", help="instance JSON, metric JSON or topology file")
    s.add_argument("--algo", choices=ALGORITHMS, default="pd")
    s.add_argument("--variant", choices=("sum", "degree"), default="sum")
    s.add_argument("--t", help="safe-set size cap for pd / pd-sample (integer or 'n')")
    s.add_argument("--seed", type=int)
    s.add_argument("--retries", type=int, default=0)
    s.add_argument("--engine", choices=("highs", "simplex"), default="highs")
    s.add_argument("--format", choices=("text", "csv", "json"), default="text")
    s.add_argument("--cert", help="write the dual certificate JSON here (pd, pd-sample)")
    s.add_argument("-o", "--output", help="overlay file")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check an overlay")
    v.add_argument("instance", help="instance JSON (static) or metric/topology (all modes)")
    v.add_argument("overlay")
    v.add_argument("--mode", choices=("static", "witness", "exhaustive"), default="static")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate an instance family")
    g.add_argument("--family", required=True, choices=("gadget", "minrep", "ug-gap", "laminar", "random-metric"))
    g.add_argument("--variant", choices=("sum", "degree"), default="sum")
    g.add_argument("--seed", type=int)
    g.add_argument("-o", "--output")
    g.add_argument("--sidecar", help="write predicted structures as JSON")
    g.add_argument("--elems", type=int, default=4, help="gadget: hitting-set elements")
    g.add_argument("--num-sets", type=int, default=3, help="gadget: number of sets")
    g.add_argument("--sets", help="gadget: explicit sets, e.g. '1,2;2,3'")
    g.add_argument("--M", default="20")
    g.add_argument("--eps")
    g.add_argument("--ell", type=int, default=1)
    g.add_argument("--alpha", type=int, default=1)
    g.add_argument("--groups", type=int, default=2, help="minrep: groups per side")
    g.add_argument("--group-size", type=int, default=2)
    g.add_argument("--edge-prob", type=float, default=0.5)
    g.add_argument("--d", type=int, help="duplication parameter (minrep, ug-gap)")
    g.add_argument("--n-ug", type=int, default=3)
    g.add_argument("--ug-eps", type=float, default=0.1)
    g.add_argument("--k", type=int, help="ug-gap alphabet size")
    g.add_argument("--n", type=int, default=6)
    g.add_argument("--branching", type=int, default=2)
    g.add_argument("--extra-prob", type=float, default=0.2)
    g.add_argument("--direct-prob", type=float, default=0.0)
    g.add_argument("--max-weight", type=int, default=10)
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("report", help="batch-solve a manifest and print a table")
    r.add_argument("manifest", nargs="?", help="manifest JSON (default: bundled PoP topologies)")
    r.add_argument("--format", choices=("text", "csv", "json"), default="text")
    r.add_argument("--algo", choices=ALGORITHMS, help="override every entry's solver")
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--deterministic", action="store_true", help="omit runtimes so output is byte-stable")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_report)
    return p


def run_cli(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except (UsageError, formats.FormatError, OracleOutOfRange, NotHierarchicalError, GeneratorError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except InfeasibleInstanceError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return FAIL
    except CCError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


def main():
    sys.exit(run_cli())
