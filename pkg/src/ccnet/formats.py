"""Readers and writers for topologies, metrics, instances, overlays and certificates.

Text formats report problems as :class:`FormatError` with the offending line.
"""

import json
import re
from fractions import Fraction

from .instance import CCError, Overlay, SafeSetSystem, StrictMetric, Topology, as_fraction


class FormatError(CCError):
    def __init__(self, message, path=None, lineno=None):
        where = ""
        if path is not None:
            where = f"{path}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}" if where else message)
        self.path = path
        self.lineno = lineno


def _read(path_or_text, is_text):
    if is_text:
        return path_or_text, None
    with open(path_or_text) as fh:
        return fh.read(), str(path_or_text)


def _weight(tok, path, lineno):
    try:
        w = as_fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"bad weight {tok!r}", path, lineno) from None
    if w <= 0:
        raise FormatError(f"weight must be positive, got {tok}", path, lineno)
    return w


# ------------------------------------------------------------------ topology

def parse_topology(text, path=None) -> Topology:
    """``node <id> [name]`` lines, then ``edge <u> <v> <weight>`` lines; ``#`` starts a comment."""
    names = {}
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "node":
            if len(parts) not in (2, 3):
                raise FormatError("expected 'node <id> [name]'", path, lineno)
            try:
                vid = int(parts[1])
            except ValueError:
                raise FormatError(f"bad node id {parts[1]!r}", path, lineno) from None
            if vid in names:
                raise FormatError(f"duplicate node {vid}", path, lineno)
            if vid != len(names):
                raise FormatError(f"node ids must be 0,1,2,... in order; got {vid}", path, lineno)
            names[vid] = parts[2] if len(parts) == 3 else ""
        elif kind == "edge":
            if len(parts) != 4:
                raise FormatError("expected 'edge <u> <v> <weight>'", path, lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise FormatError("edge endpoints must be integer ids", path, lineno) from None
            for w in (u, v):
                if w not in names:
                    raise FormatError(f"edge references undeclared node {w}", path, lineno)
            if u == v:
                raise FormatError(f"self-loop at {u}", path, lineno)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise FormatError(f"duplicate edge {u} {v}", path, lineno)
            seen.add(key)
            edges.append((u, v, _weight(parts[3], path, lineno)))
        else:
            raise FormatError(f"unknown record {kind!r}", path, lineno)
    n = len(names)
    if n == 0:
        raise FormatError("no nodes declared", path)
    labels = tuple(names[i] for i in range(n))
    if not any(labels):
        labels = ()
    return Topology(n, tuple(edges), labels)


def read_topology(path) -> Topology:
    text, p = _read(path, False)
    return parse_topology(text, p)


def format_topology(topo: Topology) -> str:
    lines = []
    for v in range(topo.n):
        nm = topo.names[v] if topo.names else ""
        lines.append(f"node {v} {nm}".rstrip())
    for u, v, w in topo.edges:
        lines.append(f"edge {u} {v} {w}")
    return "\n".join(lines) + "\n"


def write_topology(topo: Topology, path):
    with open(path, "w") as fh:
        fh.write(format_topology(topo))


_ARROW = re.compile(r"^(?P<a>.+?)\s*->\s*(?P<b>.+?)\s+(?P<w>\S+)$")


def parse_rocketfuel(text, path=None) -> Topology:
    """Weighted adjacency lines ``<node> -> <node> <weight>``.

    Node names are assigned ids in order of first appearance. Links listed
    in both directions are merged; if the two weights differ the smaller is
    kept, since the model has undirected links.
    """
    ids = {}
    weights = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _ARROW.match(line)
        if not m:
            raise FormatError("expected '<node> -> <node> <weight>'", path, lineno)
        a, b = m.group("a").strip(), m.group("b").strip()
        w = _weight(m.group("w"), path, lineno)
        if a == b:
            raise FormatError(f"self-loop at {a!r}", path, lineno)
        for nm in (a, b):
            if nm not in ids:
                ids[nm] = len(ids)
        key = tuple(sorted((ids[a], ids[b])))
        weights[key] = min(w, weights.get(key, w))
    if not ids:
        raise FormatError("no links found", path)
    names = tuple(sorted(ids, key=ids.get))
    return Topology(len(ids), tuple((u, v, w) for (u, v), w in sorted(weights.items())), names)


def read_rocketfuel(path) -> Topology:
    text, p = _read(path, False)
    return parse_rocketfuel(text, p)


# -------------------------------------------------------------------- metric

def metric_to_json(metric: StrictMetric) -> str:
    return json.dumps({"n": metric.n, "names": list(metric.names),
                       "dist": [[str(x) for x in row] for row in metric.dist]})


def metric_from_json(text, path=None) -> StrictMetric:
    try:
        obj = json.loads(text)
        return StrictMetric(int(obj["n"]), tuple(tuple(Fraction(x) for x in row) for row in obj["dist"]),
                            tuple(obj.get("names", ())))
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise FormatError(f"bad metric file: {exc}", path) from None


def read_metric(path) -> StrictMetric:
    text, p = _read(path, False)
    return metric_from_json(text, p)


def write_metric(metric, path):
    with open(path, "w") as fh:
        fh.write(metric_to_json(metric))


# ------------------------------------------------------------------ instance

def instance_to_json(sys: SafeSetSystem) -> str:
    obj = {
        "n": sys.n,
        "base_edges": [list(e) for e in sorted(sys.base_edges)],
        "demands": [list(d) for d in sys.demands],
        "safe": {f"{u},{v}": sorted(sys.safe[(u, v)]) for u, v in sys.demands},
    }
    if sys.names:
        obj["names"] = list(sys.names)
    return json.dumps(obj)


def instance_from_json(text, path=None) -> SafeSetSystem:
    try:
        obj = json.loads(text)
        n = int(obj["n"])
        base = [tuple(e) for e in obj["base_edges"]]
        safe = {}
        for key, members in obj["safe"].items():
            u, v = (int(t) for t in key.split(","))
            safe[(u, v)] = frozenset(int(w) for w in members)
        if "demands" in obj:
            demands = tuple(tuple(d) for d in obj["demands"])
        else:
            demands = tuple((u, v) for u in range(n) for v in range(n) if u != v)
        return SafeSetSystem(n, frozenset(base), demands, safe, tuple(obj.get("names", ())))
    except (KeyError, TypeError, ValueError, AttributeError, json.JSONDecodeError) as exc:
        raise FormatError(f"bad instance file: {exc}", path) from None


def read_instance(path) -> SafeSetSystem:
    text, p = _read(path, False)
    return instance_from_json(text, p)


def write_instance(sys, path):
    with open(path, "w") as fh:
        fh.write(instance_to_json(sys))


# ------------------------------------------------------------------- overlay

def format_overlay(overlay: Overlay) -> str:
    prov = json.dumps(overlay.provenance, sort_keys=True, default=str)
    lines = [f"# provenance: {prov}"]
    lines += [f"{u} {v}" for u, v in overlay.sorted_edges()]
    return "\n".join(lines) + "\n"


def parse_overlay(text, path=None) -> Overlay:
    provenance = {}
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("provenance:"):
                try:
                    provenance = json.loads(body[len("provenance:"):])
                except json.JSONDecodeError:
                    raise FormatError("bad provenance header", path, lineno) from None
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError("expected 'u v'", path, lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError("edge endpoints must be integers", path, lineno) from None
        if u == v:
            raise FormatError(f"self-loop at {u}", path, lineno)
        edges.add((u, v))
    return Overlay(frozenset(edges), provenance)


def read_overlay(path) -> Overlay:
    text, p = _read(path, False)
    return parse_overlay(text, p)


def write_overlay(overlay, path):
    with open(path, "w") as fh:
        fh.write(format_overlay(overlay))


def read_any_instance(path):
    """Load an instance file, or derive the iBGP instance from a metric/topology file."""
    from .ibgp import derive_ibgp_safe_sets
    from .instance import all_pairs_distances

    text, p = _read(path, False)
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"bad JSON: {exc}", p) from None
        if "safe" in obj:
            return instance_from_json(text, p)
        if "dist" in obj:
            return derive_ibgp_safe_sets(metric_from_json(text, p))
        raise FormatError("JSON file is neither an instance nor a metric", p)
    if "->" in text:
        return derive_ibgp_safe_sets(all_pairs_distances(parse_rocketfuel(text, p)))
    return derive_ibgp_safe_sets(all_pairs_distances(parse_topology(text, p)))
