"""Plain-text graph, cut and model files.

Graph file: one ``u v w`` edge per line; a line with a single token declares
an isolated node.  Cut file: one ``u v`` pair per line.  Both accept ``#``
comments and blank lines.

Model file: ``key value...`` lines, with ``species NAME`` opening a section::

    model rosenzweig_macarthur
    param gamma 2
    param beta 0.2
    param alpha 0.3
    patches 1 2 3

    species prey
    loss 0.4
    edge 1 2 1

Builtins: ``rosenzweig_macarthur`` (exactly two species, prey first; params
gamma, beta, alpha; the species losses are l1 and l2) and ``linear`` (local
dynamics ``A x`` on every patch, one ``row`` line per row of ``A``).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GraphError, ParseError
from .graph import Cut, build_graph, edge_key

BUILTINS = {
    "rosenzweig_macarthur": ("gamma", "beta", "alpha"),
    "linear": (),
}


def format_number(x):
    """Shortest round-tripping text for a float, without a trailing ``.0``."""
    text = repr(float(x))
    return text[:-2] if text.endswith(".0") else text


def _lines(text):
    for k, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield k, line.split()


def _number(token, line):
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"not a number: {token!r}", line) from None
    if not np.isfinite(value):
        raise ParseError(f"not a finite number: {token!r}", line)
    return value


def parse_graph(text):
    edges, nodes = [], []
    for k, tokens in _lines(text):
        if len(tokens) == 1:
            nodes.append(tokens[0])
        elif len(tokens) == 3:
            edges.append((tokens[0], tokens[1], _number(tokens[2], k)))
        else:
            raise ParseError("expected 'u v w' or a single node name", k)
    try:
        return build_graph(edges, nodes=nodes)
    except GraphError as exc:
        raise ParseError(str(exc)) from exc


def serialize_graph(g):
    out = [f"{u} {v} {format_number(w)}" for u, v, w in g.edges()]
    linked = {x for u, v, _ in g.edges() for x in (u, v)}
    out += [v for v in g.nodes if v not in linked]
    return "\n".join(out) + "\n"


def parse_cut(text, g=None):
    """Cut from ``u v`` lines; with ``g`` given every pair must be an edge of it."""
    pairs = []
    for k, tokens in _lines(text):
        if len(tokens) != 2:
            raise ParseError("expected 'u v'", k)
        if g is not None and not g.has_edge(*tokens):
            raise ParseError(f"edge {tokens[0]} {tokens[1]} is not in the graph", k)
        pairs.append(edge_key(*tokens))
    return Cut.of(pairs)


def serialize_cut(cut):
    return "".join(f"{u} {v}\n" for u, v in cut)


@dataclass(frozen=True)
class SpeciesSpec:
    name: str
    loss: float = 0.0
    edges: tuple = ()


@dataclass(frozen=True)
class ModelSpec:
    builtin: str
    patches: tuple
    species: tuple
    params: tuple = ()  # sorted (name, value) pairs
    matrix: tuple = ()  # rows of A for the linear builtin

    def param(self, name):
        return dict(self.params)[name]

    def graphs(self):
        return tuple(build_graph(s.edges, nodes=self.patches) for s in self.species)

    def build(self):
        """Instantiate the :class:`~stablecut.metapop.MetapopModel`."""
        from .dynamics import RMParams, rosenzweig_macarthur
        from .metapop import linear_model

        graphs = self.graphs()
        if self.builtin == "rosenzweig_macarthur":
            l1, l2 = (s.loss for s in self.species)
            params = RMParams(self.param("gamma"), self.param("beta"), self.param("alpha"), l1, l2)
            return rosenzweig_macarthur(params, *graphs)
        A = np.array(self.matrix, dtype=float)
        return linear_model(A, graphs, [s.loss for s in self.species],
                            species=[s.name for s in self.species])


_TOP_KEYS = {"model", "param", "patches", "species_count", "row", "species"}
_SPECIES_KEYS = {"loss", "edge", "species"}


def parse_model(text):
    builtin = None
    params = {}
    patches = None
    count = None
    rows = []
    species = []
    current = None
    for k, tokens in _lines(text):
        key, args = tokens[0], tokens[1:]
        allowed = _SPECIES_KEYS if current is not None else _TOP_KEYS
        if key not in allowed:
            raise ParseError(f"unknown key {key!r}", k)
        if key == "species":
            if len(args) != 1:
                raise ParseError("expected 'species NAME'", k)
            if any(s["name"] == args[0] for s in species):
                raise ParseError(f"duplicate species {args[0]!r}", k)
            current = {"name": args[0], "loss": 0.0, "edges": []}
            species.append(current)
        elif key == "model":
            if len(args) != 1 or args[0] not in BUILTINS:
                raise ParseError(f"model must be one of {sorted(BUILTINS)}", k)
            builtin = args[0]
        elif key == "param":
            if len(args) != 2:
                raise ParseError("expected 'param NAME VALUE'", k)
            params[args[0]] = _number(args[1], k)
        elif key == "patches":
            if not args or len(set(args)) != len(args):
                raise ParseError("patches must be a non-empty list of distinct names", k)
            patches = tuple(sorted(args))
        elif key == "species_count":
            if len(args) != 1 or not args[0].isdigit():
                raise ParseError("expected 'species_count N'", k)
            count = int(args[0])
        elif key == "row":
            rows.append(tuple(_number(a, k) for a in args))
        elif key == "loss":
            if len(args) != 1:
                raise ParseError("expected 'loss VALUE'", k)
            current["loss"] = _number(args[0], k)
            if current["loss"] < 0:
                raise ParseError("loss must be >= 0", k)
        elif key == "edge":
            if len(args) != 3:
                raise ParseError("expected 'edge u v w'", k)
            if patches is None:
                raise ParseError("edges need a preceding 'patches' line", k)
            for p in args[:2]:
                if p not in patches:
                    raise ParseError(f"undeclared patch {p!r}", k)
            current["edges"].append((args[0], args[1], _number(args[2], k)))

    if builtin is None:
        raise ParseError("missing 'model' line")
    if patches is None:
        raise ParseError("missing 'patches' line")
    if not species:
        raise ParseError("no species sections")
    if count is not None and count != len(species):
        raise ParseError(f"species_count {count} but {len(species)} species sections")
    required = BUILTINS[builtin]
    unknown = set(params) - set(required)
    if unknown:
        raise ParseError(f"unknown parameters for {builtin}: {sorted(unknown)}")
    missing = set(required) - set(params)
    if missing:
        raise ParseError(f"missing parameters for {builtin}: {sorted(missing)}")
    n = len(species)
    if builtin == "rosenzweig_macarthur" and n != 2:
        raise ParseError("rosenzweig_macarthur needs exactly two species (prey, predator)")
    if builtin == "linear":
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ParseError(f"linear model needs {n} 'row' lines of {n} numbers")
    elif rows:
        raise ParseError("'row' lines only apply to the linear model")

    specs = []
    for s in species:
        try:
            g = build_graph(s["edges"], nodes=patches)
        except GraphError as exc:
            raise ParseError(f"species {s['name']}: {exc}") from exc
        specs.append(SpeciesSpec(s["name"], s["loss"], tuple(g.edges())))
    return ModelSpec(builtin, patches, tuple(specs), tuple(sorted(params.items())), tuple(rows))


def serialize_model(spec):
    out = [f"model {spec.builtin}"]
    out += [f"param {k} {format_number(v)}" for k, v in spec.params]
    out.append("patches " + " ".join(spec.patches))
    out.append(f"species_count {len(spec.species)}")
    out += ["row " + " ".join(format_number(a) for a in row) for row in spec.matrix]
    for s in spec.species:
        out.append("")
        out.append(f"species {s.name}")
        out.append(f"loss {format_number(s.loss)}")
        out += [f"edge {u} {v} {format_number(w)}" for u, v, w in s.edges]
    return "\n".join(out) + "\n"
