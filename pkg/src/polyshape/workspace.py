"""Workspace files: named polygraphs, shapes and functors in a line format.

The grammar is line-based with '#' comments:

    polygraph <name>
    vertex <id> ...
    edge <id> : (<src-ids>) -> (<tgt-ids>)
    shape <name> of <polygraph> : leaves (<ids>) roots (<ids>)
    functor <name> mode (planar|symmetric) bounds <E> <N> : <shape-names...>

vertex and edge lines attach to the most recent polygraph declaration.
Parsing validates everything it stores and reports failures with line
numbers; serialize writes the same grammar back out, so a parsed
workspace round-trips.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .functors import ShapelyFunctor, from_shapes
from .labelled import LabelledShape
from .polygraph import MODES, Edge, Polygraph, make_polygraph

_NAME = re.compile(r"[A-Za-z0-9_.\-]+\Z")


class ParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass
class FunctorSpec:
    """A functor declaration as written: shape names, not digests."""
    mode: str
    bounds: tuple[int, int]
    shape_names: tuple[str, ...]


@dataclass
class Workspace:
    polygraphs: dict[str, Polygraph] = field(default_factory=dict)
    shapes: dict[str, LabelledShape] = field(default_factory=dict)
    shape_sources: dict[str, str] = field(default_factory=dict)
    functors: dict[str, ShapelyFunctor] = field(default_factory=dict)
    functor_specs: dict[str, FunctorSpec] = field(default_factory=dict)

    def _claim(self, name: str, line_no: int):
        if (name in self.polygraphs or name in self.shapes
                or name in self.functors):
            raise ParseError(line_no, f"duplicate name {name!r}")


def _check_name(tok: str, line_no: int, what: str) -> str:
    if not _NAME.match(tok):
        raise ParseError(line_no, f"invalid {what} {tok!r}")
    return tok


def _split_groups(text: str, line_no: int, expect: int) -> list[list[str]]:
    """Extract the parenthesized id groups from a line fragment."""
    groups = re.findall(r"\(([^()]*)\)", text)
    if len(groups) != expect:
        raise ParseError(line_no,
                         f"expected {expect} parenthesized group(s)")
    return [g.split() for g in groups]


class _Builder:
    """Accumulates one polygraph block until it can be validated whole."""

    def __init__(self, name: str, line_no: int):
        self.name = name
        self.line_no = line_no
        self.vertices: list[str] = []
        self.edges: list[Edge] = []

    def finish(self) -> Polygraph:
        try:
            return make_polygraph(self.vertices, self.edges)
        except ValueError as exc:
            raise ParseError(self.line_no, f"polygraph {self.name!r}: {exc}")


def parse(text: str, into: Workspace | None = None) -> Workspace:
    """Parse workspace text, validating and storing every object."""
    w = into if into is not None else Workspace()
    current: _Builder | None = None
    # vertex/edge lines are validated when their block closes, so remember
    # where each edge came from for diagnostics
    pending: list[tuple[int, str]] = []

    def close_block():
        nonlocal current
        if current is None:
            return
        graph = current.finish()
        seen = set(graph.vertex_set)
        for line_no, vid in pending:
            if vid not in seen:
                raise ParseError(line_no, f"unknown vertex {vid!r}")
        w.polygraphs[current.name] = graph
        current = None
        pending.clear()

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0]

        if head == "polygraph":
            close_block()
            if len(toks) != 2:
                raise ParseError(line_no, "usage: polygraph <name>")
            name = _check_name(toks[1], line_no, "name")
            w._claim(name, line_no)
            current = _Builder(name, line_no)

        elif head == "vertex":
            if current is None:
                raise ParseError(line_no, "vertex outside a polygraph block")
            if len(toks) < 2:
                raise ParseError(line_no, "usage: vertex <id> ...")
            for tok in toks[1:]:
                current.vertices.append(_check_name(tok, line_no, "vertex id"))

        elif head == "edge":
            if current is None:
                raise ParseError(line_no, "edge outside a polygraph block")
            m = re.match(r"edge\s+(\S+)\s*:\s*(.*?)\s*->\s*(.*)\Z", line)
            if m is None:
                raise ParseError(
                    line_no, "usage: edge <id> : (<src-ids>) -> (<tgt-ids>)")
            name = _check_name(m.group(1), line_no, "edge id")
            (srcs,) = _split_groups(m.group(2), line_no, 1)
            (tgts,) = _split_groups(m.group(3), line_no, 1)
            for vid in srcs + tgts:
                _check_name(vid, line_no, "vertex id")
                pending.append((line_no, vid))
            current.edges.append(Edge(name, tuple(srcs), tuple(tgts)))

        elif head == "shape":
            close_block()
            m = re.match(r"shape\s+(\S+)\s+of\s+(\S+)\s*:\s*"
                         r"leaves\s*(\([^()]*\))\s*roots\s*(\([^()]*\))\Z",
                         line)
            if m is None:
                raise ParseError(
                    line_no, "usage: shape <name> of <polygraph> : "
                    "leaves (<ids>) roots (<ids>)")
            name = _check_name(m.group(1), line_no, "name")
            w._claim(name, line_no)
            src = m.group(2)
            if src not in w.polygraphs:
                raise ParseError(line_no, f"unknown polygraph {src!r}")
            body = w.polygraphs[src]
            (leaves,) = _split_groups(m.group(3), line_no, 1)
            (roots,) = _split_groups(m.group(4), line_no, 1)
            for vid in leaves + roots:
                if vid not in body.vertex_set:
                    raise ParseError(line_no, f"unknown vertex {vid!r}")
            w.shapes[name] = LabelledShape(body, tuple(leaves), tuple(roots))
            w.shape_sources[name] = src

        elif head == "functor":
            close_block()
            m = re.match(r"functor\s+(\S+)\s+mode\s+(\S+)\s+bounds\s+"
                         r"(\d+)\s+(\d+)\s*:\s*(.*)\Z", line)
            if m is None:
                raise ParseError(
                    line_no, "usage: functor <name> mode "
                    "(planar|symmetric) bounds <E> <N> : <shape-names...>")
            name = _check_name(m.group(1), line_no, "name")
            w._claim(name, line_no)
            mode = m.group(2)
            if mode not in MODES:
                raise ParseError(line_no, f"unknown mode {mode!r}")
            bounds = (int(m.group(3)), int(m.group(4)))
            shape_names = tuple(m.group(5).split())
            if not shape_names:
                raise ParseError(line_no, "functor needs at least one shape")
            picked = []
            for sn in shape_names:
                if sn not in w.shapes:
                    raise ParseError(line_no, f"unknown shape {sn!r}")
                picked.append(w.shapes[sn])
            try:
                w.functors[name] = from_shapes(picked, mode, bounds)
            except ValueError as exc:
                raise ParseError(line_no, f"functor {name!r}: {exc}")
            w.functor_specs[name] = FunctorSpec(mode, bounds, shape_names)

        else:
            raise ParseError(line_no, f"unknown directive {head!r}")

    close_block()
    return w


def parse_file(path: str, into: Workspace | None = None) -> Workspace:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), into)


def serialize(w: Workspace) -> str:
    """Write a workspace back out in the input grammar, sorted by name."""
    out = []
    for name in sorted(w.polygraphs):
        p = w.polygraphs[name]
        out.append(f"polygraph {name}")
        if p.vertices:
            out.append("vertex " + " ".join(p.vertices))
        for e in p.edges:
            out.append(f"edge {e.name} : ({' '.join(e.sources)}) "
                       f"-> ({' '.join(e.targets)})")
    for name in sorted(w.shapes):
        x = w.shapes[name]
        out.append(f"shape {name} of {w.shape_sources[name]} : "
                   f"leaves ({' '.join(x.leaves)}) "
                   f"roots ({' '.join(x.roots)})")
    for name in sorted(w.functor_specs):
        spec = w.functor_specs[name]
        out.append(f"functor {name} mode {spec.mode} bounds "
                   f"{spec.bounds[0]} {spec.bounds[1]} : "
                   + " ".join(spec.shape_names))
    return "\n".join(out) + "\n" if out else ""


# ---------------------------------------------------------------------------
# JSON views shared by the command-line front end


def polygraph_to_dict(p: Polygraph) -> dict:
    return {
        "vertices": list(p.vertices),
        "edges": [{"name": e.name, "sources": list(e.sources),
                   "targets": list(e.targets)} for e in p.edges],
    }


def shape_to_dict(x: LabelledShape) -> dict:
    d = polygraph_to_dict(x.body)
    d["leaves"] = list(x.leaves)
    d["roots"] = list(x.roots)
    return d


def morphism_to_dict(f) -> dict:
    return {
        "mode": f.mode,
        "vertices": dict(sorted(f.vertex_map.items())),
        "edges": {name: {"edge": im.edge,
                         "in_perm": list(im.in_perm),
                         "out_perm": list(im.out_perm)}
                  for name, im in sorted(f.edge_map.items())},
    }


def functor_to_dict(f: ShapelyFunctor, include_shapes: bool = True) -> dict:
    stages = {}
    for n, m in f.arities():
        key = f"{n},{m}"
        if include_shapes:
            stages[key] = {d: shape_to_dict(x)
                           for d, x in zip(f.stage_digests(n, m),
                                           f.stage(n, m))}
        else:
            stages[key] = list(f.stage_digests(n, m))
    return {
        "mode": f.mode,
        "bounds": [f.max_edges, f.max_arity],
        "non_degenerate": f.non_degenerate,
        "shape_count": f.shape_count,
        "stages": stages,
    }


def evaluation_to_dict(ev) -> dict:
    stages = {}
    for n, m in ev.arities():
        stages[f"{n},{m}"] = [
            {"digest": c.digest, "orbit_size": c.orbit_size,
             "sources": list(c.sources), "targets": list(c.targets),
             "rep": morphism_to_dict(c.rep)}
            for c in ev.stage(n, m)]
    return {"star": list(ev.star), "stages": stages}


def spectrum_to_dict(sp) -> dict:
    stages = {}
    for n, m in sp.arities():
        stages[f"{n},{m}"] = [
            {"digest": ent.digest,
             "shape": shape_to_dict(ent.shape),
             "group_order": ent.group.order,
             "group": [morphism_to_dict(g) for g in ent.group.elements],
             "leaf_classes": [list(c) for c in ent.leaf_classes],
             "root_classes": [list(c) for c in ent.root_classes]}
            for ent in sp.stage(n, m)]
    return {"mode": sp.mode, "bounds": list(sp.bounds),
            "star": list(sp.star), "stages": stages}


def free_structure_to_dict(fs) -> dict:
    homs = []
    for key in sorted(fs.homs):
        sources, targets = key
        homs.append({
            "sources": list(sources),
            "targets": list(targets),
            "morphisms": [{"digest": m.digest,
                           "shape": shape_to_dict(m.shape),
                           "rep": morphism_to_dict(m.rep)}
                          for m in fs.homs[key]],
        })
    return {"kind": fs.kind, "mode": fs.mode,
            "bounds": [fs.max_edges, fs.max_arity],
            "base": polygraph_to_dict(fs.base),
            "morphism_count": fs.morphism_count,
            "homs": homs}
