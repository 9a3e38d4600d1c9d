"""Flop factorization diagrams as labeled graphs.

Solid edges are morphisms pointing from the blown-up variety down to its
image and carry the label ``w`` (a w-morphism), ``c`` (blowing up a smooth
curve) or ``blowup`` (a smooth blow-up whose centre is a curve or a point).
Dashed edges are flops labeled by their diagram kind, the isomorphism
``iso``, or flips labeled by the name of the small template that factors
them.

Every figure is transcribed by hand.  ``A(k)`` and ``D(k)`` are always
unrolled through their recursive figures; ``expansion_depth`` controls how
many further levels of labeled flop and flip edges are replaced by their own
diagrams.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Mapping

SOLID_LABELS = ("w", "c", "blowup")
GENERIC_KINDS = ("A", "D", "A or D")
FIXED_KINDS = ("E6", "E7", "E8_1", "E8_2")
TEMPLATES = ("pago", "3flip_1", "3flip_2", "3flip_3", "cax2", "a2flop")

_INDEXED = re.compile(r"([AD])\((\d+)\)")
_NAME = re.compile(r"([A-Za-z]+)('?)(_.*)?")


class DiagramError(ValueError):
    """Unknown kind, bad parameter, or a malformed diagram."""


def parse_kind(kind: str, k: int | None = None) -> tuple[str, int | None]:
    """Normalise ``("A", 3)`` or ``"A(3)"`` to ``("A", 3)``; fixed kinds have ``k=None``."""
    kind = kind.strip()
    m = _INDEXED.fullmatch(kind)
    if m:
        if k is not None and k != int(m.group(2)):
            raise DiagramError(f"kind {kind} conflicts with k={k}")
        return m.group(1), int(m.group(2))
    if kind in ("A", "D"):
        if k is None:
            raise DiagramError(f"kind {kind} needs an index k")
        if k < 0:
            raise DiagramError(f"negative k={k}")
        return kind, k
    if kind in FIXED_KINDS or kind in TEMPLATES:
        return kind, None
    raise DiagramError(f"unknown diagram kind {kind!r}")


def kind_label(kind: str, k: int | None) -> str:
    return f"{kind}({k})" if k is not None else kind


def is_flop_label(label: str) -> bool:
    return label in GENERIC_KINDS or label in FIXED_KINDS or _INDEXED.fullmatch(label) is not None


@dataclass(frozen=True)
class DiagramNode:
    name: str
    annotations: Mapping[str, str] = field(default_factory=dict, compare=False, hash=False)

    def to_dict(self) -> dict:
        return {"name": self.name, "annotations": dict(sorted(self.annotations.items()))}


@dataclass(frozen=True)
class DiagramEdge:
    source: str
    target: str
    label: str

    @property
    def style(self) -> str:
        return "solid" if self.label in SOLID_LABELS else "dashed"

    @property
    def is_flip(self) -> bool:
        return self.label in TEMPLATES

    def to_dict(self) -> dict:
        return {"source": self.source, "target": self.target, "style": self.style, "label": self.label}


@dataclass(frozen=True)
class FactorizationDiagram:
    kind: str
    k: int | None
    expansion_depth: int
    nodes: tuple[DiagramNode, ...]
    edges: tuple[DiagramEdge, ...]
    endpoints: tuple[str, str] = ("X", "X'")

    @property
    def label(self) -> str:
        return kind_label(self.kind, self.k)

    def node_names(self) -> list[str]:
        return [n.name for n in self.nodes]

    def node(self, name: str) -> DiagramNode:
        for n in self.nodes:
            if n.name == name:
                return n
        raise KeyError(name)

    def solid_edges(self) -> list[DiagramEdge]:
        return [e for e in self.edges if e.style == "solid"]

    def dashed_edges(self) -> list[DiagramEdge]:
        return [e for e in self.edges if e.style == "dashed"]

    def count(self, label: str) -> int:
        return sum(1 for e in self.edges if e.label == label)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "expansion_depth": self.expansion_depth,
            "nodes": [n.to_dict() for n in self.nodes],
            "edges": [e.to_dict() for e in self.edges],
        }


class _Figure:
    """Collects nodes in first-mention order while a figure is transcribed."""

    def __init__(self):
        self.nodes: dict[str, dict] = {}
        self.edges: list[DiagramEdge] = []

    def add(self, name: str, **annotations) -> None:
        self.nodes.setdefault(name, {}).update(annotations)

    def edge(self, source: str, target: str, label: str) -> None:
        self.add(source)
        self.add(target)
        self.edges.append(DiagramEdge(source, target, label))

    def chain(self, label: str, *names: str) -> None:
        """``names[i+1] -> names[i]`` for consecutive names, as drawn right to left."""
        for tgt, src in zip(names, names[1:]):
            self.edge(src, tgt, label)

    def freeze(self, kind, k, endpoints=("X", "X'")) -> FactorizationDiagram:
        nodes = tuple(DiagramNode(n, dict(a)) for n, a in self.nodes.items())
        return FactorizationDiagram(kind, k, 0, nodes, tuple(self.edges), endpoints)


def prime(name: str) -> str:
    """Toggle the prime of a variety label: ``Y_(0,1)`` <-> ``Y'_(0,1)``."""
    prefix, dot, last = name.rpartition(".")
    m = _NAME.fullmatch(last)
    if not m:
        raise DiagramError(f"cannot prime {name!r}")
    base, p, sub = m.group(1), m.group(2), m.group(3) or ""
    return prefix + dot + base + ("" if p else "'") + sub


def _mirror(fig: _Figure) -> None:
    """Append the primed copy of every node and edge recorded so far."""
    for name, ann in list(fig.nodes.items()):
        fig.add(prime(name), **{key: prime(v) if key == "alias" else v for key, v in ann.items()})
    for e in list(fig.edges):
        fig.edge(prime(e.source), prime(e.target), e.label)


# literal figures


def _a_figure(k: int) -> FactorizationDiagram:
    f = _Figure()
    if k == 0:
        f.edge("X", "X'", "iso")
    elif k == 1:
        f.add("X")
        f.edge("Y", "X", "c")
        f.edge("Y", "X'", "c")
    else:
        f.edge("Y", "X", "c")
        f.edge("Y", "Y'", f"A({k - 1})")
        f.edge("Y'", "X'", "c")
    return f.freeze("A", k)


def _d_figure(k: int) -> FactorizationDiagram:
    f = _Figure()
    f.edge("Y_(0,1)", "Y_(1)", "c")
    f.edge("Y_(0,0)", "Y_(0,1)", "A(1)")
    f.edge("Y_(0,0)", "Y_(0)", "w")
    f.edge("Y'_(0,0)", "Y'_(0,1)", "A(1)")
    f.edge("Y'_(0,0)", "Y'_(0)", "w")
    f.edge("Y'_(0,1)", "Y'_(1)", "c")
    f.edge("Y_(0)", "Y'_(0)", "A" if k == 0 else f"D({k - 1})")
    f.edge("Y_(1)", "X", "c")
    f.edge("Y'_(1)", "X'", "c")
    return f.freeze("D", k)


def _e6_figure() -> FactorizationDiagram:
    f = _Figure()
    f.chain("c", "X", "Y_1", "Y_(0,2)", "Y_(0,1,1)")
    f.edge("Y_(0,1,0)", "Y_(0,1,1)", "A(1)")
    f.edge("Y_(0,1,0)", "Y_(0,1)", "w")
    f.edge("Y_(0,0)", "Y_(0,1)", "A(1)")
    f.edge("Z_(0,2)", "Y_(0,0)", "w")
    f.edge("Z_(0,1,1)", "Z_(0,2)", "c")
    f.edge("Z_(0,1,0)", "Z_(0,1,1)", "A(1)")
    f.edge("Z_(0,1,0)", "Z_(0,1)", "w")
    f.edge("Z_(0,0)", "Z_(0,1)", "A(1)")
    f.edge("Z_(0,0)", "Z", "w")
    _mirror(f)
    f.edge("Z", "Z'", "A or D")
    return f.freeze("E6", None)


def _e7_figure() -> FactorizationDiagram:
    f = _Figure()
    f.chain("c", "X", "Ybar", "Ytilde", "Y_(0,2,1)")
    f.edge("Y_(0,2,0)", "Y_(0,2)", "w")
    f.edge("Y_(0,2,0)", "Y_(0,2,1)", "A(1)")
    f.edge("Y_(0,1,1)", "Y_(0,2)", "c")
    f.edge("Y_(0,1,0)", "Y_(0,1)", "w")
    f.edge("Y_(0,1,0)", "Y_(0,1,1)", "A(1)")
    f.edge("Zbar_(1)", "Y_(0,1)", "w")
    f.chain("w", "Zbar_(1)", "Zbar_(0,2)")
    f.edge("Zbar_(0,1,1)", "Zbar_(0,2)", "c")
    f.edge("Zbar_(0,1,0)", "Zbar_(0,1)", "w")
    f.edge("Zbar_(0,1,0)", "Zbar_(0,1,1)", "A(1)")
    f.add("Z_(0)", alias="Zbar_(0)")
    f.edge("Z_(0)", "Zbar_(0,1)", "A(1)")
    f.edge("Z_(0)", "Z_(0,1)", "A(1)")
    f.edge("Z_(0,1,0)", "Z_(0,1)", "w")
    f.edge("Z_(0,1,0)", "Z_(0,1,1)", "A(1)")
    f.chain("w", "Y", "Y_(0,0)", "Z_(1)", "Z_(0,2)")
    f.edge("Z_(0,1,1)", "Z_(0,2)", "c")
    _mirror(f)
    f.edge("Y", "Y'", "D")
    return f.freeze("E7", None)


def _e8_lower(f: _Figure) -> None:
    """The Zbar and Ztilde ladders shared by both E8 figures, then the mirror."""
    f.edge("Z_(0,0)", "Z_(0,1)", "A(1)")
    f.edge("Zbar_(0,2)", "Z_(0,0)", "w")
    f.edge("Zbar_(0,1,2)", "Zbar_(0,2)", "w")
    f.edge("Zbar_(0,1,1,1)", "Zbar_(0,1,2)", "c")
    f.edge("Zbar_(0,1,1,0)", "Zbar_(0,1,1)", "w")
    f.edge("Zbar_(0,1,1,0)", "Zbar_(0,1,1,1)", "A(1)")
    f.edge("Zbar_(0,1,0)", "Zbar_(0,1)", "w")
    f.edge("Zbar_(0,1,0)", "Zbar_(0,1,1)", "A(1)")
    f.edge("Zbar_(0,0)", "Zbar_(0,1)", "A(1)")
    f.edge("Ztilde_(0,2)", "Zbar_(0,0)", "w")
    f.edge("Ztilde_(0,1,2)", "Ztilde_(0,2)", "w")
    f.edge("Ztilde_(0,1,1,1)", "Ztilde_(0,1,2)", "c")
    f.edge("Ztilde_(0,1,1,0)", "Ztilde_(0,1,1)", "w")
    f.edge("Ztilde_(0,1,1,0)", "Ztilde_(0,1,1,1)", "A(1)")
    f.edge("Ztilde_(0,1,0)", "Ztilde_(0,1)", "w")
    f.edge("Ztilde_(0,1,0)", "Ztilde_(0,1,1)", "A(1)")
    f.edge("Ztilde_(0,0)", "Ztilde_(0)", "w")
    f.edge("Ztilde_(0,0)", "Ztilde_(0,1)", "A(1)")
    _mirror(f)
    f.edge("Ztilde_(0)", "Ztilde'_(0)", "A or D")


def _e8_1_figure() -> FactorizationDiagram:
    f = _Figure()
    f.chain("c", "X", "Y_1", "Y_(0,2)", "Y_(0,1,1)")
    f.edge("Y_(0,1,0)", "Y_(0,1,1)", "A(1)")
    f.edge("Y_(0,1,0)", "Y_(0,1)", "w")
    f.edge("Y_(0,0)", "Y_(0,1)", "A(1)")
    f.edge("Z_(0,4)", "Y_(0,0)", "w")
    f.edge("Z_(0,3,1)", "Z_(0,4)", "c")
    f.edge("Z_(0,3,0)", "Z_(0,3)", "w")
    f.edge("Z_(0,3,0)", "Z_(0,3,1)", "A(1)")
    f.edge("Z_(0,2,1)", "Z_(0,3)", "c")
    f.edge("Z_(0,2,0)", "Z_(0,2,1)", "A(1)")
    f.edge("Z_(0,1,1,1)", "Z_(0,2,0)", "c")
    f.edge("Z_(0,1,1,0)", "Z_(0,1,1)", "w")
    f.edge("Z_(0,1,1,0)", "Z_(0,1,1,1)", "A(1)")
    f.edge("Z_(0,1,0)", "Z_(0,1)", "w")
    f.edge("Z_(0,1,0)", "Z_(0,1,1)", "A(1)")
    _e8_lower(f)
    return f.freeze("E8_1", None)


def _e8_2_figure() -> FactorizationDiagram:
    f = _Figure()
    f.chain("c", "X", "Y_1", "Y_(0,2)", "Y_(0,1,2)", "Y_(0,1,1,1)")
    f.edge("Y_(0,1,1,0)", "Y_(0,1,1,1)", "A(1)")
    f.edge("Y_(0,1,1,0)", "Y_(0,1,1)", "w")
    f.edge("Y_(0,1,0)", "Y_(0,1,1)", "A(1)")
    f.edge("Y_(0,1,0)", "Y_(0,1)", "w")
    f.edge("Y_(0,0)", "Y_(0,1)", "A(1)")
    f.edge("Z_(0,3)", "Y_(0,0)", "w")
    f.edge("Z_(0,2,1)", "Z_(0,3)", "c")
    f.edge("Z_(0,2,0)", "Z_(0,2)", "w")
    f.edge("Z_(0,2,0)", "Z_(0,2,1)", "A(1)")
    f.edge("Z_(0,1,2)", "Z_(0,2)", "w")
    f.edge("Z_(0,1,1,1)", "Z_(0,1,2)", "c")
    f.edge("Z_(0,1,1,0)", "Z_(0,1,1)", "w")
    f.edge("Z_(0,1,1,0)", "Z_(0,1,1,1)", "A(1)")
    f.edge("Z_(0,1,0)", "Z_(0,1)", "w")
    f.edge("Z_(0,1,0)", "Z_(0,1,1)", "A(1)")
    _e8_lower(f)
    return f.freeze("E8_2", None)


def _template(name: str) -> FactorizationDiagram:
    f = _Figure()
    flip = ("Y_I", "Y_(I+1)")
    if name == "pago":
        f.edge("Y_(I,0)", "Y_I", "w")
        f.edge("Y_(I,0)", "Y_(I,1)", "A(1)")
        f.edge("Y_(I,1)", "Y_(I+1)", "c")
    elif name in ("3flip_1", "3flip_3"):
        f.edge("Y_(I,1,0)", "Y_(I,1,1)", "A(1)")
        f.edge("Y_(I,1,0)", "Y_(I,1)", "w")
        f.edge("Y_(I,1,1)", "Y_(I,2)", "c")
        f.edge("Y_(I,0)", "Y_(I,1)", "A(1)")
        f.edge("Y_(I,0)", "Y_I", "w")
        f.edge("Y_(I,2)", "Y_(I+1)", "w" if name == "3flip_1" else "blowup")
        if name == "3flip_1":
            f.add("Y_(I+1)", singularity="1/2(1,1,1)")
        else:
            f.add("Y_(I+1)", singularity="smooth")
    elif name == "3flip_2":
        f.edge("Y_(I,0,0)", "Y_(I,0,1)", "A(1)")
        f.edge("Y_(I,0,0)", "Y_(I,0)", "w")
        f.edge("Y_(I,0,1)", "Y_(I,1)", "c")
        f.edge("Y_(I,0)", "Y_I", "w")
        f.edge("Y_(I,1)", "Y_(I+1)", "c")
        f.add("Y_(I+1)", singularity="smooth")
    elif name == "cax2":
        flip = ("Y", "Y'")
        f.edge("Z_(1)", "Y", "w")
        f.edge("Z_(0)", "Z_(1)", "3flip_1")
        f.edge("Z_(0)", "Z'_(0)", "A or D")
        f.edge("Z'_(0)", "Z'_(1)", "3flip_1")
        f.edge("Z'_(1)", "Y'", "w")
    elif name == "a2flop":
        flip = ("Y", "Y'")
        f.edge("Z_(1)", "Y", "w")
        f.add("Z_(0)", alias="Z'_(0)")
        f.edge("Z_(0)", "Z_(1)", "3flip_1")
        f.edge("Z_(0)", "Z'_(1)", "3flip_1")
        f.edge("Z'_(1)", "Y'", "w")
    else:
        raise DiagramError(f"unknown template {name!r}")
    return f.freeze(name, None, flip)


def small_template(name: str, expansion_depth: int = 0, choices: Mapping[str, str] | None = None):
    """One of the small flip/flop templates, optionally with its labeled edges expanded."""
    if name not in TEMPLATES:
        raise DiagramError(f"unknown template {name!r}; expected one of {', '.join(TEMPLATES)}")
    return build_diagram(name, None, expansion_depth, choices)


# expansion


def _expandable(label: str, choices: Mapping[str, str]) -> str | None:
    label = choices.get(label, label)
    if label in TEMPLATES or label in FIXED_KINDS or _INDEXED.fullmatch(label):
        return label
    return None


def expand_edge(d: FactorizationDiagram, index: int, kind: str | None = None,
                expansion_depth: int = 0, choices: Mapping[str, str] | None = None) -> FactorizationDiagram:
    """Replace edge ``index`` by the diagram of its kind, glued at the endpoints.

    The sub-diagram's endpoints become the edge's source and target; its
    other nodes are renamed ``e<index>.<name>``.  ``kind`` overrides the
    edge label, which is how a generic ``A``/``D``/``A or D`` edge is resolved.
    """
    edge = d.edges[index]
    if edge.style != "dashed" or edge.label == "iso":
        raise DiagramError(f"edge {index} ({edge.label}) is not a flop or flip")
    kind = kind or edge.label
    if _expandable(kind, {}) is None:
        raise DiagramError(f"edge {index} has generic kind {kind!r}; choose a concrete kind")
    sub = build_diagram(kind, None, expansion_depth, choices)
    return _glue(d, index, sub)


def _glue(d: FactorizationDiagram, index: int, sub: FactorizationDiagram) -> FactorizationDiagram:
    edge = d.edges[index]
    prefix = f"e{index}."
    rename = {sub.endpoints[0]: edge.source, sub.endpoints[1]: edge.target}

    def r(name: str) -> str:
        return rename.get(name, prefix + name)

    nodes = list(d.nodes)
    taken = set(d.node_names())
    for n in sub.nodes:
        if n.name in rename:
            continue
        new = r(n.name)
        if new in taken:
            raise DiagramError(f"node name clash on {new!r}")
        ann = {key: r(v) if key == "alias" else v for key, v in n.annotations.items()}
        nodes.append(DiagramNode(new, ann))
    edges = list(d.edges[:index]) + [DiagramEdge(r(e.source), r(e.target), e.label) for e in sub.edges]
    edges += list(d.edges[index + 1:])
    return FactorizationDiagram(d.kind, d.k, d.expansion_depth, tuple(nodes), tuple(edges), d.endpoints)


def _expand_all(d: FactorizationDiagram, depth: int, choices: Mapping[str, str]) -> FactorizationDiagram:
    """Expand every concrete dashed edge once, with sub-diagrams expanded to ``depth - 1``."""
    out = d
    # glue from the last edge backwards so earlier indices stay valid
    for i in reversed(range(len(d.edges))):
        e = d.edges[i]
        if e.style != "dashed" or e.label == "iso":
            continue
        kind = _expandable(e.label, choices)
        if kind is None:
            continue
        out = _glue(out, i, build_diagram(kind, None, depth - 1, choices))
    return out


def build_diagram(kind: str, k: int | None = None, expansion_depth: int = 0,
                  choices: Mapping[str, str] | None = None) -> FactorizationDiagram:
    """The factorization diagram of ``kind``.

    ``A(k)`` and ``D(k)`` come out unrolled down to ``A(1)`` and ``D(0)``;
    with ``expansion_depth > 0`` every labeled flop or flip edge is replaced
    by its own diagram, recursively.  ``choices`` maps a generic label such
    as ``"A or D"`` to the concrete kind to use when expanding it.
    """
    if expansion_depth < 0:
        raise DiagramError("expansion_depth must be non-negative")
    choices = dict(choices or {})
    base, k = parse_kind(kind, k)
    if base == "A":
        d = _a_figure(k)
        if k >= 2:
            d = _glue(d, 1, build_diagram("A", k - 1))
    elif base == "D":
        d = _d_figure(k)
        if k >= 1:
            d = _glue(d, 6, build_diagram("D", k - 1))
    elif base == "E6":
        d = _e6_figure()
    elif base == "E7":
        d = _e7_figure()
    elif base == "E8_1":
        d = _e8_1_figure()
    elif base == "E8_2":
        d = _e8_2_figure()
    else:
        d = _template(base)
    if expansion_depth:
        d = _expand_all(d, expansion_depth, choices)
    return FactorizationDiagram(d.kind, d.k, expansion_depth, d.nodes, d.edges, d.endpoints)


# structural checks


def solid_is_acyclic(d: FactorizationDiagram) -> bool:
    ts = TopologicalSorter({n: set() for n in d.node_names()})
    for e in d.solid_edges():
        ts.add(e.source, e.target)
    try:
        ts.prepare()
    except CycleError:
        return False
    return True


def _components(d: FactorizationDiagram, edges) -> list[set[str]]:
    parent = {n: n for n in d.node_names()}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        parent[find(e.source)] = find(e.target)
    groups: dict[str, set[str]] = {}
    for n in parent:
        groups.setdefault(find(n), set()).add(n)
    return list(groups.values())


def is_primed_symmetric(d: FactorizationDiagram) -> bool:
    """Whether toggling every prime maps the diagram onto itself."""
    names = set(d.node_names())
    try:
        if {prime(n) for n in names} != names:
            return False
    except DiagramError:
        return False

    def key(e: DiagramEdge):
        if e.style == "solid" or e.is_flip:
            return (e.source, e.target, e.label)
        return (frozenset((e.source, e.target)), e.label)

    edges = {key(e) for e in d.edges}
    mirrored = {key(DiagramEdge(prime(e.source), prime(e.target), e.label)) for e in d.edges}
    return edges == mirrored


def validate(d: FactorizationDiagram) -> list[str]:
    """Structural problems with ``d``; an empty list means it is well formed."""
    problems = []
    names = d.node_names()
    if len(set(names)) != len(names):
        problems.append("duplicate node names")
    known = set(names)
    for e in d.edges:
        if e.source not in known or e.target not in known:
            problems.append(f"edge {e.source} -> {e.target} references an unknown node")
        if e.style == "dashed" and not (e.label == "iso" or e.is_flip or is_flop_label(e.label)):
            problems.append(f"edge {e.source} -- {e.target} has invalid kind {e.label!r}")
    if problems:
        return problems
    if not solid_is_acyclic(d):
        problems.append("solid edges contain a cycle")
    outgoing = {e.source for e in d.solid_edges()}
    for end in d.endpoints:
        if end not in known:
            problems.append(f"endpoint {end} missing")
        elif end in outgoing:
            problems.append(f"endpoint {end} is not a sink of the solid edges")
    if len(_components(d, d.edges)) != 1:
        problems.append("diagram is disconnected")
    return problems


# flop kinds and the Atiyah rules


FLOP_TYPES = (
    (1, "cA1", ((-1, -1),)),
    (2, "cA1", None),
    (3, "cD4", ((1, -3), (-1, -2), (-1, -1))),
    (4, "cE6", ((1, -3), (0, -3), (-1, -2), (-1, -1))),
    (5, "cE7", ((1, -3), (0, -3), (-1, -2), (-1, -1))),
    (6, "cE8", ((1, -3), (0, -3), (-1, -2), (-1, -1))),
    (7, "cE8", ((1, -3), (0, -3), (0, -3), (-1, -2), (-1, -1))),
)
"""The simple smooth flop types: number, singularity of the base, normal bundle sequence."""

_FLOP_KIND = {3: "D", 4: "E6", 5: "E7", 6: "E8_1", 7: "E8_2"}


def _is_pagoda(seq: tuple) -> bool:
    return len(seq) >= 2 and seq[-1] == (-1, -1) and all(p == (0, -2) for p in seq[:-1])


def flop_type(cls, nb_sequence) -> int:
    """The row number of the simple smooth flop table matching the data."""
    name = cls if isinstance(cls, str) else cls.name
    seq = tuple((int(a), int(b)) for a, b in nb_sequence)
    for number, sing, pattern in FLOP_TYPES:
        if sing != name:
            continue
        if pattern == seq or (pattern is None and _is_pagoda(seq)):
            return number
    raise DiagramError(f"no simple smooth flop over {name} has normal bundle sequence {list(seq)}")


def select_flop_kind(cls, nb_sequence) -> str:
    """Diagram kind for a simple smooth flop.

    ``cA1`` flops give ``A(n)`` with ``n`` the sequence length.  The ``cD4``
    row does not determine the index of ``D(k)``, so the generic ``D`` is
    returned.  The two ``cE8`` rows are told apart by sequence length: four
    pairs give ``E8_1`` (three curve blow-ups out of ``X``), five give
    ``E8_2`` (four).
    """
    number = flop_type(cls, nb_sequence)
    if number in (1, 2):
        return f"A({len(nb_sequence)})"
    return _FLOP_KIND[number]


def atiyah_transform(h_dot_c: int, transversal_points: int | None = None) -> tuple[int, int | None]:
    """Intersection data after an Atiyah flop.

    ``H.C = m`` becomes ``H'.C' = -m``, and if ``H`` meets ``C``
    transversally at ``t`` points then ``H'`` has multiplicity ``t`` along
    the flopped curve.
    """
    return -h_dot_c, transversal_points


# serialization


def to_json(d: FactorizationDiagram, indent: int | None = 2) -> str:
    return json.dumps(d.to_dict(), indent=indent)


def from_dict(data: Mapping) -> FactorizationDiagram:
    nodes = tuple(DiagramNode(n["name"], dict(n.get("annotations") or {})) for n in data["nodes"])
    edges = tuple(DiagramEdge(e["source"], e["target"], e["label"]) for e in data["edges"])
    kind = data["kind"]
    ends = ("X", "X'") if kind not in TEMPLATES else _template(kind).endpoints
    return FactorizationDiagram(kind, data.get("k"), data.get("expansion_depth", 0), nodes, edges, ends)


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(d: FactorizationDiagram) -> str:
    """Graphviz text: solid morphisms, dashed flops without arrowheads, dashed flips with them."""
    lines = [f"digraph {_quote(d.label)} {{"]
    for n in d.nodes:
        if n.annotations:
            note = "; ".join(f"{k}={v}" for k, v in sorted(n.annotations.items()))
            lines.append(f"  {_quote(n.name)} [comment={_quote(note)}];")
        else:
            lines.append(f"  {_quote(n.name)};")
    for e in d.edges:
        attrs = [f"label={_quote(e.label)}"]
        if e.style == "dashed":
            attrs.append("style=dashed")
            if not e.is_flip:
                attrs.append("dir=none")
        lines.append(f"  {_quote(e.source)} -> {_quote(e.target)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
