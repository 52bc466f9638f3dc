"""String diagrams for the data-service fragment.

Diagrams are terms built from identities, user boxes, copy, delete,
compare and symmetry under sequential (``>>``) and parallel (``@``)
composition. Two tools decide equality:

* :func:`spider_normalize` computes the spider normal form of a diagram
  without boxes: the partition of its boundary ports into connected
  components of the wiring. Under the comonoid, semigroup and Frobenius
  laws (with ``copy >> compare = id``) that partition is a complete
  invariant.
* :func:`finrel_eval` interprets a diagram as a relation between tuples
  over a finite carrier. It is the semantic oracle for everything else.

>>> A = "A"
>>> spider_normalize(Copy(A) >> (Id((A,)) @ Copy(A))) == spider_normalize(Copy(A) >> (Copy(A) @ Id((A,))))
True
>>> finrel_eval(Copy(A) >> Compare(A), 3) == FinRel.identity(3, 1)
True
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence, Union

TypeVector = tuple[str, ...]


class DiagramError(ValueError):
    pass


class UnsupportedFragment(DiagramError):
    """The diagram contains boxes, which spider normalisation cannot handle."""


class Diagram:
    """Base class; subclasses are immutable terms with ``dom`` and ``cod``."""

    dom: TypeVector
    cod: TypeVector

    def __rshift__(self, other: Diagram) -> Diagram:
        return seq(self, other)

    def __matmul__(self, other: Diagram) -> Diagram:
        return par(self, other)


@dataclass(frozen=True)
class Id(Diagram):
    wires: TypeVector = ()

    @property
    def dom(self) -> TypeVector:
        return self.wires

    @property
    def cod(self) -> TypeVector:
        return self.wires


@dataclass(frozen=True)
class Gen(Diagram):
    name: str
    dom: TypeVector
    cod: TypeVector


@dataclass(frozen=True)
class Copy(Diagram):
    base: str

    @property
    def dom(self) -> TypeVector:
        return (self.base,)

    @property
    def cod(self) -> TypeVector:
        return (self.base, self.base)


@dataclass(frozen=True)
class Delete(Diagram):
    base: str

    @property
    def dom(self) -> TypeVector:
        return (self.base,)

    @property
    def cod(self) -> TypeVector:
        return ()


@dataclass(frozen=True)
class Compare(Diagram):
    base: str

    @property
    def dom(self) -> TypeVector:
        return (self.base, self.base)

    @property
    def cod(self) -> TypeVector:
        return (self.base,)


@dataclass(frozen=True)
class Swap(Diagram):
    left: str
    right: str

    @property
    def dom(self) -> TypeVector:
        return (self.left, self.right)

    @property
    def cod(self) -> TypeVector:
        return (self.right, self.left)


@dataclass(frozen=True)
class Seq(Diagram):
    first: Diagram
    second: Diagram
    dom: TypeVector = field(init=False)
    cod: TypeVector = field(init=False)

    def __post_init__(self):
        if self.first.cod != self.second.dom:
            raise DiagramError(f"boundary mismatch: {self.first.cod} vs {self.second.dom}")
        object.__setattr__(self, "dom", self.first.dom)
        object.__setattr__(self, "cod", self.second.cod)


@dataclass(frozen=True)
class Par(Diagram):
    top: Diagram
    bottom: Diagram
    dom: TypeVector = field(init=False)
    cod: TypeVector = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "dom", self.top.dom + self.bottom.dom)
        object.__setattr__(self, "cod", self.top.cod + self.bottom.cod)


def seq(d1: Diagram, d2: Diagram) -> Diagram:
    """Sequential composition; raises :class:`DiagramError` on a boundary mismatch."""
    return Seq(d1, d2)


def par(d1: Diagram, d2: Diagram) -> Diagram:
    return Par(d1, d2)


def seq_all(diagrams: Sequence[Diagram]) -> Diagram:
    if not diagrams:
        raise DiagramError("empty composite")
    out = diagrams[0]
    for d in diagrams[1:]:
        out = Seq(out, d)
    return out


def par_all(diagrams: Sequence[Diagram]) -> Diagram:
    if not diagrams:
        return Id(())
    out = diagrams[0]
    for d in diagrams[1:]:
        out = Par(out, d)
    return out


def ids(base: str, n: int) -> Id:
    return Id((base,) * n)


def gens(d: Diagram) -> Iterable[Gen]:
    stack = [d]
    while stack:
        d = stack.pop()
        if isinstance(d, Gen):
            yield d
        elif isinstance(d, Seq):
            stack += [d.first, d.second]
        elif isinstance(d, Par):
            stack += [d.top, d.bottom]


def count_generators(d: Diagram) -> int:
    """Number of copy/delete/compare/swap/box nodes."""
    if isinstance(d, Seq):
        return count_generators(d.first) + count_generators(d.second)
    if isinstance(d, Par):
        return count_generators(d.top) + count_generators(d.bottom)
    return 0 if isinstance(d, Id) else 1


# -- spider normal form -------------------------------------------------------

class _UnionFind:
    def __init__(self):
        self.parent: list[int] = []

    def make(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


Port = tuple[str, int]


@dataclass(frozen=True)
class SpiderNF:
    """Partition of the ports ``("in", i)`` / ``("out", j)`` into spiders.

    Blocks are sorted tuples of ports, inputs first, and the block list is
    sorted, so equal partitions compare equal.
    """

    m: int
    n: int
    blocks: tuple[tuple[Port, ...], ...]
    types: tuple[TypeVector, TypeVector] = ((), ())

    def __post_init__(self):
        seen = [p for b in self.blocks for p in b]
        expected = [("in", i) for i in range(self.m)] + [("out", j) for j in range(self.n)]
        if sorted(seen) != sorted(expected) or len(seen) != len(set(seen)):
            raise DiagramError("blocks must partition the boundary ports")
        if any(not any(p[0] == "in" for p in b) for b in self.blocks):
            raise DiagramError("every spider needs at least one input leg")

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n,
                "blocks": [[f"{side}{k}" for side, k in b] for b in self.blocks]}


def _canonical_blocks(groups: Iterable[Iterable[Port]]) -> tuple[tuple[Port, ...], ...]:
    def key(p: Port):
        return (p[0] != "in", p[1])

    return tuple(sorted((tuple(sorted(g, key=key)) for g in groups), key=lambda b: [key(p) for p in b]))


def spider_normalize(d: Diagram) -> SpiderNF:
    """Partition boundary ports into connected components of the wiring."""
    uf = _UnionFind()

    def wire(d: Diagram, ins: list[int]) -> list[int]:
        if isinstance(d, Id):
            return ins
        if isinstance(d, Copy):
            return [ins[0], ins[0]]
        if isinstance(d, Delete):
            return []
        if isinstance(d, Compare):
            uf.union(ins[0], ins[1])
            return [ins[0]]
        if isinstance(d, Swap):
            return [ins[1], ins[0]]
        if isinstance(d, Seq):
            return wire(d.second, wire(d.first, ins))
        if isinstance(d, Par):
            k = len(d.top.dom)
            return wire(d.top, ins[:k]) + wire(d.bottom, ins[k:])
        if isinstance(d, Gen):
            raise UnsupportedFragment(f"box {d.name!r} is outside the spider fragment")
        raise TypeError(f"not a diagram: {d!r}")

    inputs = [uf.make() for _ in d.dom]
    outs = wire(d, list(inputs))
    groups: dict[int, list[Port]] = defaultdict(list)
    for i, node in enumerate(inputs):
        groups[uf.find(node)].append(("in", i))
    for j, node in enumerate(outs):
        groups[uf.find(node)].append(("out", j))
    return SpiderNF(len(d.dom), len(d.cod), _canonical_blocks(groups.values()), (d.dom, d.cod))


def permutation(wires: TypeVector, perm: Sequence[int]) -> Diagram:
    """Diagram sending input ``perm[j]`` to output ``j``, built from adjacent swaps."""
    n = len(wires)
    if sorted(perm) != list(range(n)):
        raise DiagramError(f"not a permutation: {perm}")
    current = list(range(n))  # current[j] = which input sits at position j
    types = list(wires)
    layers: list[Diagram] = []
    target = list(perm)
    # bubble sort current into target order
    for _ in range(n):
        for j in range(n - 1):
            if target.index(current[j]) > target.index(current[j + 1]):
                layers.append(Id(tuple(types[:j])) @ Swap(types[j], types[j + 1])
                              @ Id(tuple(types[j + 2:])))
                current[j], current[j + 1] = current[j + 1], current[j]
                types[j], types[j + 1] = types[j + 1], types[j]
    return seq_all(layers) if layers else Id(tuple(wires))


def _spider(base: str, k: int, l: int) -> Diagram:
    """The connected spider with k >= 1 inputs and l outputs: compares, then copies."""
    merge: Diagram = ids(base, k)
    for width in range(k, 1, -1):
        merge = merge >> (Compare(base) @ ids(base, width - 2))
    if l == 0:
        return merge >> Delete(base)
    split: Diagram = Id((base,))
    for width in range(1, l):
        split = split >> (Copy(base) @ ids(base, width - 1))
    return merge >> split


def spider_rebuild(nf: SpiderNF) -> Diagram:
    """Canonical diagram for a normal form: permute, one spider per block, permute."""
    dom, cod = nf.types
    if not dom and nf.m:
        raise DiagramError("normal form carries no wire types")
    in_order = [p[1] for b in nf.blocks for p in b if p[0] == "in"]
    out_order = [p[1] for b in nf.blocks for p in b if p[0] == "out"]
    pre = permutation(dom, in_order)
    middle = par_all([_spider(dom[[p for p in b if p[0] == "in"][0][1]],
                              sum(p[0] == "in" for p in b), sum(p[0] == "out" for p in b))
                      for b in nf.blocks])
    mid_cod = tuple(cod[j] for j in out_order)
    inverse = [0] * len(out_order)
    for pos, j in enumerate(out_order):
        inverse[j] = pos
    post = permutation(mid_cod, inverse)
    return pre >> middle >> post


# -- finite relations ---------------------------------------------------------

Row = tuple[int, ...]


@dataclass(frozen=True)
class FinRel:
    carrier_size: int
    dom_arity: int
    cod_arity: int
    pairs: frozenset[tuple[Row, Row]]

    def __post_init__(self):
        if self.carrier_size < 1:
            raise DiagramError("carrier must be non-empty")
        for x, y in self.pairs:
            if len(x) != self.dom_arity or len(y) != self.cod_arity:
                raise DiagramError("tuple arity does not match the relation")
            if any(not 0 <= v < self.carrier_size for v in x + y):
                raise DiagramError("tuple entry outside the carrier")

    @classmethod
    def of(cls, carrier: int, dom: int, cod: int, pairs: Iterable) -> FinRel:
        return cls(carrier, dom, cod, frozenset((tuple(x), tuple(y)) for x, y in pairs))

    @classmethod
    def identity(cls, carrier: int, arity: int) -> FinRel:
        return cls(carrier, arity, arity,
                   frozenset((t, t) for t in itertools.product(range(carrier), repeat=arity)))

    def then(self, other: FinRel) -> FinRel:
        """Relational composition, ``self`` first."""
        if self.cod_arity != other.dom_arity or self.carrier_size != other.carrier_size:
            raise DiagramError("relations do not compose")
        by_mid: dict[Row, list[Row]] = defaultdict(list)
        for y, z in other.pairs:
            by_mid[y].append(z)
        return FinRel(self.carrier_size, self.dom_arity, other.cod_arity,
                      frozenset((x, z) for x, y in self.pairs for z in by_mid.get(y, ())))

    def tensor(self, other: FinRel) -> FinRel:
        if self.carrier_size != other.carrier_size:
            raise DiagramError("carriers differ")
        return FinRel(self.carrier_size, self.dom_arity + other.dom_arity,
                      self.cod_arity + other.cod_arity,
                      frozenset((x1 + x2, y1 + y2) for x1, y1 in self.pairs for x2, y2 in other.pairs))

    def to_json(self) -> dict:
        return {"carrier": self.carrier_size, "dom": self.dom_arity, "cod": self.cod_arity,
                "pairs": sorted([list(x), list(y)] for x, y in self.pairs)}


def finrel_eval(d: Diagram, carrier_size: int, env: Mapping[str, FinRel] | None = None) -> FinRel:
    """Relational semantics: copy is the diagonal, compare its converse."""
    env = env or {}
    k = carrier_size
    values = range(k)

    def ev(d: Diagram) -> FinRel:
        if isinstance(d, Id):
            return FinRel.identity(k, len(d.wires))
        if isinstance(d, Copy):
            return FinRel(k, 1, 2, frozenset(((x,), (x, x)) for x in values))
        if isinstance(d, Delete):
            return FinRel(k, 1, 0, frozenset(((x,), ()) for x in values))
        if isinstance(d, Compare):
            return FinRel(k, 2, 1, frozenset(((x, x), (x,)) for x in values))
        if isinstance(d, Swap):
            return FinRel(k, 2, 2, frozenset(((x, y), (y, x)) for x in values for y in values))
        if isinstance(d, Seq):
            return ev(d.first).then(ev(d.second))
        if isinstance(d, Par):
            return ev(d.top).tensor(ev(d.bottom))
        if isinstance(d, Gen):
            if d.name not in env:
                raise DiagramError(f"unbound generator {d.name!r}")
            r = env[d.name]
            if (r.dom_arity, r.cod_arity) != (len(d.dom), len(d.cod)) or r.carrier_size != k:
                raise DiagramError(f"generator {d.name!r} bound to a relation of the wrong shape")
            return r
        raise TypeError(f"not a diagram: {d!r}")

    return ev(d)


def is_function(r: FinRel) -> bool:
    """Single-valued and total on the whole carrier power."""
    image: dict[Row, Row] = {}
    for x, y in r.pairs:
        if image.setdefault(x, y) != y:
            return False
    return len(image) == r.carrier_size ** r.dom_arity


def all_relations(carrier: int, dom: int, cod: int) -> Iterable[FinRel]:
    """Every relation of the given shape; only sensible for tiny shapes."""
    cells = [(x, y) for x in itertools.product(range(carrier), repeat=dom)
             for y in itertools.product(range(carrier), repeat=cod)]
    for mask in range(1 << len(cells)):
        yield FinRel(carrier, dom, cod, frozenset(c for i, c in enumerate(cells) if mask >> i & 1))


@dataclass(frozen=True)
class Equality:
    """Result of :func:`diagrams_equal`; ``oracle`` marks a semantic approximation."""

    equal: bool
    oracle: bool

    def __bool__(self) -> bool:
        return self.equal


EnvSource = Mapping[str, Union[Sequence[FinRel], Callable[[int], Iterable[FinRel]]]]

_ENUMERATION_LIMIT = 9


def diagrams_equal(d1: Diagram, d2: Diagram, env: EnvSource | None = None,
                   carriers: Sequence[int] = (1, 2, 3)) -> Equality:
    """Decide ``d1 = d2``.

    Box-free diagrams are compared by spider normal form, which is exact.
    Otherwise both sides are evaluated as relations at each carrier size
    under every combination of candidate interpretations for the boxes;
    ``env`` maps a box name to candidates (a sequence, or a function of the
    carrier size). Boxes missing from ``env`` range over all relations of
    their shape when that is small enough.
    """
    if (d1.dom, d1.cod) != (d2.dom, d2.cod):
        raise DiagramError("diagrams have different boundaries")
    boxes = {g.name: g for g in itertools.chain(gens(d1), gens(d2))}
    if not boxes:
        return Equality(spider_normalize(d1) == spider_normalize(d2), False)
    env = env or {}
    for k in carriers:
        choices = []
        for name, g in sorted(boxes.items()):
            src = env.get(name)
            if src is None:
                if k ** (len(g.dom) + len(g.cod)) > _ENUMERATION_LIMIT:
                    raise DiagramError(f"supply candidate relations for box {name!r}")
                cands = list(all_relations(k, len(g.dom), len(g.cod)))
            else:
                cands = list(src(k) if callable(src) else [r for r in src if r.carrier_size == k])
            choices.append([(name, r) for r in cands])
        for combo in itertools.product(*choices):
            assignment = dict(combo)
            if finrel_eval(d1, k, assignment) != finrel_eval(d2, k, assignment):
                return Equality(False, True)
    return Equality(True, True)


# -- JSON ---------------------------------------------------------------------

def diagram_from_json(data) -> Diagram:
    """Nested term form, e.g. ``{"kind": "seq", "parts": [{"kind": "copy", "base": "A"}, ...]}``."""
    kind = data.get("kind")
    if kind in ("seq", "par"):
        parts = [diagram_from_json(p) for p in data["parts"]]
        return seq_all(parts) if kind == "seq" else par_all(parts)
    if kind == "id":
        return Id(tuple(data.get("wires", [])))
    if kind == "copy":
        return Copy(data["base"])
    if kind == "delete":
        return Delete(data["base"])
    if kind == "compare":
        return Compare(data["base"])
    if kind == "swap":
        left, right = data["bases"]
        return Swap(left, right)
    if kind == "gen":
        return Gen(data["name"], tuple(data["dom"]), tuple(data["cod"]))
    raise DiagramError(f"unknown diagram node kind {kind!r}")


def diagram_to_json(d: Diagram) -> dict:
    if isinstance(d, Seq):
        return {"kind": "seq", "parts": [diagram_to_json(d.first), diagram_to_json(d.second)]}
    if isinstance(d, Par):
        return {"kind": "par", "parts": [diagram_to_json(d.top), diagram_to_json(d.bottom)]}
    if isinstance(d, Id):
        return {"kind": "id", "wires": list(d.wires)}
    if isinstance(d, Swap):
        return {"kind": "swap", "bases": [d.left, d.right]}
    if isinstance(d, Gen):
        return {"kind": "gen", "name": d.name, "dom": list(d.dom), "cod": list(d.cod)}
    return {"kind": type(d).__name__.lower(), "base": d.base}


def finrel_from_json(data) -> FinRel:
    return FinRel.of(data["carrier"], data["dom"], data["cod"], data["pairs"])
