"""Affine decision trees over a prime field, and tree-decoder inverters."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping, NamedTuple, Sequence

from .errors import MalformedTree, SparsityViolation
from .field import FnTable, PrimeField, from_field, to_field
from .inverters import AffineForm, NonAdaptiveInverter, _no_advice


@dataclass(frozen=True)
class Leaf:
    output: int  # field element


@dataclass(frozen=True)
class Node:
    """Internal node: computes <alpha, w> and follows the edge with that value."""

    alpha: Mapping[int, int]  # 1-based position -> coefficient
    children: Mapping[int, "Node | Leaf"] = field(default_factory=dict)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(k for k, c in self.alpha.items() if c)


class TreeEval(NamedTuple):
    node_path: tuple[int, ...]  # preorder ids, root = 0
    edge_path: tuple[int, ...]  # successive inner products
    leaf_value: int  # field element o of the reached leaf
    output: int  # DomainPoint from_field(o)


class AffineDecisionTree:
    """A depth-<=d, degree-p tree; every internal node has exactly p edges.

    Args:
        field: the field the labels live in.
        root: the root node or leaf.
        depth: declared depth bound d.
        q: optional bound on the union of node supports along any path.
    """

    def __init__(self, field: PrimeField, root: Node | Leaf, depth: int, q: int | None = None):
        self.field = field
        self.root = root
        self.depth = depth
        self.q = q
        self._ids: dict[int, int] = {}
        self._validate()

    def _validate(self):
        p = self.field.modulus
        counter = itertools.count()

        def walk(node, level: int, support: frozenset[int]):
            self._ids[id(node)] = next(counter)
            if isinstance(node, Leaf):
                return
            if level >= self.depth:
                raise MalformedTree(f"path exceeds declared depth {self.depth}")
            keys = set(node.children)
            if keys != set(range(p)):
                missing = sorted(set(range(p)) - keys)
                raise MalformedTree(f"node missing edges for {missing}")
            support = support | node.support
            if self.q is not None and len(support) > self.q:
                raise SparsityViolation(f"path queries {len(support)} positions, q={self.q}")
            for g in range(p):
                walk(node.children[g], level + 1, support)

        walk(self.root, 0, frozenset())

    def node_id(self, node) -> int:
        return self._ids[id(node)]

    def evaluate(self, value_at: Callable[[int], int]) -> TreeEval:
        """Walk the tree; ``value_at(pos)`` returns w_pos as a field element."""
        p = self.field.modulus
        node = self.root
        nodes = [self.node_id(node)]
        edges = []
        while isinstance(node, Node):
            g = sum(c * value_at(pos) for pos, c in node.alpha.items()) % p
            try:
                node = node.children[g]
            except KeyError as exc:
                raise MalformedTree(f"no edge labeled {g}") from exc
            edges.append(g)
            nodes.append(self.node_id(node))
        return TreeEval(tuple(nodes), tuple(edges), node.output, from_field(node.output))

    def paths_support(self) -> frozenset[int]:
        """Union of node supports over the whole tree."""
        out: set[int] = set()
        stack = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, Node):
                out |= node.support
                stack.extend(node.children.values())
        return frozenset(out)


def eval_decision_tree(tree: AffineDecisionTree, w: FnTable) -> TreeEval:
    if w.n < max(tree.paths_support(), default=0):
        raise MalformedTree("tree reads positions beyond the input length")
    return tree.evaluate(lambda pos: to_field(w(pos)))


def constant_tree(field_: PrimeField, o: int) -> AffineDecisionTree:
    return AffineDecisionTree(field_, Leaf(o % field_.modulus), depth=0)


def affine_form_tree(field_: PrimeField, form: AffineForm) -> AffineDecisionTree:
    """Depth-1 tree with root label alpha and leaves o_g = g + beta."""
    p = field_.modulus
    children = {g: Leaf((g + form.beta) % p) for g in range(p)}
    return AffineDecisionTree(field_, Node(dict(form.alpha), children), depth=1)


def tree_inverter(
    field_: PrimeField,
    trees: Callable[[int], AffineDecisionTree],
    queries: Callable[[int], Sequence[int]],
    q: int,
    descriptor: Mapping | None = None,
) -> NonAdaptiveInverter:
    """Zero-advice non-adaptive inverter with a depth-d affine decision tree decoder.

    Every node label of ``trees(y)`` must be supported inside ``queries(y)``.
    """
    n = field_.modulus

    def select(y: int, advice: str) -> tuple[int, ...]:
        pos = tuple(queries(y))
        if len(pos) != q:
            raise SparsityViolation(f"query selector returned {len(pos)} positions, q={q}")
        return pos

    def decode(y: int, advice: str, answers: tuple[int, ...]) -> int:
        known = {pos: to_field(a) for pos, a in zip(select(y, advice), answers)}

        def value_at(pos: int) -> int:
            if pos not in known:
                raise SparsityViolation(f"tree reads unqueried position {pos}")
            return known[pos]

        return trees(y).evaluate(value_at).output

    return NonAdaptiveInverter(n, 0, q, _no_advice, select, decode, None, dict(descriptor or {"kind": "tree"}))
