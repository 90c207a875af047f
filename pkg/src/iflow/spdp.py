"""Pseudopolynomial worst-value computation on two-terminal series-parallel graphs.

Each node of the decomposition tree carries a :class:`ComponentData` table:
the worst optimal cost for every flow amount 0..f through the component,
the largest amount transportable under every scenario (``r_lo``) and the
largest amount transportable under some scenario (``r_hi``). Leaves,
serial and parallel compositions each have a closed-form combination
rule; the whole run costs O(m f^2).
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

from .model import Arc, Instance

NEG_INF = float("-inf")


class NotSeriesParallel(Exception):
    """The instance admits no two-terminal series-parallel decomposition."""


class DisconnectedInstance(ValueError):
    pass


@dataclass(frozen=True)
class SPTree:
    kind: str  # "arc" | "serial" | "parallel"
    source: int
    sink: int
    arc: Optional[int] = None
    left: Optional["SPTree"] = None
    right: Optional["SPTree"] = None

    def leaves(self) -> list[int]:
        out, stack = [], [self]
        while stack:
            node = stack.pop()
            if node.kind == "arc":
                out.append(node.arc)
            else:
                stack.append(node.right)
                stack.append(node.left)
        return out

    def __str__(self) -> str:
        return format_sptree(self)


@dataclass(frozen=True)
class ComponentData:
    d: tuple
    r_lo: int
    r_hi: int

    def check(self) -> list[str]:
        """Violated table invariants (empty when consistent)."""
        problems = []
        if self.d[0] != 0:
            problems.append("d(0) != 0")
        finite = [k for k, v in enumerate(self.d) if v != NEG_INF]
        if max(finite) != self.r_hi:
            problems.append(f"r_hi {self.r_hi} != largest finite amount {max(finite)}")
        if finite != list(range(len(finite))):
            problems.append("finite amounts are not a prefix")
        if self.r_lo > self.r_hi:
            problems.append("r_lo > r_hi")
        return problems


def _post_order(root: SPTree):
    """Children-before-parents order without recursion."""
    order, stack = [], [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if node.kind == "arc" or expanded:
            order.append(node)
        else:
            stack.append((node, True))
            stack.append((node.right, False))
            stack.append((node.left, False))
    return order


def _check_connected(instance: Instance):
    adj = defaultdict(set)
    for a in instance.arcs:
        adj[a.tail].add(a.head)
        adj[a.head].add(a.tail)
    seen, stack = {instance.source}, [instance.source]
    while stack:
        v = stack.pop()
        for w in adj[v] - seen:
            seen.add(w)
            stack.append(w)
    if len(seen) != instance.num_nodes:
        missing = sorted(set(instance.nodes) - seen)
        raise DisconnectedInstance(f"nodes {missing} are not connected to the source")


def sp_decompose(instance: Instance) -> SPTree | None:
    """Decomposition tree by series/parallel reduction, or None if none exists.

    Parallel bundles (same tail and head) are merged, and every inner node
    with exactly one incoming and one outgoing edge is contracted. The graph
    is series-parallel iff this ends in a single source->sink edge.
    """
    _check_connected(instance)
    s, t = instance.source, instance.sink
    # edge key -> (tail, head, tree); keys keep creation order for determinism
    edges: dict[int, tuple[int, int, SPTree]] = {
        a.id: (a.tail, a.head, SPTree("arc", a.tail, a.head, arc=a.id)) for a in instance.arcs
    }
    next_key = instance.num_arcs

    changed = True
    while changed and len(edges) > 1:
        changed = False
        bundles = defaultdict(list)
        for key, (u, v, _) in edges.items():
            bundles[(u, v)].append(key)
        for (u, v), keys in bundles.items():
            if len(keys) < 2:
                continue
            tree = edges.pop(keys[0])[2]
            for key in keys[1:]:
                tree = SPTree("parallel", u, v, left=tree, right=edges.pop(key)[2])
            edges[next_key] = (u, v, tree)
            next_key += 1
            changed = True

        incoming, outgoing = defaultdict(list), defaultdict(list)
        for key, (u, v, _) in edges.items():
            outgoing[u].append(key)
            incoming[v].append(key)
        for w in sorted(set(incoming) | set(outgoing)):
            if w in (s, t) or len(incoming[w]) != 1 or len(outgoing[w]) != 1:
                continue
            e_in, e_out = incoming[w][0], outgoing[w][0]
            if e_in not in edges or e_out not in edges:
                continue  # touched earlier in this sweep
            u, _, left = edges[e_in]
            _, v, right = edges[e_out]
            if u == v:
                continue
            del edges[e_in], edges[e_out]
            edges[next_key] = (u, v, SPTree("serial", u, v, left=left, right=right))
            next_key += 1
            changed = True

    if len(edges) != 1:
        return None
    u, v, tree = next(iter(edges.values()))
    if (u, v) != (s, t):
        return None
    return tree


_TOKEN = re.compile(r"\s*(\d+|[SP]\(|,|\))")


def parse_sptree(text: str, instance: Instance) -> SPTree:
    """Parse ``T := <arc_id> | S(T,T) | P(T,T)`` and check it against the instance."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad SP expression near position {pos}: {text[pos:pos + 10]!r}")
        tokens.append(m.group(1))
        pos = m.end()

    idx = 0

    def expect(tok):
        nonlocal idx
        if idx >= len(tokens) or tokens[idx] != tok:
            raise ValueError(f"expected {tok!r} in SP expression")
        idx += 1

    def node() -> tuple[SPTree, set]:
        nonlocal idx
        if idx >= len(tokens):
            raise ValueError("truncated SP expression")
        tok = tokens[idx]
        idx += 1
        if tok.isdigit():
            e = int(tok)
            if e >= instance.num_arcs:
                raise ValueError(f"arc id {e} out of range")
            a = instance.arcs[e]
            return SPTree("arc", a.tail, a.head, arc=e), {a.tail, a.head}
        if tok not in ("S(", "P("):
            raise ValueError(f"unexpected token {tok!r}")
        left, ln = node()
        expect(",")
        right, rn = node()
        expect(")")
        if tok == "S(":
            if left.sink != right.source:
                raise ValueError(f"serial composition: sink {left.sink} != source {right.source}")
            if ln & rn != {left.sink}:
                raise ValueError("serial components overlap beyond the merged node")
            return SPTree("serial", left.source, right.sink, left=left, right=right), ln | rn
        if (left.source, left.sink) != (right.source, right.sink):
            raise ValueError("parallel composition: terminals differ")
        if ln & rn != {left.source, left.sink}:
            raise ValueError("parallel components overlap beyond the terminals")
        return SPTree("parallel", left.source, left.sink, left=left, right=right), ln | rn

    tree, _ = node()
    if idx != len(tokens):
        raise ValueError("trailing tokens in SP expression")
    leaves = tree.leaves()
    if sorted(leaves) != list(range(instance.num_arcs)):
        raise ValueError("SP expression must use every arc exactly once")
    if (tree.source, tree.sink) != (instance.source, instance.sink):
        raise ValueError("SP expression terminals differ from instance source/sink")
    return tree


def format_sptree(tree: SPTree) -> str:
    if tree.kind == "arc":
        return str(tree.arc)
    tag = "S" if tree.kind == "serial" else "P"
    return f"{tag}({format_sptree(tree.left)},{format_sptree(tree.right)})"


def leaf_table(arc: Arc, f: int) -> ComponentData:
    cap = min(arc.upper, f)
    d = tuple(arc.cost * k if k <= cap else NEG_INF for k in range(f + 1))
    return ComponentData(d, min(arc.lower, f), cap)


def serial_table(left: ComponentData, right: ComponentData, f: int) -> ComponentData:
    d = tuple(a + b for a, b in zip(left.d, right.d))
    return ComponentData(d, min(left.r_lo, right.r_lo), min(left.r_hi, right.r_hi))


def parallel_table(
    left: ComponentData, right: ComponentData, f: int, stats: dict | None = None
) -> ComponentData:
    d1, d2 = left.d, right.d
    lo1, lo2, hi1, hi2 = left.r_lo, right.r_lo, left.r_hi, right.r_hi
    d = [NEG_INF] * (f + 1)
    ops = 0
    for k in range(f + 1):
        if hi1 + hi2 < k:
            continue
        if lo1 + lo2 > k:
            # k fits under every scenario: cheapest split within the always-transportable parts
            a, b = max(k - lo2, 0), min(lo1, k)
            d[k] = min(d1[j] + d2[k - j] for j in range(a, b + 1))
        else:
            a, b = max(lo1, k - hi2), min(k - lo2, hi1)
            d[k] = max(d1[j] + d2[k - j] for j in range(a, b + 1))
        ops += b - a + 1
    if stats is not None:
        stats["parallel_ops"] = stats.get("parallel_ops", 0) + ops
    return ComponentData(tuple(d), min(lo1 + lo2, f), min(hi1 + hi2, f))


def component_tables(instance: Instance, tree: SPTree, stats: dict | None = None) -> dict:
    """Tables for every tree node, keyed by ``id(node)``."""
    f = instance.flow_amount
    tables = {}
    for node in _post_order(tree):
        if node.kind == "arc":
            tables[id(node)] = leaf_table(instance.arcs[node.arc], f)
        elif node.kind == "serial":
            tables[id(node)] = serial_table(tables[id(node.left)], tables[id(node.right)], f)
        else:
            tables[id(node)] = parallel_table(
                tables[id(node.left)], tables[id(node.right)], f, stats
            )
    return tables


def worst_value_sp(
    instance: Instance, tree: SPTree | None = None, stats: dict | None = None
) -> int | None:
    """Worst optimal value, or None when no scenario admits a flow of size f.

    Raises NotSeriesParallel when no decomposition exists and none is given.
    """
    if tree is None:
        tree = sp_decompose(instance)
        if tree is None:
            raise NotSeriesParallel("instance is not two-terminal series-parallel")
    root = component_tables(instance, tree, stats)[id(tree)]
    value = root.d[instance.flow_amount]
    return None if value == NEG_INF else int(value)
