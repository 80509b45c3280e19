"""Cognitive complexity of a method and of extractable statement sequences.

The complexity of a method is the sum of two parts: an *inherent* component
(+1 for every contributing control-flow construct) and a *nesting* component
(each construct that pays the nesting penalty additionally adds its depth).

For a contiguous run of sibling statements -- the unit an extract-method
refactoring can lift out -- four quantities describe how the run interacts
with complexity:

* ``lam``    nesting depth of the run inside the method (0 at top level);
* ``iota``   accumulated inherent component of everything in the run;
* ``nu``     accumulated nesting component measured relative to the run,
             i.e. the nesting the run would keep if it became a method body;
* ``mu``     number of penalty-paying constructs in the run that sit at a
             positive depth in the original method.

From these, ``nmcc = iota + nu`` is the complexity the run would have as a
freshly extracted method, and :func:`ccr` gives the complexity that
extracting a nested run removes from a host sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .tree import AstNode, NodeKind, TreeError, node_depths, parent_map, require_method_root


@dataclass(frozen=True)
class SequenceMetrics:
    """Complexity quantities of one contiguous sibling run.

    ``nmcc == iota + nu`` holds by construction.
    """

    lam: int
    iota: int
    nu: int
    mu: int

    @property
    def nmcc(self) -> int:
        return self.iota + self.nu


def compute_cc(method: AstNode) -> int:
    """Total cognitive complexity of a method tree.

    Sums, over every contributing node, 1 plus the node's depth when the
    node pays the nesting penalty.  Rejects trees whose root is not METHOD.
    """
    require_method_root(method)
    depths = node_depths(method)
    total = 0
    for node in method.walk():
        if node.kind.adds_inherent:
            total += 1
            if node.kind.pays_nesting_penalty:
                total += depths[id(node)]
    return total


def sequence_metrics(method: AstNode, seq: Sequence[AstNode]) -> SequenceMetrics:
    """Metrics of a contiguous run of siblings inside ``method``.

    ``seq`` may also be ``[method]`` itself, which yields the whole-method
    metrics (``lam == 0`` and ``nmcc == compute_cc(method)``).

    Raises :class:`~ccreduce.tree.TreeError` when the run is empty, the
    nodes are not siblings in document order, or they do not belong to the
    method tree.
    """
    require_method_root(method)
    if not seq:
        raise TreeError("empty sequence")
    _check_contiguous_siblings(method, seq)
    depths = node_depths(method)
    lam = depths[id(seq[0])]

    iota = 0
    nu = 0
    mu = 0
    for top in seq:
        for node in top.walk():
            if not node.kind.adds_inherent:
                continue
            iota += 1
            if node.kind.pays_nesting_penalty:
                depth = depths[id(node)]
                nu += depth - lam
                if depth > 0:
                    mu += 1
    return SequenceMetrics(lam=lam, iota=iota, nu=nu, mu=mu)


def ccr(child: SequenceMetrics, parent_lambda: int) -> int:
    """Complexity removed from a host sequence when the child run is extracted.

    ``child`` must be nested in (or level with) the host, i.e.
    ``child.lam >= parent_lambda``.
    """
    if child.lam < parent_lambda:
        raise ValueError(
            f"child depth {child.lam} is above the host depth {parent_lambda}"
        )
    return child.iota + child.nu + (child.lam - parent_lambda) * child.mu


def _check_contiguous_siblings(method: AstNode, seq: Sequence[AstNode]) -> None:
    if len(seq) == 1 and seq[0] is method:
        return
    parents = parent_map(method)
    first_id = id(seq[0])
    if first_id not in parents:
        raise TreeError("sequence node is not part of the method tree")
    parent = parents[first_id]
    if parent is None:
        raise TreeError("the method root can only form the whole-method sequence")
    siblings = parent.children
    try:
        start = next(i for i, child in enumerate(siblings) if child is seq[0])
    except StopIteration:  # pragma: no cover - parents comes from the tree
        raise TreeError("sequence node is not part of the method tree")
    if start + len(seq) > len(siblings):
        raise TreeError("sequence extends past the end of its block")
    for offset, node in enumerate(seq):
        if siblings[start + offset] is not node:
            raise TreeError("sequence nodes are not contiguous siblings")
