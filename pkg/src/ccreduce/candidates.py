"""Enumeration of applicable extract-method candidates from a method tree.

A candidate is a contiguous run of sibling statements inside any block
(the method body, a loop body, a branch body, ...) that

* does not split an if / else-if / else chain (the chain moves as a unit;
  the single exception is a whole else branch on its own, which is
  enumerable but tagged so callers can treat it specially),
* removes a strictly positive amount of complexity from the method, and
* is not the entire method body (that is the method itself, id 0).

The resulting cache carries, per candidate, the line count it spans, its
complexity as a new method, its offsets, every ancestor arc with the
complexity it removes from that ancestor, and every overlap conflict.
"""

from __future__ import annotations

from .cache import ConflictPair, ExtractionCandidate, NestingArc, RefactoringCache
from .metrics import ccr, compute_cc, sequence_metrics
from .tree import AstNode, NodeKind, require_method_root

_CHAIN_TAIL = (NodeKind.ELSE_IF, NodeKind.ELSE)
_CHAIN_HEAD = (NodeKind.IF, NodeKind.ELSE_IF)


def count_upper_bound(n: int) -> int:
    """Upper bound on candidate runs for a method with ``n`` statements.

    Every run is fixed by choosing its first and last statement, allowing
    both to coincide: n * (n + 1) / 2.
    """
    if n < 0:
        raise ValueError("statement count must be non-negative")
    return n * (n + 1) // 2


def enumerate_feasible(method: AstNode, method_name: str = "method") -> RefactoringCache:
    """Build the refactoring cache of a method tree.

    Candidate ids are assigned in document order (by start offset, outer
    runs before inner ones on ties); id 0 is the method itself.
    """
    require_method_root(method)

    runs: list[tuple[tuple[AstNode, ...], bool]] = []
    for node in method.walk():
        if not node.children:
            continue
        siblings = node.children
        whole_body = node is method
        for start in range(len(siblings)):
            if siblings[start].kind in _CHAIN_TAIL:
                # a run may not open mid-chain, except the lone else branch
                if siblings[start].kind is NodeKind.ELSE:
                    runs.append(((siblings[start],), True))
                continue
            for end in range(start, len(siblings)):
                if (
                    siblings[end].kind in _CHAIN_HEAD
                    and end + 1 < len(siblings)
                    and siblings[end + 1].kind in _CHAIN_TAIL
                ):
                    continue  # would detach the chain tail from its head
                run = siblings[start : end + 1]
                if whole_body and len(run) == len(siblings):
                    continue  # the entire body is the method itself
                runs.append((run, False))

    entries = []
    for run, is_else in runs:
        metrics = sequence_metrics(method, run)
        removed_from_method = ccr(metrics, 0)
        if removed_from_method == 0:
            continue
        entries.append(
            {
                "run": run,
                "metrics": metrics,
                "start": run[0].start_offset,
                "end": run[-1].end_offset,
                "loc": run[-1].end_line - run[0].start_line + 1,
                "else": is_else,
            }
        )

    entries.sort(key=lambda e: (e["start"], -e["end"]))

    candidates = [
        ExtractionCandidate(
            id=0,
            loc=method.line_span,
            nmcc=compute_cc(method),
            param_count=0,
            start_offset=method.start_offset,
            end_offset=method.end_offset,
        )
    ]
    for ident, entry in enumerate(entries, start=1):
        candidates.append(
            ExtractionCandidate(
                id=ident,
                loc=entry["loc"],
                nmcc=entry["metrics"].nmcc,
                param_count=0,
                start_offset=entry["start"],
                end_offset=entry["end"],
            )
        )

    arcs = []
    conflicts = []
    for i, child in enumerate(entries, start=1):
        arcs.append(NestingArc(child=i, parent=0, ccr=ccr(child["metrics"], 0)))
        for j, other in enumerate(entries, start=1):
            if i == j:
                continue
            if _inside(child, other):
                arcs.append(
                    NestingArc(
                        child=i, parent=j,
                        ccr=ccr(child["metrics"], other["metrics"].lam),
                    )
                )
            elif i < j and _overlap(child, other) and not _inside(other, child):
                conflicts.append(ConflictPair(i, j))

    return RefactoringCache(
        method_name=method_name,
        candidates=tuple(candidates),
        arcs=tuple(sorted(arcs, key=lambda a: (a.child, a.parent))),
        conflicts=tuple(sorted(conflicts, key=lambda c: (c.a, c.b))),
        else_rooted=frozenset(
            i for i, entry in enumerate(entries, start=1) if entry["else"]
        ),
    )


def _inside(inner: dict, outer: dict) -> bool:
    return (
        outer["start"] <= inner["start"]
        and inner["end"] <= outer["end"]
        and (inner["start"], inner["end"]) != (outer["start"], outer["end"])
    )


def _overlap(a: dict, b: dict) -> bool:
    return a["start"] <= b["end"] and b["start"] <= a["end"]
