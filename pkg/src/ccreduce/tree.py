"""Control-flow tree of a single method.

A method is represented as a tree of :class:`AstNode` values.  Only the
control-flow shape matters here: each node carries a :class:`NodeKind`, the
source lines it spans and its character offsets.  Expressions, identifiers
and everything else the original parser knew about are deliberately absent.

Trees are usually read from a small JSON document (see :func:`load_tree`)
produced by whatever front end parsed the original source.  The JSON schema
is a plain recursive object::

    {"kind": "IF", "startLine": 3, "endLine": 5,
     "startOffset": 120, "endOffset": 180, "children": [...]}

Nodes are immutable once built, so a tree can be shared freely between
threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterator


class TreeError(ValueError):
    """Raised for malformed trees or malformed tree JSON."""


class NodeKind(Enum):
    """Node kinds and their complexity attributes.

    Each kind fixes three booleans:

    * ``adds_inherent`` -- the construct adds +1 to the inherent component.
    * ``pays_nesting_penalty`` -- the construct additionally pays +depth.
    * ``increments_child_depth`` -- children sit one nesting level deeper.

    ``ELSE`` deepens its children but pays no nesting penalty itself, and an
    ``ELSE`` node is stored as the *sibling* following its ``IF`` so that it
    shares the nesting level of the ``IF`` it belongs to.
    """

    METHOD = ("METHOD", False, False, False)
    BLOCK = ("BLOCK", False, False, False)
    STATEMENT = ("STATEMENT", False, False, False)
    IF = ("IF", True, True, True)
    ELSE_IF = ("ELSE_IF", True, True, True)
    ELSE = ("ELSE", True, False, True)
    FOR = ("FOR", True, True, True)
    WHILE = ("WHILE", True, True, True)
    DO_WHILE = ("DO_WHILE", True, True, True)
    SWITCH = ("SWITCH", True, True, True)
    CATCH = ("CATCH", True, True, True)
    LOGICAL_SEQUENCE = ("LOGICAL_SEQUENCE", True, False, False)

    def __init__(self, key: str, inherent: bool, penalty: bool, deepens: bool):
        self.key = key
        self.adds_inherent = inherent
        self.pays_nesting_penalty = penalty
        self.increments_child_depth = deepens


_KIND_BY_KEY = {kind.key: kind for kind in NodeKind}

# else-if/else attach to the preceding if; a candidate run must not split them
_CHAIN_TAIL = (NodeKind.ELSE_IF, NodeKind.ELSE)
_CHAIN_HEAD = (NodeKind.IF, NodeKind.ELSE_IF)


@dataclass(frozen=True, eq=False)
class AstNode:
    """One control-flow element of a method.

    Line numbers are 1-based and inclusive; offsets are 0-based character
    positions with ``start_offset <= end_offset``.  Children are ordered by
    document position and their intervals nest inside the parent's without
    overlapping each other.
    """

    kind: NodeKind
    start_line: int
    end_line: int
    start_offset: int
    end_offset: int
    children: tuple["AstNode", ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.start_line < 1 or self.end_line < self.start_line:
            raise TreeError(f"bad line range [{self.start_line}, {self.end_line}]")
        if self.start_offset < 0 or self.end_offset < self.start_offset:
            raise TreeError(
                f"bad offset range [{self.start_offset}, {self.end_offset}]"
            )
        prev_end = None
        for child in self.children:
            if child.start_offset < self.start_offset or child.end_offset > self.end_offset:
                raise TreeError("child offsets escape the parent interval")
            if prev_end is not None and child.start_offset <= prev_end:
                raise TreeError("sibling intervals overlap or are out of order")
            prev_end = child.end_offset

    @property
    def line_span(self) -> int:
        return self.end_line - self.start_line + 1

    def walk(self) -> Iterator["AstNode"]:
        """Yield this node and all descendants in document order."""
        yield self
        for child in self.children:
            yield from child.walk()


def require_method_root(node: AstNode) -> None:
    if node.kind is not NodeKind.METHOD:
        raise TreeError(f"tree root must be METHOD, got {node.kind.key}")


def node_depths(method: AstNode) -> dict[int, int]:
    """Map ``id(node) -> nesting depth`` for every node of the method.

    Depth counts the ancestors (strictly above the node, below the method
    root) whose kind increments child depth.  The METHOD root itself never
    contributes.
    """
    require_method_root(method)
    depths: dict[int, int] = {}

    def visit(node: AstNode, depth: int) -> None:
        depths[id(node)] = depth
        child_depth = depth + (1 if node.kind.increments_child_depth else 0)
        for child in node.children:
            visit(child, child_depth)

    visit(method, 0)
    return depths


def parent_map(method: AstNode) -> dict[int, AstNode | None]:
    """Map ``id(node) -> parent node`` (``None`` for the root)."""
    parents: dict[int, AstNode | None] = {id(method): None}
    for node in method.walk():
        for child in node.children:
            parents[id(child)] = node
    return parents


def load_tree(path: str | Path) -> AstNode:
    """Read a method tree from a JSON file."""
    return parse_tree(Path(path).read_text(encoding="utf-8"))


def parse_tree(text: str) -> AstNode:
    """Parse a method tree from JSON text.

    Raises :class:`TreeError` naming the offending node path when a kind is
    unknown or a field is missing or malformed.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TreeError(f"invalid JSON: {exc}") from exc
    root = _node_from_obj(payload, "$")
    require_method_root(root)
    return root


def _node_from_obj(obj: object, path: str) -> AstNode:
    if not isinstance(obj, dict):
        raise TreeError(f"{path}: node must be an object")
    try:
        kind_key = obj["kind"]
        start_line = obj["startLine"]
        end_line = obj["endLine"]
        start_offset = obj["startOffset"]
        end_offset = obj["endOffset"]
    except KeyError as exc:
        raise TreeError(f"{path}: missing field {exc.args[0]!r}") from exc
    if kind_key not in _KIND_BY_KEY:
        raise TreeError(f"{path}: unknown node kind {kind_key!r}")
    for name, value in (
        ("startLine", start_line),
        ("endLine", end_line),
        ("startOffset", start_offset),
        ("endOffset", end_offset),
    ):
        if not isinstance(value, int) or isinstance(value, bool):
            raise TreeError(f"{path}: field {name!r} must be an integer")
    raw_children = obj.get("children", [])
    if not isinstance(raw_children, list):
        raise TreeError(f"{path}: 'children' must be a list")
    children = tuple(
        _node_from_obj(child, f"{path}.children[{i}]")
        for i, child in enumerate(raw_children)
    )
    try:
        return AstNode(
            kind=_KIND_BY_KEY[kind_key],
            start_line=start_line,
            end_line=end_line,
            start_offset=start_offset,
            end_offset=end_offset,
            children=children,
        )
    except TreeError as exc:
        raise TreeError(f"{path}: {exc}") from exc


def dump_tree(node: AstNode) -> dict:
    """Return the JSON-serialisable form of a tree."""
    return {
        "kind": node.kind.key,
        "startLine": node.start_line,
        "endLine": node.end_line,
        "startOffset": node.start_offset,
        "endOffset": node.end_offset,
        "children": [dump_tree(child) for child in node.children],
    }
