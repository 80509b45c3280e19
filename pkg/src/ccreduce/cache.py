"""Refactoring cache: the candidate extractions of one method, plus CSV I/O.

A cache fully describes one optimisation instance.  It is stored as four
CSV files sharing a method-name prefix ``<m>``:

* ``<m>_extractions.csv``  -- ``id,loc,nmcc,params`` per candidate; id 0 is
  the original method itself.
* ``<m>_nested.csv``       -- ``child,parent,ccr``; one row per ancestor
  pair, *transitively closed* (if j is inside l and l inside i, rows for
  j->l, l->i and j->i must all be present, since the complexity each
  extraction removes from each host cannot be reconstructed from the
  direct rows alone).
* ``<m>_conflict.csv``     -- ``a,b``; pairs that overlap without nesting
  and therefore cannot both be extracted.
* ``<m>_feasible_extractions_offsets.csv`` -- ``id,start,end`` character
  offsets of every candidate, including id 0.

All integers are plain decimals; files are UTF-8 with LF endings and no
quoting.  :func:`write_cache` emits a canonical ordering (ids ascending,
arcs by (child, parent), conflicts by (a, b)), so write/load round-trips
are byte-stable.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path


class CacheError(ValueError):
    """Raised when cache files are missing, malformed or inconsistent."""


@dataclass(frozen=True)
class ExtractionCandidate:
    id: int
    loc: int
    nmcc: int
    param_count: int
    start_offset: int
    end_offset: int


@dataclass(frozen=True)
class NestingArc:
    child: int
    parent: int
    ccr: int


@dataclass(frozen=True)
class ConflictPair:
    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a > self.b:
            low, high = self.b, self.a
            object.__setattr__(self, "a", low)
            object.__setattr__(self, "b", high)


def _canonical_pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class RefactoringCache:
    """Immutable bundle of candidates, nesting arcs and conflicts.

    Construction does not validate; run :func:`validate_cache` to collect
    invariant violations (the CSV loader does so and raises on any).
    """

    method_name: str
    candidates: tuple[ExtractionCandidate, ...]
    arcs: tuple[NestingArc, ...]
    conflicts: tuple[ConflictPair, ...]
    # ids of candidates that are whole else-branches; informational only,
    # not serialised and excluded from equality
    else_rooted: frozenset[int] = field(default_factory=frozenset, compare=False)

    @property
    def by_id(self) -> dict[int, ExtractionCandidate]:
        return {c.id: c for c in self.candidates}

    @property
    def candidate_ids(self) -> tuple[int, ...]:
        """Ids of the real candidates (id 0 excluded), ascending."""
        return tuple(sorted(c.id for c in self.candidates if c.id != 0))

    def arc_ccr(self) -> dict[tuple[int, int], int]:
        return {(arc.child, arc.parent): arc.ccr for arc in self.arcs}

    def ancestors_of(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, tuple[int, ...]] = {i: () for i in self.by_id}
        grouped: dict[int, list[int]] = {}
        for arc in self.arcs:
            grouped.setdefault(arc.child, []).append(arc.parent)
        for child, parents in grouped.items():
            out[child] = tuple(sorted(parents))
        return out

    def conflict_set(self) -> frozenset[tuple[int, int]]:
        return frozenset((c.a, c.b) for c in self.conflicts)


def validate_cache(cache: RefactoringCache) -> list[str]:
    """Return every invariant violation found, as human-readable strings.

    An empty list means the cache is internally consistent.  Violations are
    data, not exceptions, so callers can report all of them at once.
    """
    problems: list[str] = []
    ids = [c.id for c in cache.candidates]
    id_set = set(ids)
    if len(ids) != len(id_set):
        problems.append("duplicate candidate ids")
    if 0 not in id_set:
        problems.append("candidate id 0 (the original method) is missing")

    by_id = {c.id: c for c in cache.candidates}
    for cand in cache.candidates:
        if cand.id < 0:
            problems.append(f"candidate {cand.id}: id must be non-negative")
        if cand.loc < 1:
            problems.append(f"candidate {cand.id}: loc must be positive")
        if cand.nmcc < 0:
            problems.append(f"candidate {cand.id}: nmcc must be non-negative")
        if cand.param_count < 0:
            problems.append(f"candidate {cand.id}: params must be non-negative")
        if cand.start_offset < 0 or cand.end_offset < cand.start_offset:
            problems.append(f"candidate {cand.id}: bad offset interval")

    seen_arcs: set[tuple[int, int]] = set()
    arc_parents: dict[int, set[int]] = {}
    for arc in cache.arcs:
        key = (arc.child, arc.parent)
        if key in seen_arcs:
            problems.append(f"duplicate arc {arc.child}->{arc.parent}")
            continue
        seen_arcs.add(key)
        if arc.child == arc.parent:
            problems.append(f"self arc {arc.child}->{arc.parent}")
            continue
        if arc.child not in id_set or arc.parent not in id_set:
            problems.append(f"arc {arc.child}->{arc.parent}: dangling candidate id")
            continue
        if arc.ccr < 0:
            problems.append(f"arc {arc.child}->{arc.parent}: ccr must be non-negative")
        child, parent = by_id[arc.child], by_id[arc.parent]
        if not _strictly_inside(child, parent):
            problems.append(
                f"arc {arc.child}->{arc.parent}: child interval is not strictly "
                "inside the parent interval"
            )
        arc_parents.setdefault(arc.child, set()).add(arc.parent)

    for cand in cache.candidates:
        if cand.id != 0 and 0 not in arc_parents.get(cand.id, ()):
            problems.append(f"candidate {cand.id}: missing arc to the method (id 0)")

    # transitive closure: j->l and l->i demand j->i
    for child, parents in arc_parents.items():
        for mid in parents:
            for top in arc_parents.get(mid, ()):
                if top not in parents and top != child:
                    problems.append(
                        f"nesting arcs are not transitively closed: "
                        f"{child}->{mid}->{top} lacks {child}->{top}"
                    )

    if _has_cycle(arc_parents):
        problems.append("nesting arcs contain a cycle")

    seen_conflicts: set[tuple[int, int]] = set()
    for pair in cache.conflicts:
        key = _canonical_pair(pair.a, pair.b)
        if key in seen_conflicts:
            problems.append(f"duplicate conflict pair {key}")
            continue
        seen_conflicts.add(key)
        if pair.a == pair.b:
            problems.append(f"conflict pair ({pair.a}, {pair.b}): ids must differ")
            continue
        if pair.a not in id_set or pair.b not in id_set:
            problems.append(f"conflict pair {key}: dangling candidate id")
            continue
        ca, cb = by_id[pair.a], by_id[pair.b]
        if _strictly_inside(ca, cb) or _strictly_inside(cb, ca):
            problems.append(f"conflict pair {key} is a nesting pair")
        elif not _overlaps(ca, cb):
            problems.append(f"conflict pair {key}: intervals do not overlap")

    return problems


def _strictly_inside(inner: ExtractionCandidate, outer: ExtractionCandidate) -> bool:
    return (
        outer.start_offset <= inner.start_offset
        and inner.end_offset <= outer.end_offset
        and (inner.start_offset, inner.end_offset)
        != (outer.start_offset, outer.end_offset)
    )


def _overlaps(a: ExtractionCandidate, b: ExtractionCandidate) -> bool:
    return a.start_offset <= b.end_offset and b.start_offset <= a.end_offset


def _has_cycle(adjacency: dict[int, set[int]]) -> bool:
    state: dict[int, int] = {}

    def visit(node: int) -> bool:
        state[node] = 1
        for nxt in adjacency.get(node, ()):
            mark = state.get(nxt, 0)
            if mark == 1:
                return True
            if mark == 0 and visit(nxt):
                return True
        state[node] = 2
        return False

    return any(state.get(node, 0) == 0 and visit(node) for node in list(adjacency))


# ---------------------------------------------------------------------------
# CSV I/O

_SUFFIXES = (
    "_extractions.csv",
    "_nested.csv",
    "_conflict.csv",
    "_feasible_extractions_offsets.csv",
)

_HEADERS = {
    "_extractions.csv": ["id", "loc", "nmcc", "params"],
    "_nested.csv": ["child", "parent", "ccr"],
    "_conflict.csv": ["a", "b"],
    "_feasible_extractions_offsets.csv": ["id", "start", "end"],
}


def cache_paths(directory: str | Path, method_name: str) -> tuple[Path, Path, Path, Path]:
    base = Path(directory)
    return tuple(base / f"{method_name}{suffix}" for suffix in _SUFFIXES)  # type: ignore[return-value]


def find_method_name(directory: str | Path) -> str:
    """Infer the method-name prefix from the single *_extractions.csv file."""
    matches = sorted(Path(directory).glob("*_extractions.csv"))
    matches = [m for m in matches if not m.name.endswith("_feasible_extractions.csv")]
    if not matches:
        raise CacheError(f"no *_extractions.csv file in {directory}")
    if len(matches) > 1:
        names = ", ".join(m.name for m in matches)
        raise CacheError(f"ambiguous cache directory ({names})")
    return matches[0].name[: -len("_extractions.csv")]


def load_cache_dir(directory: str | Path, method_name: str | None = None) -> RefactoringCache:
    if method_name is None:
        method_name = find_method_name(directory)
    return load_cache(*cache_paths(directory, method_name), method_name=method_name)


def load_cache(
    extractions_path: str | Path,
    nested_path: str | Path,
    conflict_path: str | Path,
    offsets_path: str | Path,
    method_name: str | None = None,
) -> RefactoringCache:
    """Load and validate a cache from its four CSV files.

    Problems are collected across all files and reported together, each
    with its file and line number.
    """
    if method_name is None:
        name = Path(extractions_path).name
        method_name = name[: -len("_extractions.csv")] if name.endswith("_extractions.csv") else name

    problems: list[str] = []
    ext_rows = _read_rows(extractions_path, "_extractions.csv", problems)
    nested_rows = _read_rows(nested_path, "_nested.csv", problems)
    conflict_rows = _read_rows(conflict_path, "_conflict.csv", problems)
    offset_rows = _read_rows(offsets_path, "_feasible_extractions_offsets.csv", problems)
    if problems:
        raise CacheError("; ".join(problems))

    offsets: dict[int, tuple[int, int]] = {}
    for path, lineno, row in offset_rows:
        ident, start, end = row
        if ident in offsets:
            problems.append(f"{path}:{lineno}: duplicate offsets for id {ident}")
        offsets[ident] = (start, end)

    candidates = []
    seen_ids = set()
    for path, lineno, row in ext_rows:
        ident, loc, nmcc, params = row
        if ident in seen_ids:
            problems.append(f"{path}:{lineno}: duplicate candidate id {ident}")
            continue
        seen_ids.add(ident)
        if ident not in offsets:
            problems.append(f"{path}:{lineno}: id {ident} has no offsets row")
            continue
        start, end = offsets[ident]
        candidates.append(
            ExtractionCandidate(
                id=ident, loc=loc, nmcc=nmcc, param_count=params,
                start_offset=start, end_offset=end,
            )
        )
    for ident in sorted(set(offsets) - seen_ids):
        problems.append(f"{offsets_path}: dangling candidate id {ident} (offsets only)")

    arcs = []
    for path, lineno, row in nested_rows:
        child, parent, ccr_value = row
        if child not in seen_ids or parent not in seen_ids:
            problems.append(f"{path}:{lineno}: dangling candidate id in arc {child}->{parent}")
            continue
        arcs.append(NestingArc(child=child, parent=parent, ccr=ccr_value))

    conflicts = []
    for path, lineno, row in conflict_rows:
        a, b = row
        if a not in seen_ids or b not in seen_ids:
            problems.append(f"{path}:{lineno}: dangling candidate id in conflict ({a}, {b})")
            continue
        conflicts.append(ConflictPair(*_canonical_pair(a, b)))

    if problems:
        raise CacheError("; ".join(problems))
    cache = RefactoringCache(
        method_name=method_name,
        candidates=tuple(sorted(candidates, key=lambda c: c.id)),
        arcs=tuple(sorted(arcs, key=lambda a: (a.child, a.parent))),
        conflicts=tuple(sorted(conflicts, key=lambda c: (c.a, c.b))),
    )
    semantic = validate_cache(cache)
    if semantic:
        where = Path(extractions_path).parent
        raise CacheError("; ".join(f"{where}: {msg}" for msg in semantic))
    return cache


def _read_rows(
    path: str | Path, suffix: str, problems: list[str]
) -> list[tuple[str, int, tuple[int, ...]]]:
    expected = _HEADERS[suffix]
    path = Path(path)
    if not path.exists():
        problems.append(f"{path}: file not found")
        return []
    rows: list[tuple[str, int, tuple[int, ...]]] = []
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != expected:
            problems.append(f"{path}:1: expected header {','.join(expected)}")
            return []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(expected):
                problems.append(f"{path}:{lineno}: expected {len(expected)} fields")
                continue
            try:
                values = tuple(_parse_int(cell) for cell in row)
            except ValueError as exc:
                problems.append(f"{path}:{lineno}: {exc}")
                continue
            rows.append((str(path), lineno, values))
    return rows


def _parse_int(cell: str) -> int:
    text = cell.strip()
    if not text or not text.lstrip("-").isdigit():
        raise ValueError(f"not an integer: {cell!r}")
    if len(text.lstrip("-")) > 1 and text.lstrip("-").startswith("0"):
        raise ValueError(f"leading zeros are not allowed: {cell!r}")
    return int(text)


def write_cache(cache: RefactoringCache, directory: str | Path) -> tuple[Path, Path, Path, Path]:
    """Write the four canonical CSV files; returns their paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    ext_path, nested_path, conflict_path, offsets_path = cache_paths(
        directory, cache.method_name
    )

    candidates = sorted(cache.candidates, key=lambda c: c.id)
    _write_rows(ext_path, _HEADERS["_extractions.csv"],
                [(c.id, c.loc, c.nmcc, c.param_count) for c in candidates])
    _write_rows(nested_path, _HEADERS["_nested.csv"],
                [(a.child, a.parent, a.ccr)
                 for a in sorted(cache.arcs, key=lambda a: (a.child, a.parent))])
    _write_rows(conflict_path, _HEADERS["_conflict.csv"],
                [(c.a, c.b)
                 for c in sorted(cache.conflicts, key=lambda c: (c.a, c.b))])
    _write_rows(offsets_path, _HEADERS["_feasible_extractions_offsets.csv"],
                [(c.id, c.start_offset, c.end_offset) for c in candidates])
    return ext_path, nested_path, conflict_path, offsets_path


def _write_rows(path: Path, header: list[str], rows: list[tuple[int, ...]]) -> None:
    buffer = io.StringIO()
    buffer.write(",".join(header) + "\n")
    for row in rows:
        buffer.write(",".join(str(v) for v in row) + "\n")
    path.write_text(buffer.getvalue(), encoding="utf-8", newline="\n")
