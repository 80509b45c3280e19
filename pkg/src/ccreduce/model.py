"""Selections over a refactoring cache and their exact evaluation.

A *selection* is the set of extraction ids actually performed; id 0 (the
original method) is always part of it.  Evaluation is purely combinatorial:

* every selected extraction has a unique *direct parent* -- the closest
  selected ancestor -- because selected ancestors of a candidate always
  form a containment chain (two overlapping non-nested candidates are a
  conflict and cannot both be selected);
* the residual complexity of a selected method is its own complexity minus
  the complexity removed by its direct children, and likewise for lines of
  code;
* the balance objectives are the spreads max-min of those residuals, and
  the extraction-count objective is the number of selected ids besides 0.

The spread variables need no search: for a fixed selection they take their
tight values (the actual max and min), which is what any optimum of the
spread objectives would produce.  That is what makes an exact combinatorial
treatment of the whole problem possible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .cache import CacheError, RefactoringCache

DEFAULT_THRESHOLD = 15


class ObjectiveKind(Enum):
    EXTRACTIONS = "extractions"
    CC_DIFF = "cc"
    LOC_DIFF = "loc"


DEFAULT_OBJECTIVE_ORDER = (
    ObjectiveKind.EXTRACTIONS,
    ObjectiveKind.CC_DIFF,
    ObjectiveKind.LOC_DIFF,
)


@dataclass(frozen=True)
class ModelConfig:
    """Threshold plus the ordered objective subset to optimise (1 to 3)."""

    tau: int = DEFAULT_THRESHOLD
    objectives: tuple[ObjectiveKind, ...] = DEFAULT_OBJECTIVE_ORDER

    def __post_init__(self) -> None:
        if self.tau < 1:
            raise ValueError("threshold must be at least 1")
        if not 1 <= len(self.objectives) <= 3:
            raise ValueError("between one and three objectives are required")
        if len(set(self.objectives)) != len(self.objectives):
            raise ValueError("duplicate objectives")

    @property
    def p(self) -> int:
        return len(self.objectives)


@dataclass(frozen=True)
class Selection:
    """A set of chosen extraction ids; id 0 is always included."""

    chosen: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "chosen", frozenset(self.chosen) | {0})

    @classmethod
    def of(cls, *ids: int) -> "Selection":
        return cls(frozenset(ids))

    def sorted_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.chosen))

    def extracted_ids(self) -> tuple[int, ...]:
        return tuple(i for i in self.sorted_ids() if i != 0)

    @property
    def extraction_count(self) -> int:
        return len(self.chosen) - 1


@dataclass(frozen=True)
class Feasibility:
    ok: bool
    violations: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class EvaluatedSolution:
    """Residuals, spread extremes and the objective vector of a selection."""

    selection: Selection
    direct_parent: dict[int, int]
    residual_cc: dict[int, int]
    residual_loc: dict[int, int]
    c_max: int
    c_min: int
    t_max: int
    t_min: int
    objective_vector: tuple[int, ...]

    @property
    def extraction_count(self) -> int:
        return self.selection.extraction_count

    @property
    def cc_diff(self) -> int:
        return self.c_max - self.c_min

    @property
    def loc_diff(self) -> int:
        return self.t_max - self.t_min

    def full_objectives(self) -> tuple[int, int, int]:
        """(extractions, cc spread, loc spread) regardless of the config."""
        return (self.extraction_count, self.cc_diff, self.loc_diff)


def derive_direct_parents(selection: Selection, cache: RefactoringCache) -> dict[int, int]:
    """Direct parent of every chosen extraction (0 included as a parent).

    The direct parent of j is the chosen ancestor i with no other chosen
    candidate strictly between them.  Determined entirely by the selection.
    """
    ancestors = cache.ancestors_of()
    chosen = selection.chosen
    result: dict[int, int] = {}
    for j in sorted(chosen):
        if j == 0:
            continue
        if j not in ancestors or 0 not in ancestors[j]:
            raise CacheError(f"candidate {j} has no ancestor arc to the method")
        chosen_ancestors = [i for i in ancestors[j] if i in chosen]
        direct = None
        for i in chosen_ancestors:
            if any(l != i and i in ancestors.get(l, ()) for l in chosen_ancestors):
                continue  # some chosen l sits between j and i
            direct = i
            break
        if direct is None:  # pragma: no cover - 0 is always an ancestor
            raise CacheError(f"no direct parent found for candidate {j}")
        result[j] = direct
    return result


def evaluate(
    selection: Selection, cache: RefactoringCache, config: ModelConfig | None = None
) -> EvaluatedSolution:
    """Residual complexity / lines per selected method and the objectives.

    Order-independent: the direct-parent relation is a function of the
    selection alone.
    """
    config = config or ModelConfig()
    by_id = cache.by_id
    for ident in selection.chosen:
        if ident not in by_id:
            raise CacheError(f"selection references unknown candidate {ident}")

    parents = derive_direct_parents(selection, cache)
    arc_ccr = cache.arc_ccr()

    residual_cc = {i: by_id[i].nmcc for i in selection.chosen}
    residual_loc = {i: by_id[i].loc for i in selection.chosen}
    for j, i in parents.items():
        residual_cc[i] -= arc_ccr[(j, i)]
        residual_loc[i] -= by_id[j].loc

    cc_values = list(residual_cc.values())
    loc_values = list(residual_loc.values())
    c_max, c_min = max(cc_values), min(cc_values)
    t_max, t_min = max(loc_values), min(loc_values)

    values = {
        ObjectiveKind.EXTRACTIONS: selection.extraction_count,
        ObjectiveKind.CC_DIFF: c_max - c_min,
        ObjectiveKind.LOC_DIFF: t_max - t_min,
    }
    vector = tuple(values[kind] for kind in config.objectives)
    return EvaluatedSolution(
        selection=selection,
        direct_parent=parents,
        residual_cc=residual_cc,
        residual_loc=residual_loc,
        c_max=c_max,
        c_min=c_min,
        t_max=t_max,
        t_min=t_min,
        objective_vector=vector,
    )


def is_feasible(
    selection: Selection, cache: RefactoringCache, tau: int = DEFAULT_THRESHOLD
) -> Feasibility:
    """Check conflicts and the residual-complexity threshold.

    Feasible means: id 0 selected, no conflicting pair selected, and every
    selected method keeps residual complexity at most ``tau``.
    """
    violations: list[str] = []
    chosen = selection.chosen
    by_id = cache.by_id
    unknown = sorted(i for i in chosen if i not in by_id)
    if unknown:
        return Feasibility(False, tuple(f"unknown candidate {i}" for i in unknown))

    for a, b in sorted(cache.conflict_set()):
        if a in chosen and b in chosen:
            violations.append(f"conflicting extractions {a} and {b} both selected")
    if not violations:
        evaluated = evaluate(selection, cache)
        for ident in sorted(chosen):
            residual = evaluated.residual_cc[ident]
            if residual > tau:
                violations.append(
                    f"residual CC {residual} > {tau} for method {ident}"
                )
    return Feasibility(not violations, tuple(violations))
