"""Five-step bivariate symbol selection: requirements, filtering, ranking.

Step 1 turns operational tasks into perception requirements, steps 2-4
filter the available pairing space against data characteristics and those
requirements (every check is recorded, pass or fail), and step 5 ranks the
survivors by the published evidence orderings for uncertainty cues using a
weighted Borda count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from .data_model import BinningScheme, validate_binning
from .errors import (
    EmptyTaskListError,
    InvalidTaskTargetError,
    InvalidWeightsError,
    NoCandidatesError,
    UnavailableVariableError,
)
from .knowledge_base import (
    SEPARABILITY_REQUIREMENTS,
    Implantation,
    KnowledgeBase,
    OperationalTask,
    PerceptionRequirement,
    TaskArity,
    VisualVariable,
)

SCHEMA_VERSION = "1"


class TaskTarget(str, Enum):
    THEMATIC = "Thematic"
    UNCERTAINTY = "Uncertainty"
    BOTH = "Both"


@dataclass(frozen=True)
class DimensionSpec:
    name: str
    binning: BinningScheme

    def to_dict(self) -> dict:
        return {"name": self.name, "binning": self.binning.to_dict()}

    @classmethod
    def from_dict(cls, doc: dict) -> "DimensionSpec":
        return cls(name=doc["name"], binning=BinningScheme.from_dict(doc["binning"]))


@dataclass(frozen=True)
class Constraints:
    # None means: resolve from the requirement profile (on when the
    # uncertainty dimension carries any Dissociative requirement).
    no_uncertainty_dominance: Optional[bool] = None
    include_uncertain_classifications: bool = False

    def to_dict(self) -> dict:
        return {
            "no_uncertainty_dominance": self.no_uncertainty_dominance,
            "include_uncertain_classifications": self.include_uncertain_classifications,
        }


@dataclass(frozen=True)
class RankingWeights:
    intuitiveness: float = 1.0
    performance: float = 1.0
    preference: float = 1.0

    def __post_init__(self):
        vals = (self.intuitiveness, self.performance, self.preference)
        if any(w < 0 for w in vals):
            raise InvalidWeightsError(f"ranking weights must be non-negative: {vals}")
        if all(w == 0 for w in vals):
            raise InvalidWeightsError("ranking weights must not all be zero")

    def to_dict(self) -> dict:
        return {
            "intuitiveness": self.intuitiveness,
            "performance": self.performance,
            "preference": self.preference,
        }


@dataclass(frozen=True)
class DesignRequest:
    implantation: Implantation
    thematic: DimensionSpec
    uncertainty: DimensionSpec
    tasks: tuple  # of (OperationalTask, TaskTarget)
    constraints: Constraints = Constraints()
    ranking_weights: RankingWeights = RankingWeights()

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "implantation": self.implantation.value,
            "thematic": self.thematic.to_dict(),
            "uncertainty": self.uncertainty.to_dict(),
            "tasks": [{"task": t.value, "target": g.value} for t, g in self.tasks],
            "constraints": self.constraints.to_dict(),
            "ranking_weights": self.ranking_weights.to_dict(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "DesignRequest":
        errors = validate_request_document(doc)
        if errors:
            first = errors[0]
            raise InvalidTaskTargetError(f"{first['field']}: {first['message']}")
        constraints = doc.get("constraints", {})
        weights = doc.get("ranking_weights", {})
        return cls(
            implantation=Implantation(doc["implantation"]),
            thematic=DimensionSpec.from_dict(doc["thematic"]),
            uncertainty=DimensionSpec.from_dict(doc["uncertainty"]),
            tasks=tuple(
                (OperationalTask(t["task"]), TaskTarget(t["target"])) for t in doc["tasks"]
            ),
            constraints=Constraints(
                no_uncertainty_dominance=constraints.get("no_uncertainty_dominance"),
                include_uncertain_classifications=constraints.get(
                    "include_uncertain_classifications", False
                ),
            ),
            ranking_weights=RankingWeights(
                intuitiveness=weights.get("intuitiveness", 1.0),
                performance=weights.get("performance", 1.0),
                preference=weights.get("preference", 1.0),
            ),
        )


def validate_request_document(doc: dict) -> list[dict]:
    """Field-level diagnostics for a request document; empty list when valid."""
    errors = []

    def bad(fieldname, message):
        errors.append({"field": fieldname, "message": message})

    if not isinstance(doc, dict):
        return [{"field": "", "message": "request body must be an object"}]
    impl = doc.get("implantation")
    if impl not in [i.value for i in Implantation]:
        bad("implantation", f"unknown implantation: {impl!r}")
    for dim in ("thematic", "uncertainty"):
        spec = doc.get(dim)
        if not isinstance(spec, dict) or "name" not in spec or "binning" not in spec:
            bad(dim, "must be an object with 'name' and 'binning'")
            continue
        try:
            BinningScheme.from_dict(spec["binning"])
        except Exception as exc:
            bad(f"{dim}.binning", str(exc))
    tasks = doc.get("tasks")
    if not isinstance(tasks, list) or not tasks:
        bad("tasks", "must be non-empty")
        tasks = []
    task_names = {t.value for t in OperationalTask}
    for idx, entry in enumerate(tasks):
        if not isinstance(entry, dict):
            bad(f"tasks[{idx}]", "must be an object with 'task' and 'target'")
            continue
        name = entry.get("task")
        target = entry.get("target")
        if name not in task_names:
            bad(f"tasks[{idx}].task", f"unknown task: {name!r}")
            continue
        if target not in [g.value for g in TaskTarget]:
            bad(f"tasks[{idx}].target", f"unknown target: {target!r}")
            continue
    weights = doc.get("ranking_weights", {})
    if isinstance(weights, dict):
        try:
            RankingWeights(
                intuitiveness=weights.get("intuitiveness", 1.0),
                performance=weights.get("performance", 1.0),
                preference=weights.get("preference", 1.0),
            )
        except InvalidWeightsError as exc:
            bad("ranking_weights", str(exc))
    return errors


@dataclass(frozen=True)
class RequirementProfile:
    thematic: frozenset
    uncertainty: frozenset
    pairing: frozenset

    def to_dict(self) -> dict:
        return {
            "thematic": sorted(r.value for r in self.thematic),
            "uncertainty": sorted(r.value for r in self.uncertainty),
            "pairing": sorted(r.value for r in self.pairing),
        }


@dataclass(frozen=True)
class CandidateCheck:
    rule: str
    passed: bool
    detail: str

    def to_dict(self) -> dict:
        return {"rule": self.rule, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class CandidateTrace:
    thematic: VisualVariable
    uncertainty: VisualVariable
    checks: tuple

    @property
    def accepted(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "thematic": self.thematic.value,
            "uncertainty": self.uncertainty.value,
            "verdict": "Accepted" if self.accepted else "Rejected",
            "checks": [c.to_dict() for c in self.checks],
        }


@dataclass(frozen=True)
class RankedCandidate:
    thematic: VisualVariable
    uncertainty: VisualVariable
    score: float
    breakdown: dict

    def to_dict(self) -> dict:
        return {
            "thematic": self.thematic.value,
            "uncertainty": self.uncertainty.value,
            "score": self.score,
            "breakdown": self.breakdown,
        }


@dataclass(frozen=True)
class ConflictNotice:
    message: str
    pairing_requirements: tuple

    def to_dict(self) -> dict:
        return {
            "message": self.message,
            "pairing_requirements": sorted(r.value for r in self.pairing_requirements),
        }


@dataclass(frozen=True)
class RecommendationReport:
    request: DesignRequest
    profile: RequirementProfile
    candidates: tuple
    ranked: tuple
    conflict: Optional[ConflictNotice]
    knowledge_base_checksum: str
    warnings: tuple = ()

    def accepted_pairings(self) -> list[tuple]:
        return [(c.thematic, c.uncertainty) for c in self.candidates if c.accepted]

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "knowledge_base_checksum": self.knowledge_base_checksum,
            "request": self.request.to_dict(),
            "profile": self.profile.to_dict(),
            "candidates": [c.to_dict() for c in self.candidates],
            "ranked": [r.to_dict() for r in self.ranked],
            "conflict": self.conflict.to_dict() if self.conflict else None,
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


# -- step 1: requirements ------------------------------------------------


def derive_requirements(
    tasks: Sequence[tuple], kb: KnowledgeBase
) -> RequirementProfile:
    """Union the perception requirement of each (task, target) into a profile.

    Separability-class requirements only arise from bivariate tasks, which
    must target both dimensions; a bivariate task whose requirement is
    Dissociative (weighting one cue by another) instead names the weighting
    dimension directly.
    """
    if not tasks:
        raise EmptyTaskListError("at least one operational task is required")
    thematic, uncertainty, pairing = set(), set(), set()
    for task, target in tasks:
        requirement = kb.task_requirement(task)
        arity = kb.task_arity(task)
        is_separability = requirement in SEPARABILITY_REQUIREMENTS
        if arity == TaskArity.UNIVARIATE and target == TaskTarget.BOTH:
            raise InvalidTaskTargetError(
                f"univariate task {task.value} must target one dimension"
            )
        if arity == TaskArity.BIVARIATE and is_separability and target != TaskTarget.BOTH:
            raise InvalidTaskTargetError(
                f"bivariate task {task.value} must target Both"
            )
        if target == TaskTarget.BOTH:
            pairing.add(requirement)
        elif target == TaskTarget.THEMATIC:
            thematic.add(requirement)
        else:
            uncertainty.add(requirement)
    return RequirementProfile(
        thematic=frozenset(thematic),
        uncertainty=frozenset(uncertainty),
        pairing=frozenset(pairing),
    )


# -- steps 2-4: filtering ------------------------------------------------


def _dimension_checks(
    label: str,
    variable: VisualVariable,
    requirements: frozenset,
    kb: KnowledgeBase,
) -> CandidateCheck:
    props = kb.variable_properties(variable)
    failed = sorted(
        r.value for r in requirements if not props.satisfies(r)
    )
    if failed:
        return CandidateCheck(
            f"perception-{label}",
            False,
            f"{variable.value} lacks: {', '.join(failed)}",
        )
    met = sorted(r.value for r in requirements) or ["none required"]
    return CandidateCheck(
        f"perception-{label}", True, f"{variable.value} meets: {', '.join(met)}"
    )


def _binning_check(
    label: str,
    variable: VisualVariable,
    implantation: Implantation,
    scheme: BinningScheme,
    kb: KnowledgeBase,
) -> CandidateCheck:
    try:
        result = validate_binning(variable, implantation, scheme, kb)
    except UnavailableVariableError:
        return CandidateCheck(
            f"binning-{label}",
            False,
            f"{variable.value} is unavailable at {implantation.value} for discrete bins",
        )
    if result.ok:
        detail = (
            "continuous representation"
            if scheme.kind == "continuous"
            else f"{result.n_bins} bins within selective length {result.limit}"
        )
        return CandidateCheck(f"binning-{label}", True, f"{variable.value}: {detail}")
    return CandidateCheck(
        f"binning-{label}",
        False,
        f"{variable.value}: {result.n_bins} bins exceed selective length {result.limit}",
    )


def filter_candidates(
    request: DesignRequest, profile: RequirementProfile, kb: KnowledgeBase
) -> list[CandidateTrace]:
    """Run the fixed check sequence over every available pairing.

    Checks run in order (availability, thematic slot, perception per
    dimension, binning per dimension, separability, dominance) and every
    check is recorded even after an earlier failure.
    """
    impl = request.implantation
    dominance_on = request.constraints.no_uncertainty_dominance
    if dominance_on is None:
        dominance_on = PerceptionRequirement.DISSOCIATIVE in profile.uncertainty

    traces = []
    for entry in kb.enumerate_pairings(impl):
        t, u = entry.thematic, entry.uncertainty
        checks = [
            CandidateCheck(
                "availability", True, f"({t.value}, {u.value}) listed at {impl.value}"
            )
        ]

        if kb.uncertainty_only(t):
            checks.append(CandidateCheck(
                "thematic-slot", False,
                f"{t.value} is reserved for the uncertainty dimension",
            ))
        else:
            checks.append(CandidateCheck(
                "thematic-slot", True, f"{t.value} permitted in the thematic slot"
            ))

        checks.append(_dimension_checks("thematic", t, profile.thematic, kb))
        checks.append(_dimension_checks("uncertainty", u, profile.uncertainty, kb))
        checks.append(_binning_check("thematic", t, impl, request.thematic.binning, kb))
        checks.append(_binning_check("uncertainty", u, impl, request.uncertainty.binning, kb))

        sep = kb.separability_class(t, u, impl)
        if profile.pairing and sep.klass.value not in {r.value for r in profile.pairing}:
            required = ", ".join(sorted(r.value for r in profile.pairing))
            checks.append(CandidateCheck(
                "separability", False,
                f"class {sep.klass.value} does not satisfy required {required}",
            ))
        elif sep.uncertain_not_recommended and not request.constraints.include_uncertain_classifications:
            checks.append(CandidateCheck(
                "separability", False,
                f"class {sep.klass.value} is an uncertain classification, excluded by default",
            ))
        else:
            checks.append(CandidateCheck(
                "separability", True, f"class {sep.klass.value} acceptable"
            ))

        if dominance_on:
            u_props = kb.variable_properties(u)
            t_props = kb.variable_properties(t)
            if u_props.dissociative and not t_props.dissociative:
                checks.append(CandidateCheck(
                    "dominance", False,
                    f"dissociative {u.value} would dominate non-dissociative {t.value}",
                ))
            else:
                checks.append(CandidateCheck("dominance", True, "no dominance risk"))
        else:
            checks.append(CandidateCheck("dominance", True, "constraint disabled"))

        traces.append(CandidateTrace(t, u, tuple(checks)))
    return traces


# -- step 5: ranking -----------------------------------------------------

# Evidence orderings for uncertainty cues; each is a list of tie groups,
# every variable not named forms a final tied group.
EVIDENCE_RANKINGS = {
    "intuitiveness": (
        (VisualVariable.BLUR,),
        (VisualVariable.VALUE,),
        (VisualVariable.SIZE,),
    ),
    "performance": (
        (VisualVariable.VALUE,),
        (VisualVariable.BLUR, VisualVariable.TRANSPARENCY),
    ),
    "preference": (
        (VisualVariable.SATURATION,),
        (VisualVariable.BLUR,),
        (VisualVariable.VALUE,),
    ),
}


def _borda_points(groups: tuple) -> dict:
    """Borda points over all seven variables; tie groups share the mean."""
    all_vars = list(VisualVariable)
    total = len(all_vars)
    named = [v for group in groups for v in group]
    rest = tuple(v for v in all_vars if v not in named)
    points = {}
    position = 1
    for group in list(groups) + ([rest] if rest else []):
        covered = [total - p for p in range(position, position + len(group))]
        share = sum(covered) / len(covered)
        for v in group:
            points[v] = share
        position += len(group)
    return points


_POINTS = {name: _borda_points(groups) for name, groups in EVIDENCE_RANKINGS.items()}


def rank_candidates(
    accepted: Sequence[CandidateTrace], weights: RankingWeights
) -> list[RankedCandidate]:
    """Weighted Borda combination of the three evidence orderings.

    Only the uncertainty cue is scored; score ties break lexicographically
    on (thematic, uncertainty) variable names.
    """
    if not accepted:
        raise NoCandidatesError("no accepted candidates to rank")
    w = {
        "intuitiveness": weights.intuitiveness,
        "performance": weights.performance,
        "preference": weights.preference,
    }
    ranked = []
    for trace in accepted:
        parts = {name: _POINTS[name][trace.uncertainty] for name in _POINTS}
        score = sum(w[name] * parts[name] for name in parts)
        breakdown = {**parts, "weighted_total": score}
        ranked.append(RankedCandidate(trace.thematic, trace.uncertainty, score, breakdown))
    ranked.sort(key=lambda r: (-r.score, r.thematic.value, r.uncertainty.value))
    return ranked


# -- composition ---------------------------------------------------------

COLOUR_BASED = frozenset({
    VisualVariable.VALUE,
    VisualVariable.SATURATION,
    VisualVariable.TRANSPARENCY,
})


def recommend(request: DesignRequest, kb: KnowledgeBase) -> RecommendationReport:
    profile = derive_requirements(request.tasks, kb)
    candidates = filter_candidates(request, profile, kb)
    accepted = [c for c in candidates if c.accepted]

    conflict = None
    ranked = ()
    if accepted:
        ranked = tuple(rank_candidates(accepted, request.ranking_weights))
    else:
        message = "no pairing satisfies all requirements"
        if len(profile.pairing) > 1:
            message = (
                "conflicting separability requirements; consider splitting the goals "
                "across two maps"
            )
        conflict = ConflictNotice(message, tuple(sorted(profile.pairing)))

    warnings = []
    t_bins = request.thematic.binning.n_bins
    u_bins = request.uncertainty.binning.n_bins
    if t_bins and u_bins and t_bins * u_bins > 9:
        for c in accepted:
            if c.thematic in COLOUR_BASED and c.uncertainty in COLOUR_BASED:
                warnings.append(
                    f"({c.thematic.value}, {c.uncertainty.value}): "
                    f"{t_bins}x{u_bins} bivariate levels exceed the nine-level guidance"
                )

    return RecommendationReport(
        request=request,
        profile=profile,
        candidates=tuple(candidates),
        ranked=ranked,
        conflict=conflict,
        knowledge_base_checksum=kb.checksum,
        warnings=tuple(warnings),
    )
