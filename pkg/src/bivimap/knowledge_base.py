"""Queryable encoding of the bivariate symbology rule tables.

The tables ship as a versioned JSON document (``data/rule_tables.json``)
loaded once at startup; every entry carries an evidence flag separating
literature-established cells from author estimates. All queries are pure
reads of the loaded structure.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Optional

from .errors import PairingNotAvailableError

SCHEMA_VERSION = "1"


class VisualVariable(str, Enum):
    SIZE = "Size"
    VALUE = "Value"
    SATURATION = "Saturation"
    TRANSPARENCY = "Transparency"
    BLUR = "Blur"
    DENSITY = "Density"
    TEXTURE = "Texture"


class Implantation(str, Enum):
    POINT = "Point"
    LINE = "Line"
    AREA = "Area"


class Evidence(str, Enum):
    ESTABLISHED = "Established"
    AUTHOR_ESTIMATE = "AuthorEstimate"


class SeparabilityClass(str, Enum):
    INTEGRAL = "Integral"
    SEPARABLE = "Separable"
    ASYMMETRIC = "Asymmetric"
    CONFIGURAL = "Configural"


class PairingVariant(str, Enum):
    BIVARIATE_CHOROPLETH = "BivariateChoropleth"
    LINE_WIDTH = "LineWidth"
    WIDTH_WITH_DASH_LENGTH = "WidthWithDashLength"
    CROSSHATCH = "Crosshatch"


class OperationalTask(str, Enum):
    IDENTIFY = "Identify"
    COMPARE_WITHIN = "CompareWithin"
    RANK_COMPARE = "RankCompare"
    RATIO_COMPARE = "RatioCompare"
    LOCATE = "Locate"
    DISTRIBUTION = "Distribution"
    WEIGHTED_DISTRIBUTION = "WeightedDistribution"
    ISOLATE = "Isolate"
    COMPARE_BETWEEN = "CompareBetween"
    CORRELATE = "Correlate"
    ASSOCIATE = "Associate"
    PRIORITISED_INTERPRETATION = "PrioritisedInterpretation"
    WEIGHTED_INTERPRETATION = "WeightedInterpretation"
    ASSOCIATE_AND_ISOLATE = "AssociateAndIsolate"
    COMBINE = "Combine"


class TaskArity(str, Enum):
    UNIVARIATE = "Univariate"
    BIVARIATE = "Bivariate"


class PerceptionRequirement(str, Enum):
    SELECTIVE = "Selective"
    ORDINAL = "Ordinal"
    QUANTITATIVE = "Quantitative"
    ASSOCIATIVE = "Associative"
    DISSOCIATIVE = "Dissociative"
    SEPARABLE = "Separable"
    INTEGRAL = "Integral"
    ASYMMETRIC = "Asymmetric"
    CONFIGURAL = "Configural"


SEPARABILITY_REQUIREMENTS = frozenset({
    PerceptionRequirement.SEPARABLE,
    PerceptionRequirement.INTEGRAL,
    PerceptionRequirement.ASYMMETRIC,
    PerceptionRequirement.CONFIGURAL,
})


@dataclass(frozen=True)
class PerceptionSet:
    selective: bool
    associative: bool
    ordered: bool
    quantitative: bool

    @property
    def dissociative(self) -> bool:
        return not self.associative

    def satisfies(self, requirement: PerceptionRequirement) -> bool:
        """Whether a single variable meets one per-dimension requirement."""
        return {
            PerceptionRequirement.SELECTIVE: self.selective,
            PerceptionRequirement.ORDINAL: self.ordered,
            PerceptionRequirement.QUANTITATIVE: self.quantitative,
            PerceptionRequirement.ASSOCIATIVE: self.associative,
            PerceptionRequirement.DISSOCIATIVE: self.dissociative,
        }[requirement]


@dataclass(frozen=True)
class SelectiveLength:
    length: int
    evidence: Evidence


@dataclass(frozen=True)
class AvailabilityEntry:
    thematic: VisualVariable
    uncertainty: VisualVariable
    implantation: Implantation
    available: bool
    variant: Optional[PairingVariant] = None


@dataclass(frozen=True)
class SeparabilityEntry:
    thematic: VisualVariable
    uncertainty: VisualVariable
    implantation: Implantation
    klass: SeparabilityClass
    evidence: Evidence
    uncertain_not_recommended: bool


TABLE_IDS = ("availability", "properties", "lengths", "separability", "tasks")


class KnowledgeBase:
    """Immutable rule-table store; safe for concurrent reads after load."""

    def __init__(self, raw: dict, checksum: str):
        self._raw = raw
        self.checksum = checksum
        self.schema_version = raw["schema_version"]

        self._properties = {
            VisualVariable(name): PerceptionSet(
                selective=spec["selective"],
                associative=spec["associative"],
                ordered=spec["ordered"],
                quantitative=spec["quantitative"],
            )
            for name, spec in raw["variables"].items()
        }
        self._uncertainty_only = frozenset(
            VisualVariable(name)
            for name, spec in raw["variables"].items()
            if spec["uncertainty_only"]
        )
        self._lengths = {}
        for name, per_impl in raw["selective_lengths"].items():
            for impl, cell in per_impl.items():
                key = (VisualVariable(name), Implantation(impl))
                if cell is None:
                    self._lengths[key] = None
                else:
                    self._lengths[key] = SelectiveLength(
                        length=cell["length"], evidence=Evidence(cell["evidence"])
                    )

        self._availability = {}
        for impl, entries in raw["availability"].items():
            implantation = Implantation(impl)
            ordered = []
            for e in entries:
                entry = AvailabilityEntry(
                    thematic=VisualVariable(e["thematic"]),
                    uncertainty=VisualVariable(e["uncertainty"]),
                    implantation=implantation,
                    available=True,
                    variant=PairingVariant(e["variant"]) if e["variant"] else None,
                )
                ordered.append(entry)
            self._availability[implantation] = tuple(ordered)
        self._availability_index = {
            (e.thematic, e.uncertainty, impl): e
            for impl, entries in self._availability.items()
            for e in entries
        }

        self._separability = {}
        for impl, entries in raw["separability"].items():
            implantation = Implantation(impl)
            for e in entries:
                key = (VisualVariable(e["thematic"]), VisualVariable(e["uncertainty"]), implantation)
                self._separability[key] = SeparabilityEntry(
                    thematic=key[0],
                    uncertainty=key[1],
                    implantation=implantation,
                    klass=SeparabilityClass(e["class"]),
                    evidence=Evidence(e["evidence"]),
                    uncertain_not_recommended=e["uncertain_not_recommended"],
                )

        self._tasks = {
            OperationalTask(name): (
                TaskArity(spec["arity"]),
                PerceptionRequirement(spec["requirement"]),
            )
            for name, spec in raw["tasks"].items()
        }

    # -- loading ---------------------------------------------------------

    @classmethod
    def load(cls, path: Optional[Path] = None) -> "KnowledgeBase":
        if path is None:
            data = resources.files("bivimap").joinpath("data/rule_tables.json").read_bytes()
        else:
            data = Path(path).read_bytes()
        checksum = hashlib.sha256(data).hexdigest()
        return cls(json.loads(data.decode("utf-8")), checksum)

    @property
    def raw(self) -> dict:
        return self._raw

    # -- queries ---------------------------------------------------------

    def uncertainty_only(self, v: VisualVariable) -> bool:
        return v in self._uncertainty_only

    def variable_properties(self, v: VisualVariable) -> PerceptionSet:
        return self._properties[v]

    def selective_length(
        self, v: VisualVariable, i: Implantation
    ) -> Optional[SelectiveLength]:
        """Table value, or None when the variable is unusable at that implantation."""
        return self._lengths[(v, i)]

    def pairing_available(
        self, t: VisualVariable, u: VisualVariable, i: Implantation
    ) -> AvailabilityEntry:
        entry = self._availability_index.get((t, u, i))
        if entry is None:
            return AvailabilityEntry(t, u, i, available=False)
        return entry

    def separability_class(
        self, t: VisualVariable, u: VisualVariable, i: Implantation
    ) -> SeparabilityEntry:
        entry = self._separability.get((t, u, i))
        if entry is None:
            raise PairingNotAvailableError(
                f"pairing ({t.value}, {u.value}) is not available at {i.value} implantation"
            )
        return entry

    def task_requirement(self, task: OperationalTask) -> PerceptionRequirement:
        return self._tasks[task][1]

    def task_arity(self, task: OperationalTask) -> TaskArity:
        return self._tasks[task][0]

    def enumerate_pairings(self, i: Implantation) -> list[AvailabilityEntry]:
        """Available pairings in printed row-major order."""
        return list(self._availability[i])

    # -- dumps -----------------------------------------------------------

    def table_dump(self, table_id: str) -> dict:
        """Full encoded table for read-only exposure; ids in TABLE_IDS."""
        if table_id not in TABLE_IDS:
            raise KeyError(table_id)
        if table_id == "properties":
            payload = self._raw["variables"]
        elif table_id == "lengths":
            payload = self._raw["selective_lengths"]
        else:
            payload = self._raw[table_id]
        return {
            "table": table_id,
            "schema_version": self.schema_version,
            "checksum": self.checksum,
            "entries": payload,
        }


_DEFAULT_KB: Optional[KnowledgeBase] = None


def default_knowledge_base() -> KnowledgeBase:
    """Packaged tables, loaded once per process."""
    global _DEFAULT_KB
    if _DEFAULT_KB is None:
        _DEFAULT_KB = KnowledgeBase.load()
    return _DEFAULT_KB
