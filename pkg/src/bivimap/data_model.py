"""Dataset ingestion, uncertainty statistics, and attribute binning."""

from __future__ import annotations

import csv
import io
import json
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

from .errors import (
    BadKError,
    GeometryParseError,
    JoinKeyMissingError,
    MissingAttributeError,
    MixedGeometryKindsError,
    NonMonotonicEdgesError,
    UnavailableVariableError,
    ZeroMeanError,
)
from .knowledge_base import Implantation, KnowledgeBase, VisualVariable

Number = Union[int, float]


@dataclass(frozen=True)
class Geometry:
    kind: str  # "Polygon" or "Point"
    # Polygon: list of rings, each a list of (x, y); Point: single (x, y)
    coordinates: tuple

    def all_points(self):
        if self.kind == "Point":
            return [self.coordinates]
        return [pt for ring in self.coordinates for pt in ring]


@dataclass(frozen=True)
class Feature:
    id: str
    geometry: Geometry
    attributes: dict


@dataclass(frozen=True)
class Dataset:
    features: tuple
    implantation: Implantation

    def attribute_values(self, name: str) -> list[float]:
        values = []
        for f in self.features:
            if name not in f.attributes:
                raise MissingAttributeError(f"feature {f.id!r} has no attribute {name!r}")
            values.append(float(f.attributes[name]))
        return values

    def with_attribute(self, name: str, values: Sequence[float]) -> "Dataset":
        if len(values) != len(self.features):
            raise MissingAttributeError(
                f"{len(values)} values for {len(self.features)} features"
            )
        features = tuple(
            Feature(f.id, f.geometry, {**f.attributes, name: v})
            for f, v in zip(self.features, values)
        )
        return Dataset(features, self.implantation)

    def to_geojson(self) -> dict:
        feats = []
        for f in self.features:
            if f.geometry.kind == "Point":
                coords = list(f.geometry.coordinates)
            else:
                coords = [[list(pt) for pt in ring] for ring in f.geometry.coordinates]
            feats.append({
                "type": "Feature",
                "id": f.id,
                "geometry": {"type": f.geometry.kind, "coordinates": coords},
                "properties": dict(f.attributes),
            })
        return {"type": "FeatureCollection", "features": feats}


# -- binning schemes -----------------------------------------------------


@dataclass(frozen=True)
class BinningScheme:
    kind: str  # "threshold" | "quantile" | "continuous"
    edges: tuple = ()
    k: int = 0

    @classmethod
    def threshold(cls, edges: Sequence[float]) -> "BinningScheme":
        edges = tuple(float(e) for e in edges)
        if any(b <= a for a, b in zip(edges, edges[1:])):
            raise NonMonotonicEdgesError(f"edges must strictly increase: {list(edges)}")
        return cls("threshold", edges=edges)

    @classmethod
    def quantile(cls, k: int) -> "BinningScheme":
        if k < 2:
            raise BadKError(f"quantile bin count must be >= 2, got {k}")
        return cls("quantile", k=int(k))

    @classmethod
    def continuous(cls) -> "BinningScheme":
        return cls("continuous")

    @property
    def n_bins(self) -> Optional[int]:
        if self.kind == "threshold":
            return len(self.edges) + 1
        if self.kind == "quantile":
            return self.k
        return None

    def to_dict(self) -> dict:
        if self.kind == "threshold":
            return {"kind": "threshold", "edges": list(self.edges)}
        if self.kind == "quantile":
            return {"kind": "quantile", "k": self.k}
        return {"kind": "continuous"}

    @classmethod
    def from_dict(cls, doc: dict) -> "BinningScheme":
        kind = doc.get("kind")
        if kind == "threshold":
            return cls.threshold(doc["edges"])
        if kind == "quantile":
            return cls.quantile(doc["k"])
        if kind == "continuous":
            return cls.continuous()
        raise ValueError(f"unknown binning kind: {kind!r}")


@dataclass(frozen=True)
class BinnedAttribute:
    name: str
    scheme: BinningScheme
    values: tuple  # int bin indices, or floats in [0, 1] for continuous
    n_bins: Optional[int]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "scheme": self.scheme.to_dict(),
            "n_bins": self.n_bins,
            "values": list(self.values),
        }


# -- operations ----------------------------------------------------------


def load_dataset(
    geometry_doc: Union[dict, str],
    attribute_table: Optional[str] = None,
    join_key: Optional[str] = None,
) -> Dataset:
    """Parse a GeoJSON feature collection, optionally joining a CSV table.

    ``attribute_table`` is CSV text with a header row; rows are matched to
    features on ``join_key`` (compared against the feature id).
    """
    if isinstance(geometry_doc, str):
        try:
            geometry_doc = json.loads(geometry_doc)
        except json.JSONDecodeError as exc:
            raise GeometryParseError(f"geometry document is not valid JSON: {exc}") from exc
    if not isinstance(geometry_doc, dict) or geometry_doc.get("type") != "FeatureCollection":
        raise GeometryParseError("geometry document must be a GeoJSON FeatureCollection")

    features = []
    kinds = set()
    seen_ids = set()
    for idx, feat in enumerate(geometry_doc.get("features", [])):
        geom = feat.get("geometry") or {}
        gtype = geom.get("type")
        if gtype not in ("Polygon", "Point"):
            raise GeometryParseError(f"unsupported geometry type: {gtype!r}")
        kinds.add(gtype)
        try:
            if gtype == "Point":
                x, y = geom["coordinates"]
                coordinates = (float(x), float(y))
            else:
                coordinates = tuple(
                    tuple((float(x), float(y)) for x, y in ring)
                    for ring in geom["coordinates"]
                )
                if not coordinates or any(len(r) < 3 for r in coordinates):
                    raise GeometryParseError("polygon rings need at least 3 vertices")
        except (TypeError, ValueError) as exc:
            raise GeometryParseError(f"malformed coordinates in feature {idx}: {exc}") from exc
        fid = str(feat.get("id", feat.get("properties", {}).get("id", idx)))
        if fid in seen_ids:
            raise GeometryParseError(f"duplicate feature id: {fid!r}")
        seen_ids.add(fid)
        props = dict(feat.get("properties") or {})
        features.append(Feature(fid, Geometry(gtype, coordinates), props))

    if not features:
        raise GeometryParseError("geometry document contains no features")
    if len(kinds) > 1:
        raise MixedGeometryKindsError(f"mixed geometry kinds: {sorted(kinds)}")

    if attribute_table is not None:
        if not join_key:
            raise JoinKeyMissingError([])
        rows = list(csv.DictReader(io.StringIO(attribute_table)))
        if rows and join_key not in rows[0]:
            raise JoinKeyMissingError([f.id for f in features])
        by_key = {row[join_key]: row for row in rows}
        missing = [f.id for f in features if f.id not in by_key]
        if missing:
            raise JoinKeyMissingError(missing)
        joined = []
        for f in features:
            row = by_key[f.id]
            attrs = dict(f.attributes)
            for col, raw in row.items():
                if col == join_key:
                    continue
                if raw is None or raw == "":
                    raise MissingAttributeError(
                        f"feature {f.id!r} has an empty value for column {col!r}"
                    )
                try:
                    attrs[col] = float(raw)
                except ValueError:
                    attrs[col] = raw
            joined.append(Feature(f.id, f.geometry, attrs))
        features = joined

    # Attribute-name sets must agree across features.
    names = set(features[0].attributes)
    for f in features[1:]:
        if set(f.attributes) != names:
            raise MissingAttributeError(
                f"feature {f.id!r} attribute names differ from the first feature"
            )

    implantation = Implantation.POINT if kinds == {"Point"} else Implantation.AREA
    return Dataset(tuple(features), implantation)


def load_dataset_files(
    geometry_path: Union[str, Path],
    attribute_path: Optional[Union[str, Path]] = None,
    join_key: Optional[str] = None,
) -> Dataset:
    geometry = Path(geometry_path).read_text()
    attributes = Path(attribute_path).read_text() if attribute_path else None
    return load_dataset(geometry, attributes, join_key)


def coefficient_of_variation(mean: float, sd: float) -> float:
    """sd / mean; the uncertainty measure used throughout the pipeline."""
    if mean == 0:
        raise ZeroMeanError("coefficient of variation is undefined for zero mean")
    return sd / mean


def bin_threshold(values: Sequence[float], edges: Sequence[float]) -> list[int]:
    """Classify against fixed edges; a value equal to an edge takes the upper bin."""
    edges = list(edges)
    if any(b <= a for a, b in zip(edges, edges[1:])):
        raise NonMonotonicEdgesError(f"edges must strictly increase: {edges}")
    return [bisect_right(edges, float(v)) for v in values]


def quantile_cut_ranks(n: int, k: int) -> list[int]:
    """Rank positions (1-based) of the j/k empirical quantiles, j = 1..k-1."""
    return [math.ceil(j * n / k) for j in range(1, k)]


def bin_quantile(values: Sequence[float], k: int) -> list[int]:
    """Empirical rank-cut quantile bins; ties fall into the lower bin.

    Cut values are the ceil(j*n/k)-th smallest elements; an element lands
    above cut j only when it strictly exceeds the cut value, so the bin
    index follows the value (stable under input permutation).
    """
    if k < 2:
        raise BadKError(f"quantile bin count must be >= 2, got {k}")
    if not values:
        raise BadKError("cannot bin an empty value list")
    vals = [float(v) for v in values]
    ordered = sorted(vals)
    cuts = [ordered[r - 1] for r in quantile_cut_ranks(len(vals), k)]
    return [sum(v > c for c in cuts) for v in vals]


def normalize_continuous(values: Sequence[float]) -> list[float]:
    """Min-max normalization over the dataset; degenerate inputs map to 0."""
    vals = [float(v) for v in values]
    lo, hi = min(vals), max(vals)
    if hi == lo:
        return [0.0 for _ in vals]
    return [(v - lo) / (hi - lo) for v in vals]


def apply_binning(name: str, values: Sequence[float], scheme: BinningScheme) -> BinnedAttribute:
    if scheme.kind == "threshold":
        binned = bin_threshold(values, scheme.edges)
    elif scheme.kind == "quantile":
        binned = bin_quantile(values, scheme.k)
    else:
        binned = normalize_continuous(values)
    return BinnedAttribute(name, scheme, tuple(binned), scheme.n_bins)


@dataclass(frozen=True)
class BinningCheck:
    ok: bool
    n_bins: Optional[int] = None
    limit: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok


def validate_binning(
    variable: VisualVariable,
    implantation: Implantation,
    scheme: BinningScheme,
    kb: KnowledgeBase,
) -> BinningCheck:
    """Selectivity requires discrete bins within the variable's selective length."""
    if scheme.kind == "continuous":
        return BinningCheck(ok=True)
    entry = kb.selective_length(variable, implantation)
    if entry is None:
        raise UnavailableVariableError(
            f"{variable.value} has no selective length at {implantation.value} implantation"
        )
    n_bins = scheme.n_bins
    return BinningCheck(ok=n_bins <= entry.length, n_bins=n_bins, limit=entry.length)
