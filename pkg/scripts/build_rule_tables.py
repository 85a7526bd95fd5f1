"""Regenerate src/bivimap/data/rule_tables.json from the transcribed rule grids.

The grids below are the single place the printed tables are typed in by hand;
the JSON artifact is derived from them so row-major ordering stays consistent.
"""

import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "bivimap" / "data" / "rule_tables.json"

THEMATIC_ROWS = ["Value", "Size", "Texture", "Density"]
UNCERTAINTY_COLS = ["Saturation", "Blur", "Transparency", "Value", "Size", "Texture", "Density"]

# Availability grids: "." = blank cell, "Y" = available, letter suffix = variant footnote.
AVAILABILITY = {
    "Point": [
        "Y  Y  Y  YA Y  .  .",
        "Y  Y  Y  Y  .  .  .",
        ".  .  .  .  .  .  .",
        ".  .  .  .  .  .  .",
    ],
    "Line": [
        "Y  Y  Y  YA Y  Y  Y",
        "Y  Y  Y  Y  YC YB YB",
        "Y  Y  Y  Y  YB .  .",
        "Y  Y  Y  Y  YB .  .",
    ],
    "Area": [
        "Y  Y  Y  YA Y  Y  Y",
        "Y  Y  Y  Y  Y  .  .",
        "Y  Y  Y  Y  .  .  .",
        "Y  Y  Y  Y  .  .  YD",
    ],
}

VARIANTS = {
    "A": "BivariateChoropleth",
    "B": "LineWidth",
    "C": "WidthWithDashLength",
    "D": "Crosshatch",
}

# Separability grids: class letter, "!" = established (underlined in print),
# "*" = classification uncertain / not recommended, "." = blank.
SEPARABILITY = {
    "Point": [
        "I! S! I! I! S! .  . ",
        "S! S! S! S! .  .  . ",
        ".  .  .  .  .  .  . ",
        ".  .  .  .  .  .  . ",
    ],
    "Line": [
        "I  S  I  I  S  S  A ",
        "S  S  S  S  A* A* A*",
        "S  S  S  S  A* .  . ",
        "S  S  S  A* A* .  . ",
    ],
    "Area": [
        "I! S! I! I! S! S  A ",
        "S! S! S! S! C! .  . ",
        "S  S  S  S  .  .  . ",
        "S! S  S! A  .  .  C!",
    ],
}

CLASSES = {"I": "Integral", "S": "Separable", "A": "Asymmetric", "C": "Configural"}

# Selective lengths per implantation; "!" = established, None = blank cell.
LENGTHS = {
    "Blur": ["3", "3", "3"],
    "Transparency": ["3", "4", "5"],
    "Saturation": ["3", "4", "5"],
    "Value": ["3!", "4!", "5!"],
    "Size": ["4!", "4!", "5!"],
    "Texture": [None, "4!", "5!"],
    "Density": [None, "4", "5"],
}

VARIABLE_ORDER = ["Blur", "Transparency", "Saturation", "Value", "Size", "Texture", "Density"]
UNCERTAINTY_ONLY = {"Saturation", "Blur", "Transparency"}

TASKS = [
    ("Identify", "Univariate", "Selective"),
    ("CompareWithin", "Univariate", "Ordinal"),
    ("RankCompare", "Univariate", "Ordinal"),
    ("RatioCompare", "Univariate", "Quantitative"),
    ("Locate", "Univariate", "Selective"),
    ("Distribution", "Univariate", "Associative"),
    ("WeightedDistribution", "Univariate", "Dissociative"),
    ("Isolate", "Bivariate", "Separable"),
    ("CompareBetween", "Bivariate", "Separable"),
    ("Correlate", "Bivariate", "Integral"),
    ("Associate", "Bivariate", "Integral"),
    ("PrioritisedInterpretation", "Bivariate", "Asymmetric"),
    ("WeightedInterpretation", "Bivariate", "Dissociative"),
    ("AssociateAndIsolate", "Bivariate", "Configural"),
    ("Combine", "Bivariate", "Configural"),
]


def parse_grid(rows):
    cells = []
    for r, row in enumerate(rows):
        toks = row.split()
        assert len(toks) == 7, row
        for c, tok in enumerate(toks):
            if tok == ".":
                continue
            cells.append((THEMATIC_ROWS[r], UNCERTAINTY_COLS[c], tok))
    return cells


def main():
    doc = {
        "schema_version": "1",
        "variables": {},
        "selective_lengths": {},
        "availability": {},
        "separability": {},
        "tasks": {},
    }

    for v in VARIABLE_ORDER:
        doc["variables"][v] = {
            "uncertainty_only": v in UNCERTAINTY_ONLY,
            "selective": True,
            "associative": v == "Texture",
            "ordered": True,
            "quantitative": v == "Size",
        }
        lengths = {}
        for impl, tok in zip(["Point", "Line", "Area"], LENGTHS[v]):
            if tok is None:
                lengths[impl] = None
            else:
                lengths[impl] = {
                    "length": int(tok.rstrip("!")),
                    "evidence": "Established" if tok.endswith("!") else "AuthorEstimate",
                }
        doc["selective_lengths"][v] = lengths

    for impl, rows in AVAILABILITY.items():
        entries = []
        for t, u, tok in parse_grid(rows):
            assert tok[0] == "Y"
            entries.append({
                "thematic": t,
                "uncertainty": u,
                "variant": VARIANTS[tok[1]] if len(tok) > 1 else None,
            })
        doc["availability"][impl] = entries

    for impl, rows in SEPARABILITY.items():
        entries = []
        for t, u, tok in parse_grid(rows):
            entries.append({
                "thematic": t,
                "uncertainty": u,
                "class": CLASSES[tok[0]],
                "evidence": "Established" if "!" in tok else "AuthorEstimate",
                "uncertain_not_recommended": "*" in tok,
            })
        doc["separability"][impl] = entries

    for name, arity, req in TASKS:
        doc["tasks"][name] = {"arity": arity, "requirement": req}

    # Cross-grid closure: separability cells and availability cells must coincide.
    for impl in ["Point", "Line", "Area"]:
        avail = {(e["thematic"], e["uncertainty"]) for e in doc["availability"][impl]}
        sep = {(e["thematic"], e["uncertainty"]) for e in doc["separability"][impl]}
        assert avail == sep, (impl, avail ^ sep)

    OUT.write_text(json.dumps(doc, indent=2) + "\n")
    counts = {i: len(doc["availability"][i]) for i in doc["availability"]}
    stars = sum(e["uncertain_not_recommended"] for e in doc["separability"]["Line"])
    print("wrote", OUT, counts, "line asterisks:", stars)


if __name__ == "__main__":
    main()
