"""Regenerate the bundled CSV fixtures from scikit-learn's copies of the
classic datasets. Run once; the CSVs are checked in so the package itself
does not depend on scikit-learn."""

import csv
import json
from pathlib import Path

from sklearn.datasets import load_breast_cancer, load_diabetes, load_iris

OUT = Path(__file__).resolve().parent.parent / "src" / "andrewsplot" / "data"


def snake(name: str) -> str:
    return name.strip().lower().replace(" ", "_").replace("(", "").replace(")", "")


def write(path: Path, header, rows):
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def main():
    OUT.mkdir(parents=True, exist_ok=True)

    iris = load_iris()
    write(
        OUT / "iris.csv",
        [snake(n) for n in iris.feature_names] + ["species"],
        [[repr(float(v)) for v in row] + [iris.target_names[t]]
         for row, t in zip(iris.data, iris.target)],
    )

    bc = load_breast_cancer()
    write(
        OUT / "breast_cancer.csv",
        [snake(n) for n in bc.feature_names] + ["diagnosis"],
        [[repr(float(v)) for v in row] + [bc.target_names[t]]
         for row, t in zip(bc.data, bc.target)],
    )

    dia = load_diabetes(scaled=False)
    write(
        OUT / "diabetes.csv",
        list(dia.feature_names) + ["target"],
        [[repr(float(v)) for v in row] + [repr(float(t))]
         for row, t in zip(dia.data, dia.target)],
    )

    manifest = [
        {"id": "iris", "file": "iris.csv", "label_mode": "column", "label_column": "species"},
        {"id": "breast-cancer", "file": "breast_cancer.csv", "label_mode": "column", "label_column": "diagnosis"},
        {"id": "diabetes", "file": "diabetes.csv", "label_mode": "quartile", "label_column": "target"},
    ]
    (OUT / "datasets.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    print("wrote fixtures to", OUT)


if __name__ == "__main__":
    main()
