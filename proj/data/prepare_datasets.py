"""Rebuild the bundled CSV files from their upstream copies.

usage: python3 prepare_datasets.py BIOPSY_CSV SONAR_DAT PIMA_DAT HYPOTHYROID_DATA OUT_DIR

BIOPSY_CSV        MASS/biopsy.csv from the pydataset 0.2.0 package
SONAR_DAT         keel_ds/data/balanced/raw/sonar.dat from keel-ds 0.2.5
PIMA_DAT          keel_ds/data/balanced/raw/pima.dat from keel-ds 0.2.5
HYPOTHYROID_DATA  imbalanced_databases/data/hypothyroid/hypothyroid.data.txt
                  from imbalanced-databases 0.1.1
"""

import csv
import os
import statistics
import sys


def write(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def keel_rows(path):
    with open(path) as f:
        return [[v.strip() for v in line.split(",")] for line in f if line.strip() and not line.startswith("@")]


def median_fill(columns):
    meds = [statistics.median(float(v) for v in col if v not in ("?", "NA")) for col in columns]
    return [[(str(m) if v in ("?", "NA") else v) for v in col] for col, m in zip(columns, meds)]


def breast_cancer(src, out):
    with open(src) as f:
        rows = list(csv.reader(f))[1:]
    cols = median_fill([[r[2 + k] for r in rows] for k in range(9)])
    body = [[cols[k][i] for k in range(9)] + ["1" if r[-1] == "malignant" else "0"] for i, r in enumerate(rows)]
    write(out, ["clump_thickness", "cell_size", "cell_shape", "adhesion", "epithelial_size", "bare_nuclei",
                "chromatin", "nucleoli", "mitoses", "malignant"], body)


def sonar(src, out):
    rows = keel_rows(src)
    write(out, ["band%02d" % k for k in range(1, 61)] + ["mine"],
          [r[:-1] + ["1" if r[-1] == "M" else "0"] for r in rows])


def pima(src, out):
    rows = keel_rows(src)
    write(out, ["pregnancies", "glucose", "pressure", "skin", "insulin", "bmi", "pedigree", "age", "diabetic"],
          [r[:-1] + ["1" if r[-1] == "tested_positive" else "0"] for r in rows])


HYPO_NAMES = ["age", "sex", "on_thyroxine", "query_on_thyroxine", "on_antithyroid_medication", "thyroid_surgery",
              "query_hypothyroid", "query_hyperthyroid", "pregnant", "sick", "tumor", "lithium", "goitre",
              "TSH_measured", "TSH", "T3_measured", "T3", "TT4_measured", "TT4", "T4U_measured", "T4U",
              "FTI_measured", "FTI", "TBG_measured", "TBG"]
HYPO_CONTINUOUS = {"age", "TSH", "T3", "TT4", "T4U", "FTI", "TBG"}


def hypothyroid(src, out):
    with open(src) as f:
        rows = [line.strip().split(",") for line in f if line.strip()]
    feats = [r[1:] for r in rows]
    cols = []
    for k, name in enumerate(HYPO_NAMES):
        col = [f[k] for f in feats]
        if name in HYPO_CONTINUOUS:
            cols.append(median_fill([col])[0])
        elif name == "sex":
            cols.append([{"M": "1", "F": "0"}.get(v, "0.5") for v in col])
        else:
            cols.append(["1" if v in ("t", "y") else "0" for v in col])
    body = [[cols[k][i] for k in range(len(HYPO_NAMES))] + ["1" if r[0] == "hypothyroid" else "0"]
            for i, r in enumerate(rows)]
    write(out, HYPO_NAMES + ["hypothyroid"], body)


def main(argv):
    if len(argv) != 6:
        sys.exit(__doc__)
    biopsy, sonar_src, pima_src, hypo_src, out_dir = argv[1:]
    breast_cancer(biopsy, os.path.join(out_dir, "breast_cancer_wisconsin.csv"))
    sonar(sonar_src, os.path.join(out_dir, "sonar.csv"))
    pima(pima_src, os.path.join(out_dir, "pima_diabetes.csv"))
    hypothyroid(hypo_src, os.path.join(out_dir, "hypothyroid.csv"))


if __name__ == "__main__":
    main(sys.argv)
