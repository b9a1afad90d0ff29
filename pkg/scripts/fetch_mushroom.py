#!/usr/bin/env python3
"""Fetch the UCI mushroom dataset and convert it to the loader's CSV format.

Writes data/mushroom.csv: 8124 records, 22 categorical attributes, one
label column (p = poisonous, e = edible). The '?' placeholder in
stalk_root is kept as an ordinary category symbol. Tries the UCI archive
first, then a well-known GitHub mirror.
"""

import csv
import io
import sys
import urllib.request
import zipfile
from pathlib import Path

UCI_ZIP = "https://archive.ics.uci.edu/static/public/73/mushroom.zip"
MIRROR_CSV = ("https://raw.githubusercontent.com/stedy/"
              "Machine-Learning-with-R-datasets/master/mushrooms.csv")

ATTRS = ["cap_shape", "cap_surface", "cap_color", "bruises", "odor",
         "gill_attachment", "gill_spacing", "gill_size", "gill_color",
         "stalk_shape", "stalk_root", "stalk_surface_above_ring",
         "stalk_surface_below_ring", "stalk_color_above_ring",
         "stalk_color_below_ring", "veil_type", "veil_color", "ring_number",
         "ring_type", "spore_print_color", "population", "habitat"]

OUT = Path(__file__).resolve().parent.parent / "data" / "mushroom.csv"


def rows_from_uci() -> list[list[str]]:
    blob = urllib.request.urlopen(UCI_ZIP, timeout=60).read()
    with zipfile.ZipFile(io.BytesIO(blob)) as zf:
        raw = zf.read("agaricus-lepiota.data").decode()
    return [line.split(",") for line in raw.splitlines() if line.strip()]


def rows_from_mirror() -> list[list[str]]:
    raw = urllib.request.urlopen(MIRROR_CSV, timeout=60).read().decode()
    rows = list(csv.reader(io.StringIO(raw)))
    return rows[1:]  # drop the mirror's header


def main() -> int:
    for fetch in (rows_from_uci, rows_from_mirror):
        try:
            rows = fetch()
            break
        except Exception as exc:  # try the next source
            print(f"{fetch.__name__} failed: {exc}", file=sys.stderr)
    else:
        print("all sources failed", file=sys.stderr)
        return 1
    if len(rows) != 8124 or any(len(r) != 23 for r in rows):
        print(f"unexpected shape: {len(rows)} rows", file=sys.stderr)
        return 1
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["label:type"] + [f"cat:{a}" for a in ATTRS])
        w.writerows(rows)
    print(f"wrote {len(rows)} records -> {OUT}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
