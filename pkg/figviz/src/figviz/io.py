"""Readers for the gatequiz CSV schemas."""

from __future__ import annotations

import csv


def read_survey_csv(path):
    """Rows of `index,seed,p_fail,infid,kraus_rank` (id column tolerated)."""
    points = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"p_fail", "infid"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: not a survey CSV (need p_fail and infid columns)")
        for row in reader:
            points.append((float(row["p_fail"]), float(row["infid"])))
    return points


def read_noise_curve_csv(path):
    """Map family -> list of (t, p_fail, infid), sorted by t."""
    curves = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        needed = {"family", "t", "p_fail", "infid"}
        if reader.fieldnames is None or not needed <= set(reader.fieldnames):
            raise ValueError(f"{path}: not a noise-curve CSV (need {sorted(needed)})")
        for row in reader:
            curves.setdefault(row["family"], []).append(
                (float(row["t"]), float(row["p_fail"]), float(row["infid"]))
            )
    for rows in curves.values():
        rows.sort(key=lambda r: r[0])
    return curves
