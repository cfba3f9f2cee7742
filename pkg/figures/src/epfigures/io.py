"""Readers for the exported artifacts (trajectory CSV, model JSON, style config)."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class FigureError(Exception):
    """Unusable input or request (missing file, missing columns, empty data)."""


TRAJECTORY_COLUMNS = [
    "xi1", "reKn", "imKn", "reKn1", "imKn1",
    "reEn", "imEn", "reEn1", "imEn1",
    "reEhatN", "imEhatN", "reEhatN1", "imEhatN1", "model_valid",
]


@dataclass
class Trajectory:
    """Columnar view of one exported pole trajectory."""

    xi1: np.ndarray
    energy_n: np.ndarray  # complex
    energy_m: np.ndarray  # complex
    model_n: np.ndarray  # complex, nan where invalid
    model_m: np.ndarray  # complex, nan where invalid
    model_valid: np.ndarray  # bool


def _cell(value: str) -> float:
    return float(value) if value.strip() else math.nan


def load_trajectory(path) -> Trajectory:
    path = Path(path)
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise FigureError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise FigureError(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    missing = [c for c in TRAJECTORY_COLUMNS if c not in header]
    if missing:
        raise FigureError(f"{path} is missing columns {missing}")
    body = rows[1:]
    if not body:
        raise FigureError(f"{path} has a header but no data rows")
    idx = {c: header.index(c) for c in TRAJECTORY_COLUMNS}

    def col(name):
        return np.array([_cell(r[idx[name]]) for r in body])

    valid = np.array([r[idx["model_valid"]].strip() == "1" for r in body])
    return Trajectory(
        xi1=col("xi1"),
        energy_n=col("reEn") + 1j * col("imEn"),
        energy_m=col("reEn1") + 1j * col("imEn1"),
        model_n=col("reEhatN") + 1j * col("imEhatN"),
        model_m=col("reEhatN1") + 1j * col("imEhatN1"),
        model_valid=valid,
    )


@dataclass
class ModelJson:
    """The fields of the exported model needed to draw the two energy sheets."""

    e_d: complex
    r_vec: np.ndarray
    i_vec: np.ndarray
    e_shift: np.ndarray  # complex (2,)
    cut_dir: np.ndarray
    validity_radius: float | None


def load_model_json(path) -> ModelJson:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise FigureError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FigureError(f"{path} is not valid JSON: {exc}") from exc
    try:
        k_d = complex(*doc["exceptional_point"]["k_d"])
        u = doc["unfolding"]
        return ModelJson(
            e_d=k_d * k_d,
            r_vec=np.array(u["R"], dtype=float),
            i_vec=np.array(u["I"], dtype=float),
            e_shift=np.array([complex(*v) for v in u["e_shift"]]),
            cut_dir=np.array(u["cut_dir"], dtype=float),
            validity_radius=u.get("validity_radius"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FigureError(f"{path} is missing model fields: {exc}") from exc


@dataclass
class Style:
    """Small rendering style configuration (key = value file)."""

    width: float = 7.0
    height: float = 5.5
    dpi: int = 150
    color_n: str = "tab:blue"
    color_m: str = "tab:red"
    color_model: str = "0.55"
    fmt: str = "png"

    @classmethod
    def load(cls, path) -> "Style":
        style = cls()
        try:
            lines = Path(path).read_text().splitlines()
        except OSError as exc:
            raise FigureError(f"cannot read style file {path}: {exc}") from exc
        casts = {"width": float, "height": float, "dpi": int}
        for lineno, raw in enumerate(lines, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise FigureError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            if not hasattr(style, key):
                raise FigureError(f"{path}:{lineno}: unknown style key {key!r}")
            try:
                setattr(style, key, casts.get(key, str)(value))
            except ValueError as exc:
                raise FigureError(f"{path}:{lineno}: bad value for {key}") from exc
        return style
