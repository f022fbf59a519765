"""Profile documents (JSON) and CSV tables.

Floats are written with ``repr``, the shortest decimal that reads back to
the same double, so a write/read cycle is bit-exact.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import ComplexField, Grid, RealField
from .errors import ConfigurationError
from .evolution import EnergyTrace, FieldState
from .functionals import ModelParams
from .variational import SWEEP_COLUMNS, SweepRecord, WaveProfile

SCHEMA_VERSION = 1
PROVENANCES = ("minimize", "standing", "shoot")


def _float_or_none(x):
    return None if x is None else float(x)


@dataclass
class ProfileDocument:
    params: ModelParams
    grid: Grid
    phi: np.ndarray
    psi: np.ndarray
    c: float
    cstar: float
    w: float
    lam: float | None = None
    mu: float | None = None
    d: float | None = None
    provenance: str = "standing"
    schema_version: int = SCHEMA_VERSION
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.phi = np.asarray(self.phi, dtype=float)
        self.psi = np.asarray(self.psi, dtype=float)
        if self.phi.shape != (self.grid.n,) or self.psi.shape != (self.grid.n,):
            raise ConfigurationError("profile arrays must have length n")
        if self.provenance not in PROVENANCES:
            raise ConfigurationError(f"unknown provenance {self.provenance!r}")
        if self.schema_version != SCHEMA_VERSION:
            raise ConfigurationError(f"unsupported schema_version {self.schema_version}")

    @classmethod
    def from_profile(cls, profile: WaveProfile, **meta) -> "ProfileDocument":
        return cls(profile.params, profile.grid, profile.phi.samples.copy(),
                   profile.psi.samples.copy(), float(profile.c), float(profile.cstar),
                   float(profile.w), _float_or_none(profile.lam), _float_or_none(profile.mu),
                   _float_or_none(profile.d), profile.provenance, meta=dict(meta))

    def to_profile(self) -> WaveProfile:
        return WaveProfile(self.grid, RealField(self.grid, self.phi), RealField(self.grid, self.psi),
                           c=self.c, cstar=self.cstar, w=self.w, params=self.params,
                           lam=self.lam, mu=self.mu, d=self.d, provenance=self.provenance)

    def to_json(self) -> dict:
        p = self.params
        return {
            "schema_version": self.schema_version,
            "params": {"p": p.p, "a": p.a, "gamma": p.gamma, "w": p.w},
            "grid": self.grid.descriptor(),
            "phi": [float(x) for x in self.phi],
            "psi": [float(x) for x in self.psi],
            "c": self.c,
            "cstar": self.cstar,
            "w": self.w,
            "lambda": self.lam,
            "mu": self.mu,
            "d": self.d,
            "provenance": self.provenance,
            "meta": self.meta,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "ProfileDocument":
        try:
            g = doc["grid"]
            grid = Grid(float(g["x_min"]), float(g["dx"]), int(g["n"]), bool(g["periodic"]))
            params = ModelParams(**{k: float(v) for k, v in doc["params"].items()})
            return cls(params, grid, np.array(doc["phi"], dtype=float),
                       np.array(doc["psi"], dtype=float), float(doc["c"]), float(doc["cstar"]),
                       float(doc["w"]), _float_or_none(doc.get("lambda")),
                       _float_or_none(doc.get("mu")), _float_or_none(doc.get("d")),
                       doc.get("provenance", "standing"), int(doc["schema_version"]),
                       dict(doc.get("meta", {})))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigurationError):
                raise
            raise ConfigurationError(f"malformed profile document: {exc}") from exc


def _strict_dump(obj, fh):
    json.dump(obj, fh, allow_nan=False, indent=1)
    fh.write("\n")


def write_profile(path, doc: ProfileDocument) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        _strict_dump(doc.to_json(), fh)


def read_profile(path) -> ProfileDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read profile {path}: {exc}") from exc
    return ProfileDocument.from_json(raw)


def write_state(path, state: FieldState, **meta) -> None:
    """Final-state document: grid, ``t``, ``Re u``, ``Im u``, ``v``."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "grid": state.grid.descriptor(),
        "t": state.t,
        "u_re": [float(x) for x in state.u.samples.real],
        "u_im": [float(x) for x in state.u.samples.imag],
        "v": [float(x) for x in state.v.samples],
        "meta": meta,
    }
    with open(path, "w", encoding="utf-8") as fh:
        _strict_dump(doc, fh)


def read_state(path) -> FieldState:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    g = doc["grid"]
    grid = Grid(float(g["x_min"]), float(g["dx"]), int(g["n"]), bool(g["periodic"]))
    u = np.array(doc["u_re"], dtype=float) + 1j * np.array(doc["u_im"], dtype=float)
    return FieldState(grid, ComplexField(grid, u), RealField(grid, doc["v"]), float(doc["t"]))


def _cell(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    x = float(x)
    return repr(x) if math.isfinite(x) else ("nan" if math.isnan(x) else ("inf" if x > 0 else "-inf"))


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(header)
        for row in rows:
            wr.writerow([_cell(x) for x in row])


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


SIM_COLUMNS = ("t", "mass", "v_total", "shape_error", "lag_estimate")
LIN_COLUMNS = ("t", "lin_energy")


def write_sweep(path, records: list[SweepRecord]) -> None:
    write_csv(path, SWEEP_COLUMNS, [r.row() for r in records])


def write_sim_trace(path, trace: EnergyTrace) -> None:
    n = len(trace.times)
    nan = np.full(n, np.nan)
    se = trace.shape_error if trace.shape_error is not None else nan
    lag = trace.lag_estimate if trace.lag_estimate is not None else nan
    write_csv(path, SIM_COLUMNS, zip(trace.times, trace.mass, trace.v_total, se, lag))


def write_lin_trace(path, trace: EnergyTrace) -> None:
    write_csv(path, LIN_COLUMNS, zip(trace.times, trace.lin_energy))


def ensure_parent(path) -> Path:
    p = Path(path)
    if p.parent and not p.parent.exists():
        p.parent.mkdir(parents=True, exist_ok=True)
    return p
