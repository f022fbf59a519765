import json
import math

import numpy as np
import pytest

from benney_waves import io
from benney_waves.core import Grid
from benney_waves.errors import ConfigurationError
from benney_waves.evolution import FieldState
from benney_waves.functionals import ModelParams
from benney_waves.profiles import StandingWaveSpec, standing_wave
from benney_waves.variational import SWEEP_COLUMNS, SweepRecord


@pytest.fixture(scope="module")
def doc():
    grid = Grid.centered(40.0, 256)
    prof, _ = standing_wave(StandingWaveSpec(ModelParams(p=0.5, a=1.3), grid))
    return io.ProfileDocument.from_profile(prof, note="x")


def test_profile_round_trip_bit_exact(tmp_path, doc):
    path = tmp_path / "p.json"
    io.write_profile(path, doc)
    back = io.read_profile(path)
    assert np.array_equal(back.phi, doc.phi) and np.array_equal(back.psi, doc.psi)
    assert back.grid == doc.grid and back.params == doc.params
    for name in ("c", "cstar", "w", "lam", "mu", "d", "provenance", "schema_version", "meta"):
        assert getattr(back, name) == getattr(doc, name)
    raw = json.loads(path.read_text())
    assert raw["lambda"] is None and raw["schema_version"] == 1
    assert set(raw["grid"]) == {"x_min", "dx", "n", "periodic"}


def test_profile_round_trip_random_values(tmp_path):
    rng = np.random.default_rng(0)
    grid = Grid(-math.pi, 2 * math.pi / 64, 64, True)
    d = io.ProfileDocument(ModelParams(p=-0.5), grid, rng.standard_normal(64) * 1e-300,
                           rng.standard_normal(64) * 1e300, 0.1 + 0.2, 1 / 3, math.e,
                           -0.48743250588056364, 100.0, 10.0, "minimize")
    path = tmp_path / "r.json"
    io.write_profile(path, d)
    back = io.read_profile(path)
    assert np.array_equal(back.phi, d.phi) and np.array_equal(back.psi, d.psi)
    assert (back.c, back.cstar, back.w, back.lam) == (d.c, d.cstar, d.w, d.lam)
    prof = back.to_profile()
    assert prof.lam == d.lam and prof.provenance == "minimize"


def test_document_validation(doc):
    with pytest.raises(ConfigurationError):
        io.ProfileDocument(doc.params, doc.grid, doc.phi[:-1], doc.psi, 0.0, 1.0, 1.0)
    with pytest.raises(ConfigurationError):
        io.ProfileDocument(doc.params, doc.grid, doc.phi, doc.psi, 0.0, 1.0, 1.0,
                           provenance="guess")


def test_malformed_documents(tmp_path, doc):
    bad = doc.to_json()
    del bad["phi"]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    with pytest.raises(ConfigurationError):
        io.read_profile(p)
    other = doc.to_json()
    other["schema_version"] = 2
    p.write_text(json.dumps(other))
    with pytest.raises(ConfigurationError):
        io.read_profile(p)
    p.write_text("{not json")
    with pytest.raises(ConfigurationError):
        io.read_profile(p)


def test_nan_is_not_written(tmp_path, doc):
    d = io.ProfileDocument(doc.params, doc.grid, doc.phi, doc.psi, float("nan"), 1.0, 1.0)
    with pytest.raises(ValueError):
        io.write_profile(tmp_path / "n.json", d)


def test_state_round_trip(tmp_path):
    g = Grid.centered(10.0, 64)
    rng = np.random.default_rng(1)
    st = FieldState.from_arrays(g, rng.standard_normal(64) + 1j * rng.standard_normal(64),
                                rng.standard_normal(64), 2.5)
    io.write_state(tmp_path / "s.json", st)
    back = io.read_state(tmp_path / "s.json")
    assert np.array_equal(back.u.samples, st.u.samples)
    assert np.array_equal(back.v.samples, st.v.samples) and back.t == st.t


def test_sweep_csv_columns_and_values(tmp_path):
    rec = SweepRecord(100.0, 0.5, 10.0, -0.1 - 0.2, 1 / 3, 0.3, -21.6, 67.6, 5.5, 202, 1e-10,
                      2e-11, True)
    nan_rec = SweepRecord(200.0, 0.5, 14.1, *([float("nan")] * 6), 0, float("nan"),
                          float("nan"), False)
    path = tmp_path / "s.csv"
    io.write_sweep(path, [rec, nan_rec])
    header, rows = io.read_csv(path)
    assert tuple(header) == SWEEP_COLUMNS
    assert float(rows[0][3]) == rec.lam and float(rows[0][4]) == rec.c
    assert rows[0][-1] == "true" and rows[1][-1] == "false" and rows[1][4] == "nan"
    assert rows[0][9] == "202"
