"""
Scenario parsing and the command line, driven through run() with JSON documents in tmp_path.
"""
import json
import math

import numpy as np
import pandas as pd
import pytest

from kkorbits.cli import EXIT_INVALID, EXIT_NUMERICAL, EXIT_OK, pretty_prefix, run
from kkorbits.config import parse_element, parse_fields, parse_momentum, parse_scenario
from kkorbits.errors import ConfigError
from kkorbits.groups import GroupFlavor

G0_WORLDLINE = {"flavor": "G0", "worldline": {"X": [0.3, -0.2, 0.5, 0.1], "I": [1, 0, 0, 0], "J": [0, 0, 0, 1],
                                              "s": 0.5, "m0": 2.0, "q": 1.5}}
G1_WORLDLINE = {"flavor": "G1", "worldline_5d": {"X": [0, 0, 0, 0, 0], "I": [math.sqrt(2.0), 0, 0, 0, 1],
                                                 "J1": [0, 1, 0, 0, 0], "J2": [0, 0, 1, 0, 0], "s": 0.5, "m0": 1.0}}
CYCLOTRON = {"fields": {"potential": {"name": "uniform_magnetic", "B0": 1.0}},
             "particle": {"v": [0.6, 0.0, 0.0], "q": 1.0, "m0": 1.0}, "ds": 1e-3, "n_steps": 2000}


@pytest.fixture
def scenario(tmp_path):
    def write(document, name="scenario.json"):
        path = tmp_path / name
        path.write_text(document if isinstance(document, str) else json.dumps(document))
        return str(path)

    return write


def run_json(command, config, tmp_path, *extra):
    out = tmp_path / f"{command}.json"
    assert run([command, "--config", config, "--out", str(out), *extra]) == EXIT_OK
    return json.loads(out.read_text())


class TestClassify:
    def test_charged_spinning_g0(self, scenario, tmp_path):
        report = run_json("classify", scenario({"momentum": G0_WORLDLINE}), tmp_path)
        assert report["class"] == "charged-with-spin"
        assert report["invariant_count"] == 3
        assert report["orbit_dimension"] == 12
        assert report["invariants"]["s"] == pytest.approx(0.5)
        assert report["invariants"]["q"] == pytest.approx(1.5)

    def test_poincare_rest_mass(self, scenario, tmp_path):
        momentum = {"flavor": "Poincare", "worldline": {"X": [0, 0, 0, 0], "I": [1, 0, 0, 0], "J": [0, 0, 0, 1],
                                                        "s": 0.5, "m0": 2.0}}
        report = run_json("classify", scenario({"momentum": momentum}), tmp_path)
        assert report["class"] == "uncharged-with-spin"
        assert report["invariants"]["m0"] == pytest.approx(2.0)
        assert report["invariant_count"] == 2

    def test_g1_worldline_5d(self, scenario, tmp_path):
        report = run_json("classify", scenario({"momentum": G1_WORLDLINE}), tmp_path)
        assert report["invariant_count"] == 3
        assert report["invariants"]["m0"] == pytest.approx(1.0)


class TestAct:
    def test_charge_witness(self, scenario, tmp_path):
        document = {"momentum": {"flavor": "G1", "Pi": [1, 0, 0, 0]}, "element": {"b": [1, 0, 0, 0]}}
        report = run_json("act", scenario(document), tmp_path)
        row = report["table"][0]
        assert row["q_before"] == 0.0
        assert row["q_after"] == pytest.approx(-1.0)
        assert abs(row["q_after"] - row["q_before"]) > 0.5
        assert row["fifth_displayed_law"] == pytest.approx(math.sqrt(2.0))
        assert report["momentum_after"]["q"] == pytest.approx(-1.0)
        assert report["max_closed_form_error"] < 1e-9

    def test_larger_boost_witness(self, scenario, tmp_path):
        document = {"momentum": {"flavor": "G1", "Pi": [1, 0, 0, 0]}, "element": {"b": [2, 0, 0, 0]}}
        row = run_json("act", scenario(document), tmp_path)["table"][0]
        assert abs(row["q_after"] - row["q_before"]) > 1.0
        assert row["q_after"] == pytest.approx(-2.0)
        assert row["fifth_matrix"] == pytest.approx(2.0)

    def test_random_actions_are_reproducible(self, scenario, tmp_path):
        config = scenario({"momentum": G1_WORLDLINE, "random_count": 4, "seed": 7})
        first = tmp_path / "first.json"
        second = tmp_path / "second.json"
        assert run(["act", "--config", config, "--out", str(first)]) == EXIT_OK
        assert run(["act", "--config", config, "--out", str(second)]) == EXIT_OK
        assert first.read_text() == second.read_text()
        assert json.loads(first.read_text())["actions"] == 4

    def test_seed_override(self, scenario, tmp_path):
        config = scenario({"momentum": G1_WORLDLINE, "random_count": 2, "seed": 7})
        default = run_json("act", config, tmp_path)
        overridden = run_json("act", config, tmp_path, "--seed", "8")
        assert default["table"] != overridden["table"]

    def test_needs_something_to_do(self, scenario, caplog):
        assert run(["act", "--config", scenario({"momentum": G0_WORLDLINE})]) == EXIT_INVALID
        assert "needs an element" in caplog.text


class TestSweep:
    def test_g0_row_keeps_charge(self, scenario, tmp_path):
        document = {"b": [1, 0, 0, 0], "momentum": {"Pi": [1, 0, 0, 0]}, "omegas": [0.5, 0.1]}
        report = run_json("sweep", scenario(document), tmp_path)
        assert report["rows"] == 3
        assert report["g0_dq"] == 0.0
        assert [row["flavor"] for row in report["table"]] == ["GOmega", "GOmega", "G0"]
        assert report["table"][0]["dq"] == pytest.approx(-0.25)

    def test_displayed_law_column(self, scenario, tmp_path):
        document = {"b": [1, 0, 0, 0], "momentum": {"Pi": [1, 0, 0, 0]}, "omegas": [1.0]}
        g1_row, g0_row = run_json("sweep", scenario(document), tmp_path)["table"]
        assert g1_row["fifth_displayed_law"] == pytest.approx(math.sqrt(2.0))
        assert g1_row["fifth_matrix"] == pytest.approx(1.0)
        assert g0_row["fifth_displayed_law"] is None

    def test_rejects_zero_omega(self, scenario):
        document = {"b": [0.3, 0, 0, 0], "momentum": {"Pi": [2, 0, 0, 0]}, "omegas": [0.0]}
        assert run(["sweep", "--config", scenario(document)]) == EXIT_INVALID


class TestIntegrate:
    def test_cyclotron_radius(self, scenario, tmp_path):
        report = run_json("integrate", scenario(CYCLOTRON), tmp_path)
        assert report["expected_radius"] == pytest.approx(0.75)
        assert report["radius_error"] < 1e-6
        assert report["max_unit_norm_drift"] < 1e-9
        assert report["q"] == 1.0

    def test_transport_agrees_with_motion(self, scenario, tmp_path):
        motion = run_json("integrate", scenario(CYCLOTRON), tmp_path)
        transport = run_json("integrate", scenario({**CYCLOTRON, "method": "transport"}, "t.json"), tmp_path)
        assert np.allclose(transport["final_X"], motion["final_X"], atol=1e-8)

    def test_csv_output(self, scenario, tmp_path):
        out = tmp_path / "trajectory.csv"
        document = {**CYCLOTRON, "n_steps": 10}
        assert run(["integrate", "--config", scenario(document), "--format", "csv", "--out", str(out)]) == EXIT_OK
        table = pd.read_csv(out)
        assert len(table) == 11
        assert {"s", "X0", "U3", "unit_norm_drift"} <= set(table.columns)

    def test_superluminal_particle(self, scenario):
        document = {**CYCLOTRON, "particle": {"v": [1.0, 0.5, 0.0], "q": 1.0, "m0": 1.0}}
        assert run(["integrate", "--config", scenario(document)]) == EXIT_INVALID


class TestResiduals:
    def test_flat_vacuum(self, scenario, tmp_path):
        document = {"fields": {}, "points": [[0, 0, 0, 0], [1.0, 0.5, 0.2, 0.1]]}
        report = run_json("residuals", scenario(document), tmp_path)
        for key in ("einstein", "maxwell", "matter", "charge"):
            assert report[key] < 1e-12, key
        assert len(report["table"]) == 2

    def test_newtonian_columns(self, scenario, tmp_path):
        document = {"fields": {"metric": {"name": "weak_field", "mass": 1e-4},
                               "potential": {"name": "charged_ball"}},
                    "points": [[0, 0.3, 0.2, -0.1]], "newtonian": True}
        row = run_json("residuals", scenario(document), tmp_path)["table"][0]
        assert row["maxwell_term"] == pytest.approx(1.0, rel=1e-2)
        assert abs(row["coupling_ratio"]) < 1e-2

    def test_singular_metric(self, scenario, caplog):
        document = {"fields": {"metric": {"name": "weak_field", "mass": 0.5, "softening": 1.0}},
                    "points": [[0, 0, 0, 0]]}
        assert run(["residuals", "--config", scenario(document)]) == EXIT_NUMERICAL
        assert "singular metric" in caplog.text


class TestVecprod:
    def test_recursive_matches_direct(self, scenario, tmp_path):
        vectors = [[1, 0.2, 0, 0.1, 0], [0, 1, 0.3, 0, 0.2], [0.1, 0, 1, 0, 0.4], [0, 0.3, 0, 1, 0.5]]
        report = run_json("vecprod", scenario({"metric": {"omega": 0.5}, "vectors": vectors}), tmp_path)
        assert report["dim"] == 5
        assert report["recursive_difference"] < 1e-10

    def test_minkowski_spatial_frame(self, scenario, tmp_path):
        vectors = [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
        report = run_json("vecprod", scenario({"metric": {"name": "minkowski"}, "vectors": vectors}), tmp_path)
        assert np.allclose(report["J"], [-1.0, 0.0, 0.0, 0.0])

    def test_wrong_vector_count(self, scenario):
        document = {"metric": {"name": "minkowski"}, "vectors": [[0, 1, 0, 0]]}
        assert run(["vecprod", "--config", scenario(document)]) == EXIT_INVALID


class TestInvalidDocuments:
    def test_unknown_key(self, scenario, caplog):
        assert run(["classify", "--config", scenario({"momentm": G0_WORLDLINE})]) == EXIT_INVALID
        assert "unknown keys ['momentm']" in caplog.text

    def test_bad_json(self, scenario):
        assert run(["classify", "--config", scenario("{\"momentum\": ")]) == EXIT_INVALID

    def test_missing_file(self, tmp_path):
        assert run(["classify", "--config", str(tmp_path / "absent.json")]) == EXIT_INVALID

    def test_matrix_shape(self):
        with pytest.raises(ConfigError, match=r"momentum\.M: expected a 4x4 matrix"):
            parse_momentum({"flavor": "G0", "Pi": [1, 0, 0, 0], "M": [[1, 0], [0, 1]]})

    def test_nested_key_path(self):
        with pytest.raises(ConfigError, match=r"momentum\.worldline\.J\[2\]: expected a finite number"):
            parse_momentum({"flavor": "G0", "worldline": {"X": [0, 0, 0, 0], "I": [1, 0, 0, 0],
                                                          "J": [0, 0, "z", 1], "s": 0.5, "m0": 1.0}})

    def test_unknown_flavor(self):
        with pytest.raises(ConfigError, match=r"momentum\.flavor: unknown group flavor"):
            parse_momentum({"flavor": "SL2", "Pi": [1, 0, 0, 0]})

    def test_poincare_charge(self):
        with pytest.raises(ConfigError, match="momentum"):
            parse_momentum({"flavor": "Poincare", "Pi": [1, 0, 0, 0], "q": 1.0})

    def test_element_keys(self):
        with pytest.raises(ConfigError, match=r"element: unknown keys \['c'\]"):
            parse_element({"c": [0, 0, 0, 0]}, GroupFlavor.g1())

    def test_element_lorentz_given_twice(self):
        with pytest.raises(ConfigError, match="either P_L or boost"):
            parse_element({"P_L": np.eye(4).tolist(), "boost": [0.1, 0, 0]}, GroupFlavor.g1())

    def test_unknown_preset(self):
        with pytest.raises(ConfigError, match=r"fields\.metric\.name: unknown preset 'kerr'"):
            parse_fields({"metric": {"name": "kerr"}})

    def test_preset_parameter(self):
        with pytest.raises(ConfigError, match=r"fields\.metric: unknown keys \['mas'\]"):
            parse_fields({"metric": {"name": "weak_field", "mas": 1.0}})

    def test_tolerance_must_be_positive(self):
        with pytest.raises(ConfigError, match="tol: must be positive"):
            parse_scenario("classify", {"momentum": G0_WORLDLINE, "tol": 0.0})


def test_gauge_shift_leaves_residuals_unchanged(scenario, tmp_path):
    base = {"fields": {"potential": {"name": "coulomb"}}, "points": [[0, 1.0, 2.0, 2.0]]}
    gauged = {"fields": {"potential": {"name": "coulomb"}, "gauge": {"gradient": [0.4, -0.1, 0.2, 0.3]}},
              "points": [[0, 1.0, 2.0, 2.0]]}
    plain = run_json("residuals", scenario(base), tmp_path)
    shifted = run_json("residuals", scenario(gauged, "gauged.json"), tmp_path)
    assert shifted["maxwell"] == pytest.approx(plain["maxwell"], abs=1e-9)


@pytest.mark.parametrize("x, expected", [(1500.0, "1.5 k"), (0.002, "2 m"), (0.0, "0")])
def test_pretty_prefix(x, expected):
    assert pretty_prefix(x) == expected
