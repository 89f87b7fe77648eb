import math

import numpy as np
import pytest

from twocav import cli, scenario as sc
from twocav.errors import ScenarioError

BASE = """
schema = 1
state = epr
model = markovian
gamma_m = 1.0
m1 = 0
t_max = 1.0
steps = 10
"""


def test_parse_minimal_scenario():
    scn = sc.parse_scenario(BASE)
    assert scn.state == "epr"
    assert scn.steps == 10
    assert scn.window.m1 == 0
    rho = scn.initial_state()
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)


def test_parse_rejects_unknown_and_duplicate_keys():
    with pytest.raises(ScenarioError):
        sc.parse_scenario(BASE + "bogus = 1\n")
    with pytest.raises(ScenarioError):
        sc.parse_scenario(BASE + "m1 = 2\n")


def test_parse_requires_schema_and_core_keys():
    with pytest.raises(ScenarioError):
        sc.parse_scenario("state = epr\nmodel = markovian\nt_max = 1\nsteps = 5\n")
    with pytest.raises(ScenarioError):
        sc.parse_scenario("schema = 1\nstate = epr\nmodel = markovian\n")
    with pytest.raises(ScenarioError):
        sc.parse_scenario(BASE.replace("schema = 1", "schema = 9"))


def test_parse_validates_values():
    with pytest.raises(ScenarioError):
        sc.parse_scenario(BASE.replace("steps = 10", "steps = 1"))
    with pytest.raises(ScenarioError):
        sc.parse_scenario(BASE.replace("t_max = 1.0", "t_max = -1"))
    with pytest.raises(ScenarioError):
        sc.parse_scenario(BASE.replace("state = epr", "state = ghz"))
    with pytest.raises(ScenarioError):
        sc.parse_scenario(BASE + "points = 7\n")


def test_comments_and_blank_lines_ignored():
    text = BASE + "\n# trailing comment\n\n"
    scn = sc.parse_scenario(text)
    assert scn.t_max == 1.0


def _write(tmp_path, text):
    path = tmp_path / "scenario.txt"
    path.write_text(text)
    return str(path)


def test_cli_evolve_writes_csv(tmp_path):
    path = _write(tmp_path, BASE)
    code = cli.main(["evolve", "--scenario", path, "--out", str(tmp_path)])
    assert code == 0
    lines = (tmp_path / "trajectory.csv").read_text().splitlines()
    assert lines[0].startswith("# ")
    assert lines[1].split(",")[0] == "t"
    assert len(lines) == 2 + 10


def test_cli_zero_duration_single_row(tmp_path):
    path = _write(tmp_path, BASE.replace("t_max = 1.0", "t_max = 0"))
    code = cli.main(["evolve", "--scenario", path, "--out", str(tmp_path)])
    assert code == 0
    lines = (tmp_path / "trajectory.csv").read_text().splitlines()
    assert len(lines) == 3
    first = lines[2].split(",")
    assert float(first[0]) == 0.0
    assert float(first[1]) == pytest.approx(0.5, abs=1e-12)


def test_cli_bad_scenario_exit_2(tmp_path):
    path = _write(tmp_path, "schema = 1\nstate = epr\n")
    assert cli.main(["evolve", "--scenario", path, "--out", str(tmp_path)]) == 2
    assert cli.main(["evolve", "--scenario", str(tmp_path / "nope.txt"),
                     "--out", str(tmp_path)]) == 2


def test_cli_overflow_exit_3(tmp_path):
    text = BASE.replace("model = markovian", "model = ohmic\nr = 5.0")
    text = text.replace("t_max = 1.0", "t_max = 200")
    path = _write(tmp_path, text)
    assert cli.main(["evolve", "--scenario", path, "--out", str(tmp_path)]) == 3


def test_cli_quadrature_exit_4(tmp_path):
    # A coarse grid on a strongly negative state trips the convergence gate.
    text = BASE.replace("state = epr", "state = noon")
    text += "points = 16\nextent = 6.0\n"
    path = _write(tmp_path, text)
    assert cli.main(["volume", "--scenario", path, "--out", str(tmp_path)]) == 4


def test_cli_correlations_columns(tmp_path):
    path = _write(tmp_path, BASE)
    assert cli.main(["correlations", "--scenario", path,
                     "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "correlations.csv").read_text().splitlines()
    header = lines[1].split(",")
    assert header == ["t", "negativity", "log_negativity", "concurrence",
                      "discord"]
    first = lines[2].split(",")
    for col in (2, 3, 4):
        assert float(first[col]) == pytest.approx(1.0, abs=1e-6)
    # LN = log2(1 + 2N) identically along the column.
    for line in lines[2:]:
        vals = [float(x) for x in line.split(",")]
        assert vals[2] == pytest.approx(math.log2(1 + 2 * vals[1]), abs=1e-10)


def test_cli_wigner_origin_column(tmp_path):
    path = _write(tmp_path, BASE.replace("state = epr", "state = noon"))
    assert cli.main(["wigner", "--scenario", path, "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "wigner.csv").read_text().splitlines()
    first = [float(x) for x in lines[2].split(",")]
    # NOON start is parity-odd in one mode: W(0,0) = -4/pi^2.
    assert first[1] == pytest.approx(-4.0 / math.pi**2, abs=1e-9)


def test_cli_teleport_columns_and_flags(tmp_path):
    text = BASE + "p = 0.99\nq = 0.97\n"
    path = _write(tmp_path, text)
    assert cli.main(["teleport", "--scenario", path, "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "teleport.csv").read_text().splitlines()
    header = lines[1].split(",")
    assert header == cli.TELEPORT_COLUMNS
    rows = [line.split(",") for line in lines[2:]]
    assert all(row[-1] == "1" for row in rows)  # non-physical input flagged
    assert all(math.isfinite(float(row[1])) for row in rows)
    assert all(float(row[2]) > 0.0 for row in rows)


def test_cli_determinism(tmp_path):
    path = _write(tmp_path, BASE)
    out1, out2 = tmp_path / "run1", tmp_path / "run2"
    for out in (out1, out2):
        assert cli.main(["correlations", "--scenario", path,
                         "--out", str(out)]) == 0
    assert (out1 / "correlations.csv").read_bytes() == \
        (out2 / "correlations.csv").read_bytes()


def test_cli_figures_unknown_id():
    assert cli.main(["figures", "fig99"]) == 2


def test_cli_fig3_bundle(tmp_path):
    paths = cli.run_figures("fig3", str(tmp_path))
    assert len(paths) == 3
    for p in paths:
        assert (tmp_path / p.split("/")[-1]).exists()


def test_cli_mode_flags_override_scenario(tmp_path):
    path = _write(tmp_path, BASE)
    code = cli.main(["teleport", "--scenario", path, "--out", str(tmp_path),
                     "--index-order", "symmetric"])
    assert code == 0
