import csv
import json
import math
from pathlib import Path

import numpy as np
import pytest

from shellbend.cli import csv_header, main
from shellbend.config import load_config, parse_grid
from shellbend.errors import ConfigError
from shellbend.families import FAMILIES
from shellbend.harness import interior_grid, measure_field

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

PLANE = "[reference]\nx1 = xi1\nx2 = xi2\nx3 = 0\n"
DOMAIN = "[domain]\nxi1 = -1, 1\nxi2 = -1, 1\n"
SMALL_RUN = "[run]\ngrid = 5x5\nseeds = 0\nmotions = 2\nfamilies = cylinder-roll\n"


def write(tmp_path, text, name="run.ini"):
    p = tmp_path / name
    p.write_text(text)
    return p


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array([[float(v) for v in r] for r in rows[1:]])


def test_minimal_config_gets_defaults():
    cfg = load_config(CONFIGS / "plane_to_cylinder.ini")
    assert cfg.grid == (21, 21)
    assert cfg.scales == (0.5, 2.0, 10.0)
    assert cfg.tol == 1e-10
    assert cfg.deformed.params["R"] == 2.0
    assert cfg.reference.domain == cfg.deformed.domain == ((-1.0, 1.0), (-1.0, 1.0))


def test_mismatched_domain(tmp_path):
    text = (PLANE + "domain = 0, 1, 0, 1\n"
            "[deformed]\nx1 = xi1\nx2 = xi2\nx3 = 0\ndomain = 0, 2, 0, 1\n")
    with pytest.raises(ConfigError) as info:
        load_config(write(tmp_path, text))
    assert info.value.field == "domain"
    assert "domain" in str(info.value)


def test_unknown_identifier_cites_span(tmp_path):
    text = PLANE + "[deformed]\nx1 = xi3\nx2 = xi2\nx3 = 0\n" + DOMAIN
    with pytest.raises(ConfigError) as info:
        load_config(write(tmp_path, text))
    assert info.value.field == "deformed.x1"
    assert "xi3" in str(info.value) and "0-3" in str(info.value)


@pytest.mark.parametrize("text,field", [
    ("[deformed]\nx1 = xi1\nx2 = xi2\nx3 = 0\n" + DOMAIN, "reference"),
    (PLANE + "[deformed]\nx1 = xi1\nx2 = xi2\n" + DOMAIN, "deformed.x3"),
    (PLANE + "[deformed]\nx1 = xi1 +\nx2 = xi2\nx3 = 0\n" + DOMAIN, "deformed.x1"),
    (PLANE + "[deformed]\nx1 = xi1\nx2 = xi2\nx3 = 0\n", "domain"),
    (PLANE + "[deformed]\nx1 = xi1\nx2 = xi2\nx3 = 0\n" + DOMAIN + "[run]\ngrid = 1x5\n", "run.grid"),
    (PLANE + "[deformed]\nx1 = xi1\nx2 = xi2\nx3 = 0\n" + DOMAIN + "[run]\nbogus = 1\n", "run.bogus"),
])
def test_config_errors_name_the_field(tmp_path, text, field):
    with pytest.raises(ConfigError) as info:
        load_config(write(tmp_path, text))
    assert info.value.field == field


def test_parse_grid_forms():
    assert parse_grid("21x21") == (21, 21)
    assert parse_grid("7, 9") == (7, 9)
    assert parse_grid("4") == (4, 4)


def test_eval_identity(tmp_path):
    cfg = write(tmp_path, PLANE + "[deformed]\nx1 = xi1\nx2 = xi2\nx3 = 0\n" + DOMAIN)
    out = tmp_path / "out.csv"
    assert main(["eval", "--config", str(cfg), "--out", str(out), "--grid", "4x3"]) == 0
    header, data = read_csv(out)
    assert header == csv_header()
    assert len(header) == 23
    assert data.shape == (12, 23)
    np.testing.assert_array_equal(data[:, 2:22], 0.0)
    np.testing.assert_allclose(data[:, 22], math.sqrt(2), rtol=1e-15)
    # row-major: xi1 is the slow index
    assert np.all(np.diff(data[:, 0]) >= 0)


def test_eval_cylinder(tmp_path):
    out = tmp_path / "cyl.csv"
    assert main(["eval", "--config", str(CONFIGS / "plane_to_cylinder.ini"), "--out", str(out)]) == 0
    header, data = read_csv(out)
    assert data.shape[0] == 441
    np.testing.assert_allclose(data[:, header.index("ktilde_11")], -0.5, atol=1e-14)
    np.testing.assert_allclose(data[:, header.index("kbar_11")], -0.5, atol=1e-14)


def test_eval_sphere_dilation(tmp_path):
    out = tmp_path / "sph.csv"
    assert main(["eval", "--config", str(CONFIGS / "sphere_dilation.ini"), "--out", str(out)]) == 0
    _, data = read_csv(out)
    assert data.shape[0] == 121
    assert np.max(np.abs(data[:, 2:22])) < 1e-10


def test_csv_round_trip(tmp_path):
    out = tmp_path / "cyl.csv"
    path = CONFIGS / "plane_to_cylinder.ini"
    main(["eval", "--config", str(path), "--out", str(out), "--grid", "6x5"])
    _, data = read_csv(out)
    cfg = load_config(path)
    x1, x2 = interior_grid(cfg.domain, 6, 5)
    _, ms = measure_field(cfg.reference, cfg.deformed, x1, x2)
    np.testing.assert_array_equal(data[:, 0], x1)
    np.testing.assert_array_equal(data[:, 1], x2)
    col = 2
    for name in ("k_tilde", "k_check", "k_bar", "k_tilde_mod", "k_check_mod"):
        for a, b in [(0, 0), (0, 1), (1, 0), (1, 1)]:
            np.testing.assert_allclose(data[:, col], ms[name][:, a, b], rtol=1e-15, atol=0)
            col += 1
    np.testing.assert_allclose(data[:, col], ms.u_norm, rtol=1e-15, atol=0)


def test_eval_degenerate_points(tmp_path, capsys):
    # polar map: the xi1 = 0 row is not immersed
    text = (PLANE + "[deformed]\nx1 = xi1*cos(xi2)\nx2 = xi1*sin(xi2)\nx3 = 0\n"
            "[domain]\nxi1 = -1.25, 1.25\nxi2 = -1, 1\n")
    cfg = write(tmp_path, text)
    out = tmp_path / "d.csv"
    assert main(["eval", "--config", str(cfg), "--out", str(out), "--grid", "5x4"]) == 1
    assert "xi=" in capsys.readouterr().err
    assert main(["eval", "--config", str(cfg), "--out", str(out), "--grid", "5x4",
                 "--skip-degenerate"]) == 0
    assert "skipped 4" in capsys.readouterr().err
    _, data = read_csv(out)
    assert data.shape[0] == 16
    assert np.all(data[:, 0] != 0.0)


def test_check_passes_and_reports(tmp_path, capsys):
    cfg = write(tmp_path, PLANE + "[deformed]\nx1 = R*sin(xi1/R)\nx2 = xi2\nx3 = R - R*cos(xi1/R)\nR = 2\n"
                + DOMAIN + SMALL_RUN)
    out = tmp_path / "report.json"
    assert main(["check", "--config", str(cfg), "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert set(report) == {"version", "config", "checks", "summary"}
    assert report["summary"]["failed"] == 0
    assert report["summary"]["passed"] == len(report["checks"])
    assert any(c["pair"] == "user-config" for c in report["checks"])
    assert report["config"]["run"]["grid"] == [5, 5]


def test_check_forced_failure(tmp_path, capsys):
    cfg = write(tmp_path, PLANE + "[deformed]\nx1 = 1.3*xi1\nx2 = xi2 + 0.1*xi1^2\nx3 = 0.2*xi1*xi2\n"
                + DOMAIN + SMALL_RUN)
    out = tmp_path / "report.json"
    assert main(["check", "--config", str(cfg), "--out", str(out), "--tol", "1e-16",
                 "--scales", "3"]) == 1
    err = capsys.readouterr().err
    assert "FAIL scaling_" in err
    report = json.loads(out.read_text())
    assert report["summary"]["failed"] > 0


def test_missing_config_exits_2(tmp_path):
    assert main(["check", "--config", str(tmp_path / "nope.ini")]) == 2
    assert main(["eval", "--config", str(tmp_path / "nope.ini")]) == 2


def test_bad_flags_exit_2(tmp_path):
    cfg = str(CONFIGS / "plane_to_cylinder.ini")
    assert main(["check", "--config", cfg, "--scales", "-1"]) == 2
    assert main(["check", "--config", cfg, "--tol", "0"]) == 2
    assert main(["eval", "--config", cfg, "--grid", "1x1"]) == 2
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_families_listing(capsys):
    assert main(["families"]) == 0
    out = capsys.readouterr().out
    for kind in FAMILIES:
        assert kind in out
