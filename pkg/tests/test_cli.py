import csv
import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptsim.cli import CSV_COLUMNS, UsageError, main, parse_config, parse_grid, parse_number
from ptsim.signaling import brute_gap
from ptsim.states import werner

RANDAMP_KEYS = {
    "rounds",
    "sifted",
    "success_rate",
    "agreement_rate",
    "output_bias",
    "min_entropy_per_bit",
    "equality_certified",
    "seed",
    "config_echo",
}


@pytest.fixture(autouse=True)
def _no_env_seed(monkeypatch):
    monkeypatch.delenv("PTSIM_SEED", raising=False)


def test_grid_inclusive():
    assert parse_grid("0:1:0.1") == tuple(k / 10 for k in range(11))
    assert len(parse_grid("0.1:1.4:0.1")) == 14
    # stop reached within half a step
    assert parse_grid("0:1:0.3")[-1] == pytest.approx(0.9)
    assert parse_grid("0:1.1:0.3")[-1] == pytest.approx(1.2)
    assert parse_grid("0:0.5pi:0.25pi")[-1] == math.pi / 2
    assert parse_grid("0.2, 0.5") == (0.2, 0.5)


@pytest.mark.parametrize("bad", ["1:0:0.1", "0:1:0", "0:1", "a:b:c", ""])
def test_grid_errors(bad):
    with pytest.raises(ValueError):
        parse_grid(bad)


def test_parse_number():
    assert parse_number("pi") == math.pi
    assert parse_number("0.45pi") == 0.45 * math.pi
    assert parse_number("-1e-3") == -1e-3
    with pytest.raises(ValueError):
        parse_number("1.2.3")


@given(st.integers(0, 50), st.integers(1, 20), st.integers(1, 40))
def test_grid_counts(start, step, n):
    a, h = start / 10, step / 10
    g = parse_grid(f"{a}:{a + n * h}:{h}")
    assert len(g) == n + 1 and g[0] == a


def test_sweep_example():
    cfg = parse_config(["sweep", "--state", "werner", "--p", "0:1:0.1", "--alpha", "0.1:1.4:0.1", "--out", "gap.csv"])
    assert len(cfg.p) * len(cfg.alpha) == 11 * 14
    assert cfg.out == "gap.csv"


def test_randamp_example():
    cfg = parse_config(
        ["randamp", "--state", "phi-plus", "--alpha", "1.5707", "--rounds", "100000", "--epsilon", "0.2", "--seed", "42"]
    )
    assert cfg.seed == 42 and cfg.rounds == 100000 and cfg.source == "iid"


def test_config_file_and_override():
    text = "# comment\nstate = werner\nalpha = 0.1\nalpha = 0.3:0.5:0.1\np=0.5\n"
    cfg = parse_config(["sweep", "--p", "0.25"], file_text=text)
    assert cfg.alpha == (0.1, 0.3, 0.4, 0.5)
    assert cfg.p == (0.25,)


def test_unknown_key_rejected():
    with pytest.raises(UsageError) as exc:
        parse_config(["sweep"], file_text="colour = red\n")
    assert exc.value.key == "colour"
    with pytest.raises(UsageError, match="rounds"):
        parse_config(["sweep"], file_text="rounds = 5\n")


def test_malformed_value_names_key():
    with pytest.raises(UsageError) as exc:
        parse_config(["randamp", "--seed", "1", "--rounds", "many"])
    assert exc.value.key == "rounds"


def test_config_path(tmp_path, capsys):
    f = tmp_path / "run.cfg"
    f.write_text("p = 1:0:0.1\n")
    assert main(["sweep", "--config", str(f)]) == 2
    assert "p:" in capsys.readouterr().err
    assert main(["sweep", "--config", str(tmp_path / "missing.cfg")]) == 2


def test_empty_grid_exit_2():
    assert main(["sweep", "--p", "1:0:0.1"]) == 2


def test_bad_command_exit_2():
    assert main(["frobnicate"]) == 2
    assert main(["sweep", "--bogus", "1"]) == 2


def test_randamp_seed_required(monkeypatch, capsys):
    assert main(["randamp", "--rounds", "10"]) == 2
    assert "seed" in capsys.readouterr().err
    monkeypatch.setenv("PTSIM_SEED", "9")
    assert main(["randamp", "--rounds", "10"]) == 0
    assert json.loads(capsys.readouterr().out)["seed"] == 9


def test_randamp_json(tmp_path):
    out = tmp_path / "r.json"
    argv = ["randamp", "--alpha", "0.5pi", "--rounds", "5000", "--epsilon", "0.2", "--seed", "42", "--out", str(out)]
    assert main(argv) == 0
    first = out.read_bytes()
    doc = json.loads(first)
    assert set(doc) == RANDAMP_KEYS
    assert doc["agreement_rate"] == 1.0 and doc["equality_certified"] is True
    assert main(argv) == 0
    assert out.read_bytes() == first


def test_randamp_log(tmp_path):
    log = tmp_path / "rounds.csv"
    assert main(["randamp", "--rounds", "50", "--seed", "1", "--log", str(log), "--out", str(tmp_path / "r.json")]) == 0
    rows = list(csv.DictReader(log.open()))
    assert len(rows) == 50 and set(rows[0]) >= {"input_bit", "success", "bob_outcome"}


def _read_csv(path):
    with open(path) as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, list(reader)


def test_sweep_csv(tmp_path):
    out = tmp_path / "gap.csv"
    assert main(["sweep", "--state", "werner", "--p", "0:1:0.5", "--alpha", "0.1:0.3:0.1", "--out", str(out)]) == 0
    header, rows = _read_csv(out)
    assert tuple(header) == CSV_COLUMNS
    assert len(rows) == 9
    # p outer, alpha inner
    assert [r[3] for r in rows[:3]] == ["0.0"] * 3
    for r in rows:
        assert float(r[8]) <= 1e-9


def test_sweep_round_trip_precision(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--p", "0.7", "--alpha", "0.3", "--out", str(out)]) == 0
    _, rows = _read_csv(out)
    brute = float(rows[0][6])
    assert brute == brute_gap(werner(0.7), 0.3)


def test_sweep_t_override(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["sweep", "--p", "1", "--alpha", "0.5", "--t", "0.25", "--out", str(out)]) == 0
    _, rows = _read_csv(out)
    assert rows[0][4] == "0.25" and rows[0][7] == ""


def test_sweep_perturbation_closed_form(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["sweep", "--quantity", "bob_perturbation", "--p", "0:1:0.25", "--alpha", "0.5pi", "--out", str(out)]) == 0
    _, rows = _read_csv(out)
    assert [float(r[6]) for r in rows] == pytest.approx([0, 0.125, 0.25, 0.375, 0.5], abs=1e-12)


def test_sweep_unwritable_exit_3(tmp_path):
    assert main(["sweep", "--p", "0.5", "--alpha", "0.2", "--out", str(tmp_path / "no" / "x.csv")]) == 3


def test_dim_scan(tmp_path):
    out = tmp_path / "d.csv"
    assert main(["dim-scan", "--out", str(out)]) == 0
    header, rows = _read_csv(out)
    assert tuple(header) == CSV_COLUMNS
    assert {r[1] for r in rows} == {"2", "3"}


def test_dilation_check(tmp_path):
    out = tmp_path / "dil.json"
    assert main(["dilation-check", "--samples", "20000", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["passed"] is True
    last = doc["rows"][-1]
    assert last["alpha"] == math.pi / 2 and last["success_prob"] == pytest.approx(0.5)


def test_json_format_sweep(capsys):
    assert main(["sweep", "--p", "0.5", "--alpha", "0.4", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["columns"] == list(CSV_COLUMNS) and len(doc["rows"]) == 1
