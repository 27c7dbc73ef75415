import json

import pytest

from anyonatom import cli
from anyonatom.cli import ConfigError, RunConfig, build_config, render, run

from _oracles import TABLE_ANALYTIC_EV


def test_default_config():
    config = build_config([])
    assert config.params.S == 0.5
    assert config.params.xi == pytest.approx(7.2973525693e-3)
    assert config.params.Z == 1.0
    assert (config.n_max, config.l_max) == (2, 2)
    assert config.methods == ("closed", "oracle")
    assert config.output_format == "table"


def test_zero_argument_table():
    code, text = run(build_config([]))
    assert code == 0
    lines = text.strip().splitlines()
    assert len(lines) == 7  # header + six levels
    assert "E'_closed, eV" in lines[0] and "E'_oracle, eV" in lines[0]
    levels = [tuple(line.split()[:2]) for line in lines[1:]]
    assert levels == [
        ("0", "1"), ("1", "1"), ("2", "1"), ("0", "2"), ("1", "2"), ("2", "2"),
    ]
    assert f"{TABLE_ANALYTIC_EV[(0, 1)]:.4f}" in lines[1]


def test_csv_and_json_are_deterministic():
    csv_cfg = build_config(["--format", "csv"])
    a = run(csv_cfg)
    b = run(csv_cfg)
    assert a == b
    json_cfg = build_config(["--format", "json"])
    x = run(json_cfg)
    y = run(json_cfg)
    assert x == y


def test_csv_layout_and_values_match_json():
    _, csv_text = run(build_config(["--format", "csv"]))
    lines = csv_text.strip().splitlines()
    assert lines[0] == "n_r,l,closed,oracle,delta_closed"
    assert len(lines) == 7
    _, json_text = run(build_config(["--format", "json"]))
    payload = json.loads(json_text)
    assert len(payload["rows"]) == 6
    for line, row in zip(lines[1:], payload["rows"]):
        n_r, l, closed, oracle, delta = line.split(",")
        assert int(n_r) == row["n_r"] and int(l) == row["l"]
        assert float(closed) == row["energies_ev"]["closed"]
        assert float(oracle) == row["energies_ev"]["oracle"]
        assert float(delta) == row["deltas_ev"]["closed"]
        assert row["energies_ev"]["closed"] < 0.0


def test_json_meta_echoes_config():
    _, text = run(build_config(["--format", "json", "--n-max", "0", "--l-max", "1"]))
    meta = json.loads(text)["meta"]
    assert meta["methods"] == ["closed", "oracle"]
    assert meta["n_max"] == 0 and meta["l_max"] == 1
    assert meta["params"]["mass_ev"] == 510998.95
    assert meta["tolerances"]["oracle_ev"] == 1e-3


def test_method_order_is_canonical():
    config = build_config(["--methods", "oracle,closed", "--format", "csv"])
    assert config.methods == ("closed", "oracle")
    config = build_config(["--methods", "nonrel,wkb-split,closed"])
    assert config.methods == ("closed", "wkb-split", "nonrel")


def test_no_delta_columns_without_oracle():
    _, text = run(
        build_config(
            ["--methods", "closed,nonrel", "--format", "csv", "--n-max", "0", "--l-max", "1"]
        )
    )
    assert text.splitlines()[0] == "n_r,l,closed,nonrel"


def test_all_methods_one_level():
    _, text = run(
        build_config(
            [
                "--methods", "closed,wkb-full,wkb-split,oracle,nonrel",
                "--format", "json", "--n-max", "0", "--l-max", "1",
            ]
        )
    )
    row = json.loads(text)["rows"][0]
    vals = row["energies_ev"]
    assert set(vals) == {"closed", "wkb-full", "wkb-split", "oracle", "nonrel"}
    spread = max(vals.values()) - min(vals.values())
    assert spread < 1e-3  # all five agree to within a millielectronvolt


def test_config_file_merging(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# comment line\n"
        "n_max = 0\n"
        "l-max = 1   # trailing comment\n"
        "methods = closed\n"
        "format = csv\n"
    )
    config = build_config(["--config", str(cfg)])
    assert (config.n_max, config.l_max) == (0, 1)
    assert config.methods == ("closed",)
    assert config.output_format == "csv"
    # command line wins over the file
    config = build_config(["--config", str(cfg), "--format", "json", "--n-max", "1"])
    assert config.output_format == "json"
    assert config.n_max == 1


def test_config_file_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("unknown-key = 3\n")
    with pytest.raises(ConfigError):
        build_config(["--config", str(bad)])
    noeq = tmp_path / "noeq.cfg"
    noeq.write_text("just words\n")
    with pytest.raises(ConfigError):
        build_config(["--config", str(noeq)])
    with pytest.raises(ConfigError):
        build_config(["--config", str(tmp_path / "missing.cfg")])


def test_alpha_token_and_override():
    default = build_config([])
    assert default.params.xi == default.alpha
    overridden = build_config(["--alpha-override", "7.5e-3"])
    assert overridden.params.xi == 7.5e-3
    numeric = build_config(["--xi", "0.01", "--alpha-override", "7.5e-3"])
    assert numeric.params.xi == 0.01  # literal xi ignores the alpha override


def test_config_validation_errors():
    with pytest.raises(ConfigError):
        build_config(["--xi", "2.0"])  # xi*Z >= 1
    with pytest.raises(ConfigError):
        build_config(["--methods", "bogus"])
    with pytest.raises(ConfigError):
        build_config(["--format", "yaml"])
    with pytest.raises(ConfigError):
        build_config(["--oracle-points", "10"])
    with pytest.raises(ConfigError):
        build_config(["--tolerance-root=-1e-9"])
    with pytest.raises(ConfigError):
        RunConfig(params=build_config([]).params, methods=())


def test_main_exit_codes(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--methods", "closed", "--n-max", "0", "--l-max", "1"])
    assert exc.value.code == 0
    assert "E'_closed" in capsys.readouterr().out

    with pytest.raises(SystemExit) as exc:
        cli.main(["--xi", "5"])
    assert exc.value.code == 2
    assert "error:" in capsys.readouterr().err


def test_solver_failure_is_exit_3_with_markers():
    # xi = 0 has no bound spectrum: every wkb cell fails, the run completes
    config = build_config(
        ["--xi", "0", "--methods", "wkb-full", "--n-max", "0", "--l-max", "1"]
    )
    code, text = run(config)
    assert code == 3
    assert "ERROR" in text
    config_json = build_config(
        ["--xi", "0", "--methods", "wkb-full", "--format", "json", "--n-max", "0", "--l-max", "1"]
    )
    code, text = run(config_json)
    assert code == 3
    row = json.loads(text)["rows"][0]
    assert row["energies_ev"]["wkb-full"] is None
    assert "BracketFailure" in row["errors"]["wkb-full"]


def test_out_file(tmp_path, capsys):
    out = tmp_path / "table.csv"
    with pytest.raises(SystemExit) as exc:
        cli.main(
            ["--methods", "closed", "--format", "csv", "--n-max", "0", "--l-max", "1",
             "--out", str(out)]
        )
    assert exc.value.code == 0
    assert capsys.readouterr().out == ""
    assert out.read_text().splitlines()[0] == "n_r,l,closed"


def test_dump_files(tmp_path):
    pot = tmp_path / "potential.csv"
    phase = tmp_path / "phase.csv"
    config = build_config(
        ["--methods", "closed", "--n-max", "0", "--l-max", "1",
         "--dump-potential", str(pot), "--dump-phase", str(phase)]
    )
    code, _ = run(config)
    assert code == 0
    pot_lines = pot.read_text().strip().splitlines()
    assert pot_lines[0] == "r,effective_term"
    r0, w0 = map(float, pot_lines[1].split(","))
    assert r0 > 0.0 and w0 < 0.0  # starts inside the inner forbidden region
    phase_lines = phase.read_text().strip().splitlines()
    assert phase_lines[0] == "e_over_m,phase,residual"
    e, ph, resid = map(float, phase_lines[1].split(","))
    assert 0.0 < e < 1.0 and ph > 0.0
    assert resid == pytest.approx(ph - 0.5 * 3.141592653589793, abs=1e-12)


def test_render_rejects_unknown_format():
    config = build_config([])
    with pytest.raises(ConfigError):
        render([], "markdown", config)
