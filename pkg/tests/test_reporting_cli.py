import json
import os

import numpy as np
import pytest

from dynwalks import cli, graphs, reporting, schedule
from dynwalks.errors import GraphError
from dynwalks.reporting import BoundReport, csv_body, loglog_slope
from dynwalks.suites import SUITES, ExperimentConfig, run_suite


def make_report(lhs=1.0, rhs=2.0, **kw):
    base = dict(suite="s", inequality_id="iq", instance="i", lhs=lhs, rhs=rhs,
                tolerance=1e-9, provenance="DERIVED")
    base.update(kw)
    return BoundReport(**base)


def test_bound_report_pass_logic():
    assert make_report(1.0, 2.0).passed
    assert make_report(2.0, 2.0).passed
    assert make_report(2.0 + 5e-10, 2.0).passed  # inside tolerance
    assert not make_report(2.1, 2.0).passed
    assert make_report(2.0, 1.0).margin == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        make_report(provenance="GUESSED")


def test_bound_report_coerces_numpy_values():
    r = make_report(np.float64(1.5), np.float64(2.5),
                    extra={"x": np.int64(3), "y": np.float64(0.25)})
    assert isinstance(r.lhs, float) and isinstance(r.extra["x"], int)
    assert "np." not in ",".join(r.row())


def test_csv_round_trip(tmp_path):
    rows = [make_report(), make_report(lhs=3.0, rhs=1.0, status="scaling", n=8,
                                       extra={"k": 2})]
    path = tmp_path / "r.csv"
    reporting.write_report_csv(path, rows, config_doc={"suite": "s"})
    parsed = reporting.read_report_rows(path)
    assert len(parsed) == 2
    assert parsed[0]["passed"] == "1" and parsed[1]["passed"] == "0"
    assert json.loads(parsed[1]["extra"]) == {"k": 2}
    assert float(parsed[0]["lhs"]) == 1.0


def test_csv_body_skips_timestamp_header(tmp_path):
    path = tmp_path / "r.csv"
    reporting.write_report_csv(path, [make_report()])
    body = csv_body(path)
    assert body.startswith(b"suite,")
    assert b"generated" not in body


def test_summarize_reports_failures_and_slopes(tmp_path):
    rows = [
        make_report(suite="demo"),
        make_report(suite="demo", lhs=5.0, rhs=1.0, instance="bad"),
        make_report(suite="demo", inequality_id="x-scaling", lhs=10.0, rhs=10.0, n=8,
                    status="scaling"),
        make_report(suite="demo", inequality_id="x-scaling", lhs=40.0, rhs=40.0, n=16,
                    status="scaling"),
        make_report(suite="demo", inequality_id="x-scaling", lhs=160.0, rhs=160.0, n=32,
                    status="scaling"),
    ]
    path = tmp_path / "s.csv"
    reporting.write_report_csv(path, rows)
    digest, ok = reporting.summarize([path])
    assert not ok
    assert "FAIL" in digest and "bad" in digest
    assert "slope 2.000" in digest


def test_read_report_rows_parse_errors(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("# generated now\n" + ",".join(reporting.CSV_COLUMNS)
                    + "\ns,iq,i,1,,h,1.0,2.0\n")
    with pytest.raises(reporting.ReportParseError) as err:
        reporting.read_report_rows(path)
    assert err.value.line == 3
    path.write_text("wrong,header\n")
    with pytest.raises(reporting.ReportParseError):
        reporting.read_report_rows(path)


def test_matrix_csv_export(tmp_path):
    from dynwalks import chain
    P = chain.lazy_matrix(graphs.cycle_graph(5)).matrix
    out = tmp_path / "P.csv"
    chain.write_matrix_csv(P, out)
    back = np.loadtxt(out, delimiter=",")
    assert np.array_equal(back, P)


def test_loglog_slope():
    assert loglog_slope([8, 16], [1, 2]) is None
    slope, se = loglog_slope([8, 16, 32, 64], [64, 256, 1024, 4096])
    assert slope == pytest.approx(2.0, abs=1e-9)
    assert se == pytest.approx(0.0, abs=1e-9)


def test_experiment_config_rejects_unknown_keys():
    cfg = ExperimentConfig.from_dict({"suite": "eq-mihai", "seeds": [0]})
    assert cfg.suite == "eq-mihai"
    with pytest.raises(GraphError):
        ExperimentConfig.from_dict({"suite": "eq-mihai", "bogus": 1})
    with pytest.raises(GraphError):
        ExperimentConfig.from_dict({"seeds": [0]})
    with pytest.raises(GraphError):
        run_suite(ExperimentConfig(suite="no-such-suite"))


def test_run_suite_error_record(tmp_path, monkeypatch):
    from dynwalks import suites

    def boom(cfg):
        raise GraphError("bad precondition")

    monkeypatch.setitem(suites.SUITES, "eq-interesting", boom)
    cfg = ExperimentConfig(suite="eq-interesting", out=str(tmp_path))
    with pytest.raises(GraphError):
        run_suite(cfg)
    rows = reporting.read_report_rows(tmp_path / "eq-interesting.csv")
    assert rows[0]["id"] == "suite-error"
    assert rows[0]["status"] == "error"
    assert "bad precondition" in rows[0]["instance"]


def test_run_suite_writes_deterministic_csv(tmp_path):
    cfg_a = ExperimentConfig(suite="eq-interesting", out=str(tmp_path / "a"))
    cfg_b = ExperimentConfig(suite="eq-interesting", out=str(tmp_path / "b"))
    _, pa, ok_a = run_suite(cfg_a)
    _, pb, ok_b = run_suite(cfg_b)
    assert ok_a and ok_b
    assert csv_body(pa) == csv_body(pb)


def test_suite_registry_covers_all_criteria():
    assert len(SUITES) == 14


def test_cli_gen_mix_hit_cover(tmp_path):
    sched = tmp_path / "cycle.json"
    rc = cli.main(["gen", "complete_then_cycle", "--n", "12", "--seed", "0",
                   "--out", str(sched)])
    assert rc == 0 and sched.exists()
    loaded = schedule.load_schedule(sched)
    assert loaded.n == 12
    assert cli.main(["mix", "--schedule", str(sched)]) == 0
    assert cli.main(["hit", "--schedule", str(sched), "--u", "0", "--v", "5",
                     "--out", str(tmp_path / "hit.csv")]) == 0
    assert (tmp_path / "hit.csv").exists()
    assert cli.main(["cover", "--schedule", str(sched), "--trials", "20",
                     "--seed", "3"]) == 0


def test_cli_commute_on_graph_file(tmp_path):
    g = graphs.circulant_graph(10, 2)
    gpath = tmp_path / "g.txt"
    graphs.write_graph_text(g, gpath)
    out = tmp_path / "commute.csv"
    rc = cli.main(["commute", "--graph", str(gpath), "--s", "0", "--t", "5",
                   "--out", str(out)])
    assert rc == 0
    rows = reporting.read_report_rows(out)
    assert len(rows) == 1
    extra = json.loads(rows[0]["extra"])
    assert extra["nw_lower_flow"] <= extra["exact"] <= extra["cutsum_flow"]
    assert extra["cutsum_2m"] == pytest.approx(extra["cutsum_flow"] / 2)


def test_cli_verify_and_suite(tmp_path):
    out = tmp_path / "v"
    rc = cli.main(["verify", "eq-mihai", "--seeds", "2", "--out", str(out)])
    assert rc == 0
    rc = cli.main(["suite", "eq-interesting", "--out", str(out)])
    assert rc == 0
    assert (out / "eq-interesting.csv").exists()


def test_default_out_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("DYNWALKS_OUTDIR", str(tmp_path / "envout"))
    assert reporting.default_out_dir() == str(tmp_path / "envout")
    cfg = ExperimentConfig(suite="eq-interesting")
    _, path, _ = run_suite(cfg)
    assert str(tmp_path / "envout") in path
    assert os.path.exists(path)
