import csv
import io
import json

import pytest

from onoma_relay import analytic, cli
from onoma_relay.analytic import SchemeRates, SchemeTotals


def invoke(*argv):
    buf = io.StringIO()
    code = cli.run(list(argv), stdout=buf)
    return code, buf.getvalue()


def parse(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_header_is_stable():
    code, out = invoke("--preset", "fig4")
    assert code == 0
    assert out.splitlines()[0] == "a2,snr_db,scheme,method,rate_s1,rate_s2,rate_sum,std_error_sum"


def test_fig4_analytic_rows():
    code, out = invoke("--preset", "fig4", "--method", "analytic")
    rows = parse(out)
    assert code == 0
    assert len(rows) == 7 * 2
    first = rows[0]
    assert (first["a2"], first["snr_db"], first["scheme"], first["method"]) == ("0.1", "20", "onoma", "analytic")
    assert float(first["rate_sum"]) == pytest.approx(15.0, abs=0.3)
    assert float(rows[1]["rate_sum"]) == pytest.approx(5.753, abs=0.3)
    assert all(r["std_error_sum"] == "" for r in rows)


def test_six_significant_digits():
    _, out = invoke("--preset", "fig4")
    assert parse(out)[0]["rate_sum"] == "15.0003"


def test_both_methods_order_and_agreement():
    code, out = invoke("--preset", "fig5", "--method", "both", "--samples", "100000", "--seed", "3",
                       "--start", "0.1", "--stop", "0.2")
    rows = parse(out)
    assert code == 0
    keys = [(r["a2"], r["scheme"], r["method"]) for r in rows]
    assert keys == [("0.1", "onoma", "analytic"), ("0.1", "onoma", "montecarlo"),
                    ("0.1", "cnoma", "analytic"), ("0.1", "cnoma", "montecarlo"),
                    ("0.15", "onoma", "analytic"), ("0.15", "onoma", "montecarlo"),
                    ("0.15", "cnoma", "analytic"), ("0.15", "cnoma", "montecarlo"),
                    ("0.2", "onoma", "analytic"), ("0.2", "onoma", "montecarlo"),
                    ("0.2", "cnoma", "analytic"), ("0.2", "cnoma", "montecarlo")]
    assert all(float(r["std_error_sum"]) > 0 for r in rows if r["method"] == "montecarlo")


def test_zero_power_single_point():
    code, out = invoke("--sweep", "a2", "--start", "0.1", "--stop", "0.1", "--step", "0.1",
                       "--omega-sd", "1e-6", "--omega-sr", "1e-6", "--omega-rd", "1e-6",
                       "--method", "both", "--samples", "1000")
    rows = parse(out)
    assert code == 0 and len(rows) == 4
    for r in rows:
        for k in ("rate_s1", "rate_s2", "rate_sum"):
            assert abs(float(r[k])) < 1e-6


def test_default_a2_grid():
    _, out = invoke("--sweep", "a2")
    a2 = [r["a2"] for r in parse(out)][::2]
    assert a2 == ["0.05", "0.1", "0.15", "0.2", "0.25", "0.3", "0.35", "0.4", "0.45"]


def test_snr_sweep_preset():
    _, out = invoke("--preset", "fig9", "--scheme", "onoma")
    rows = parse(out)
    assert [r["snr_db"] for r in rows] == [str(v) for v in range(5, 16)]
    assert {r["a2"] for r in rows} == {"0.1"}


def test_seed_reproducible_bytes():
    args = ("--preset", "fig8", "--method", "montecarlo", "--samples", "20000", "--seed", "9")
    assert invoke(*args) == invoke(*args)
    assert invoke(*args)[1] != invoke(*args[:-1], "10")[1]


def test_model_convention_montecarlo():
    code, out = invoke("--preset", "fig4", "--method", "montecarlo", "--convention", "model",
                       "--samples", "20000", "--stop", "0.1")
    rows = parse(out)
    assert code == 0
    assert float(rows[0]["rate_sum"]) >= float(rows[1]["rate_sum"])


def test_json_output():
    code, out = invoke("--preset", "fig6", "--output", "json", "--stop", "0.15")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(recs) == 4
    assert list(recs[0]) == cli.HEADER
    assert recs[0]["std_error_sum"] is None
    assert recs[0]["rate_sum"] == pytest.approx(16.05, abs=0.3)


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps({"variable": "snr", "start": 10, "stop": 12, "step": 1, "a2": 0.2,
                               "schemes": ["cnoma"]}))
    code, out = invoke("--config", str(cfg), "--stop", "11")
    rows = parse(out)
    assert code == 0
    assert [(r["a2"], r["snr_db"], r["scheme"]) for r in rows] == [("0.2", "10", "cnoma"), ("0.2", "11", "cnoma")]


def test_out_file(tmp_path):
    target = tmp_path / "rows.csv"
    code, out = invoke("--preset", "fig4", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("a2,snr_db")


@pytest.mark.parametrize("argv", [
    ("--preset", "fig10"),
    ("--a2", "0.6"),
    ("--sweep", "a2", "--start", "0.3", "--stop", "0.2"),
    ("--sweep", "a2", "--start", "0.1", "--stop", "0.2", "--step", "0"),
    ("--sweep", "a2", "--start", "0.0", "--stop", "0.2", "--step", "0.1"),
    ("--convention", "model", "--method", "analytic"),
    ("--samples", "10", "--method", "montecarlo"),
    ("--omega-sd", "0"),
])
def test_config_errors_exit_2(argv):
    assert invoke(*argv)[0] == 2


def test_bad_config_file(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"nonsense": 1}))
    assert invoke("--config", str(cfg))[0] == 2


def test_truncation_failure_exit_3():
    assert invoke("--k-sd", "200")[0] == 3


def test_mismatch_exit_3(monkeypatch):
    def skewed(*args, **kw):
        return SchemeTotals(SchemeRates(100.0, 0.0), SchemeRates(100.0, 0.0))

    monkeypatch.setattr(analytic, "scheme_totals", skewed)
    code, out = invoke("--method", "both", "--samples", "1000")
    rows = parse(out)
    assert code == 3
    assert [r["method"] for r in rows].count("diagnostic") == 2
