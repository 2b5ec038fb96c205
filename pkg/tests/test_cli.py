import math

import numpy as np
import pytest

from argzeta import cli
from argzeta.zeros import load_table, save_table


@pytest.fixture(scope="module")
def cache(tmp_path_factory, zeros_7000):
    p = tmp_path_factory.mktemp("cache") / "zeros.ztab"
    save_table(zeros_7000, p)
    return p


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def summary(text):
    return dict(line.split(" = ", 1) for line in text.strip().splitlines())


def test_find_zeros_counts_and_idempotent(tmp_path, capsys):
    out = tmp_path / "z.ztab"
    code, text, _ = run(["find-zeros", "--from", 10, "--to", 1000, "--out", out], capsys)
    assert code == 0
    assert summary(text)["zeros"] == "649"
    assert len(load_table(out)) == 649
    first = out.read_bytes()
    csv_first = (tmp_path / "z.ztab.csv").read_bytes()
    run(["find-zeros", "--from", 10, "--to", 1000, "--out", out], capsys)
    assert out.read_bytes() == first
    assert (tmp_path / "z.ztab.csv").read_bytes() == csv_first


def test_find_zeros_empty(tmp_path, capsys):
    out = tmp_path / "e.ztab"
    code, text, _ = run(["find-zeros", "--from", 10, "--to", 14, "--out", out], capsys)
    assert code == 0 and summary(text)["zeros"] == "0"
    assert len(load_table(out)) == 0


def test_find_zeros_bad_range(tmp_path, capsys):
    code, _, err = run(["find-zeros", "--from", 5, "--to", 14, "--out", tmp_path / "x"], capsys)
    assert code == 2 and "error" in err


def test_find_zeros_unresolved_exit(tmp_path, capsys, monkeypatch):
    from argzeta.errors import UnresolvedIntervalError

    def boom(*a, **k):
        raise UnresolvedIntervalError(100.0, 140.0, "test")

    monkeypatch.setattr(cli, "find_zeros", boom)
    code, _, err = run(["find-zeros", "--from", 10, "--to", 200, "--out", tmp_path / "x"], capsys)
    assert code == 3 and "(100.0, 140.0)" in err


def test_verify_ef_and_determinism(tmp_path, capsys, cache):
    out = tmp_path / "ef.csv"
    argv = ["--zeros", cache, "verify-ef", "--t", "100,500", "--L", "2", "--delta", "1,1.25",
            "--out", out]
    code, text, _ = run(argv, capsys)
    assert code == 0
    s = summary(text)
    assert s["rows"] == "8" and s["violations"] == "0"
    lines = out.read_text().splitlines()
    assert lines[0].startswith("t,L,delta,sign,zero_side")
    first = out.read_bytes()
    run(argv, capsys)
    assert out.read_bytes() == first


def test_verify_ef_sign_filter(tmp_path, capsys, cache):
    out = tmp_path / "ef.csv"
    code, _, _ = run(["--zeros", cache, "verify-ef", "--t", "100", "--L", "1", "--delta", "1",
                      "--sign", "minus", "--out", out], capsys)
    assert code == 0
    rows = out.read_text().splitlines()[1:]
    assert len(rows) == 1 and rows[0].split(",")[3] == "minus"


def test_verify_ef_delete_zero(tmp_path, capsys, cache, zeros_7000):
    g = zeros_7000.ordinates
    target = g[np.argmin(np.abs(g - 100.0))]
    code, _, err = run(["--zeros", cache, "verify-ef", "--t", "100", "--L", "2", "--delta", "1",
                        "--sign", "plus", "--delete-zero", repr(float(target)),
                        "--out", tmp_path / "ef.csv"], capsys)
    assert code == 3 and "violation" in err


def test_verify_ef_regime_guard(tmp_path, capsys, cache):
    code, _, _ = run(["--zeros", cache, "verify-ef", "--t", "100", "--L", "1", "--delta", "0.5",
                      "--out", tmp_path / "ef.csv"], capsys)
    assert code == 2
    code, _, _ = run(["--zeros", cache, "verify-ef", "--t", "100", "--L", "25", "--delta", "1",
                      "--out", tmp_path / "ef.csv"], capsys)
    assert code == 2


def test_config_file_and_override(tmp_path, capsys, cache):
    cfg = tmp_path / "run.ini"
    cfg.write_text(
        "[paths]\n"
        f"zero_cache = {cache}\n"
        f"output_dir = {tmp_path / 'out'}\n"
        "[grids]\n"
        "t = 100, 500\n"
        "L = 1\n"
        "delta = 1\n"
        "[run]\n"
        "workers = 1\n"
    )
    code, text, _ = run(["--config", cfg, "verify-ef"], capsys)
    assert code == 0 and summary(text)["rows"] == "4"
    assert (tmp_path / "out" / "explicit_formula.csv").exists()
    code, text, _ = run(["--config", cfg, "verify-ef", "--t", "100"], capsys)
    assert summary(text)["rows"] == "2"


def test_bad_config_is_io_error(tmp_path, capsys):
    cfg = tmp_path / "broken.ini"
    cfg.write_text("no section header\n")
    code, _, _ = run(["--config", cfg, "verify-ef"], capsys)
    assert code == 4
    code, _, _ = run(["--config", tmp_path / "missing.ini", "verify-ef"], capsys)
    assert code == 4


def test_bad_zero_file_is_parse_error(tmp_path, capsys):
    p = tmp_path / "z.txt"
    p.write_text("14.1\n13.0\n")
    code, _, err = run(["--zeros", p, "scan", "gaps", "--to", 100], capsys)
    assert code == 4 and "line 2" in err


def test_scan_theorem1(tmp_path, capsys, cache):
    out = tmp_path / "o"
    code, text, _ = run(["--zeros", cache, "--output-dir", out, "scan", "theorem1",
                         "--t", "1000", "--h", "1,5,31.6"], capsys)
    assert code == 0
    rows = (out / "theorem1.csv").read_text().splitlines()
    assert len(rows) == 4
    assert (out / "theorem1_plot.py").read_text().count("theorem1.csv") >= 1
    code, _, _ = run(["--zeros", cache, "--output-dir", out, "scan", "theorem1",
                      "--t", "1000", "--h", "31.7"], capsys)
    assert code == 2


def test_scan_plot_script_compiles(tmp_path, capsys, cache):
    out = tmp_path / "o"
    for kind in ("gaps", "s-extrema", "multiplicity", "theorem2"):
        extra = ["--points", "5"] if kind == "theorem2" else []
        code, _, _ = run(["--zeros", cache, "--output-dir", out, "scan", kind,
                          "--from", 100, "--to", 5000, *extra], capsys)
        assert code == 0
        name = kind.replace("-", "_")
        src = (out / f"{name}_plot.py").read_text()
        compile(src, name, "exec")
        assert (out / f"{name}_summary.txt").exists()


def test_scan_gaps_and_extrema_summaries(tmp_path, capsys, cache):
    out = tmp_path / "o"
    code, text, _ = run(["--zeros", cache, "--output-dir", out, "scan", "gaps", "--to", "5000"],
                        capsys)
    s = summary(text)
    assert code == 0 and float(s["max_ratio"]) > 0
    code, text, _ = run(["--zeros", cache, "--output-dir", out, "scan", "s-extrema",
                         "--from", 10, "--to", "5000"], capsys)
    s = summary(text)
    assert float(s["inf_s"]) < 0 < float(s["sup_s"])
    assert float(s["max_ratio_to_theorem2"]) < 1


def test_scan_reruns_byte_identical(tmp_path, capsys, cache):
    paths = []
    for k in range(2):
        out = tmp_path / f"o{k}"
        run(["--zeros", cache, "--output-dir", out, "scan", "theorem1", "--from", 100,
             "--to", 5000, "--points", 50, "--h", "0.5,2"], capsys)
        paths.append((out / "theorem1.csv").read_bytes())
    assert paths[0] == paths[1]
    line = paths[0].decode().splitlines()[1]
    assert all(len(x) <= 24 for x in line.split(","))


def test_parser_rejects_unknown_scan(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["scan", "moments"])
    assert info.value.code == 2
