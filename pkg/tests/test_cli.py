"""Command line surface: outputs, exit codes, registry plumbing."""

import pytest

from fdroof.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_machines_list(capsys):
    code, out, _ = run_cli(capsys, "machines", "list")
    assert code == 0
    for name in ("xeon-e5-2697v2-2s", "phi-7120a", "gtx480"):
        assert name in out
    assert out.count("\n") == 5  # header + separator + three machines


def test_machines_show(capsys):
    code, out, _ = run_cli(capsys, "machines", "show", "xeon-e5-2697v2-2s")
    assert code == 0
    assert "9.3" in out
    assert "1036.8" in out


def test_machines_show_unknown_exits_2(capsys):
    code, _, err = run_cli(capsys, "machines", "show", "nope")
    assert code == 2
    assert "unknown machine" in err


def test_machines_csv_format(capsys):
    code, out, _ = run_cli(capsys, "--format", "csv", "machines", "list")
    assert code == 0
    assert out.splitlines()[0].startswith("name,peak_gflops_theoretical")
    assert "xeon-e5-2697v2-2s,1036.8,119.424,930,100,9.3,4" in out


def test_oi_command(capsys):
    code, out, _ = run_cli(capsys, "oi", "--equation", "acoustic", "--order", "24",
                           "--machine", "xeon-e5-2697v2-2s")
    assert code == 0
    assert "oi: 9.625" in out
    assert "bound: compute" in out
    assert "kernel_flops: 154" in out


def test_oi_tti_and_double_precision(capsys):
    code, out, _ = run_cli(capsys, "oi", "--equation", "tti", "--order", "6")
    assert code == 0 and "oi: 10.0667" in out
    code, out, _ = run_cli(capsys, "oi", "--equation", "acoustic", "--order", "24",
                           "--precision", "8")
    assert code == 0 and "oi: 4.8125" in out


def test_oi_unknown_equation_exits_2(capsys):
    code, _, err = run_cli(capsys, "oi", "--equation", "maxwell", "--order", "2")
    assert code == 2 and "unknown equation" in err


def test_min_order_paper_cases(capsys):
    cases = [
        ("acoustic", "phi-7120a", "28"),
        ("tti", "xeon-e5-2697v2-2s", "6"),
        ("vti", "gtx480", "24"),
    ]
    for eq, machine, expected in cases:
        code, out, _ = run_cli(capsys, "min-order", "--equation", eq, "--machine", machine)
        assert code == 0
        assert f"minimum compute-bound order {expected}" in out


def test_min_order_never(capsys):
    code, out, _ = run_cli(capsys, "min-order", "--equation", "elastic",
                           "--machine", "gtx480")
    assert code == 0
    assert "never" in out


def test_roofline_writes_files(tmp_path, capsys):
    svg = tmp_path / "roof.svg"
    csv = tmp_path / "roof.csv"
    code, out, _ = run_cli(capsys, "roofline", "--machine", "gtx480",
                           "--points", "elastic:8", "--measured", "elastic:8=94.8",
                           "--svg", str(svg), "--csv", str(csv))
    assert code == 0
    assert svg.exists() and csv.exists()
    assert "elastic:8,9,1.5528,234.0095,memory,94.8" in csv.read_text()


def test_roofline_order_sweep(tmp_path, capsys):
    svg = tmp_path / "sweep.svg"
    csv = tmp_path / "sweep.csv"
    code, _, _ = run_cli(capsys, "roofline", "--machine", "xeon-e5-2697v2-2s",
                         "--points", "acoustic:2..24", "--svg", str(svg),
                         "--csv", str(csv))
    assert code == 0
    lines = csv.read_text().strip().splitlines()[1:]
    assert len(lines) == 12  # even orders 2..24
    bounds = [line.split(",")[4] for line in lines]
    # ridge crossing sits between orders 22 and 24
    assert bounds[:11] == ["memory"] * 11
    assert bounds[11] == "compute"


def test_roofline_without_points_draws_roof_alone(tmp_path, capsys):
    svg = tmp_path / "bare.svg"
    code, _, _ = run_cli(capsys, "roofline", "--machine", "phi-7120a",
                         "--svg", str(svg))
    assert code == 0
    text = svg.read_text()
    assert text.count("<polyline") == 2  # slope + roof, nothing else
    assert "<circle" not in text


def test_roofline_unmatched_measured_label(tmp_path, capsys):
    code, _, err = run_cli(capsys, "roofline", "--machine", "gtx480",
                           "--points", "elastic:8", "--measured", "typo:8=94.8",
                           "--svg", str(tmp_path / "x.svg"))
    assert code == 2
    assert "match no requested point" in err


def test_oi_curve_command(tmp_path, capsys):
    svg = tmp_path / "curves.svg"
    code, _, _ = run_cli(capsys, "oi-curve", "--equations", "acoustic,vti,tti",
                         "--kmax", "35", "--machines",
                         "xeon-e5-2697v2-2s,phi-7120a,gtx480", "--svg", str(svg))
    assert code == 0
    assert svg.exists()


def test_cost_defaults_reproduce_tables(capsys):
    code, out, _ = run_cli(capsys, "cost")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 7  # header, separator, five orders
    row24 = lines[-1].split()
    assert row24[0] == "24"
    assert "962.5" in lines[-1] and "930" in lines[-1]


def test_cost_single_order_runtimes(capsys):
    code, out, _ = run_cli(capsys, "--format", "csv", "cost", "--orders", "2")
    assert code == 0
    assert out.splitlines()[1] == "2,12,6,1,0.5774,1.25e+08,1000,1.375,2750,137.5,20,275,10"


def test_cost_empty_orders_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "cost", "--orders", "")
    assert code == 2
    assert "orders" in err


def test_utilization_elastic_case(capsys):
    code, out, _ = run_cli(capsys, "utilization", "--equation", "elastic",
                           "--grid", "225", "--nt", "1000", "--runtime", "53",
                           "--machine", "gtx480")
    assert code == 0
    assert "94.7786 GFLOPS" in out
    assert "utilization:       40.5%" in out
    assert "headroom:          2.47x" in out


def test_utilization_symmetric_entry(capsys):
    code, out, _ = run_cli(capsys, "utilization", "--equation", "elastic-symmetric",
                           "--grid", "225", "--nt", "1000", "--runtime", "53",
                           "--machine", "gtx480")
    assert code == 0
    assert "utilization:       16.0%" in out


def test_bench_smoke(capsys):
    code, out, _ = run_cli(capsys, "bench", "--order", "2", "--grid", "16",
                           "--nt", "2", "--machine", "gtx480")
    assert code == 0
    assert "oi:                1.375" in out
    assert "measured:" in out


def test_bench_repeat_reports_spread(capsys, tmp_path):
    dump = tmp_path / "field.bin"
    code, out, _ = run_cli(capsys, "bench", "--order", "2", "--grid", "12", "--nt", "2",
                           "--machine", "gtx480", "--repeat", "3", "--dump", str(dump))
    assert code == 0
    assert "min" in out and "median" in out and "max" in out
    assert dump.exists() and (tmp_path / "field.bin.dims").exists()


def test_machines_file_flag(tmp_path, capsys):
    path = tmp_path / "m.yaml"
    path.write_text("name: custom\npeak_gflops_achievable: 500\npeak_bw_achievable: 50\n")
    code, out, _ = run_cli(capsys, "--machines-file", str(path), "machines", "show", "custom")
    assert code == 0
    assert "10" in out  # ridge point 500/50


def test_equations_file_flag(tmp_path, capsys):
    path = tmp_path / "eq.yaml"
    path.write_text("name: acoustic-2d\nn_second: 2\nextra_mult: 3\nextra_add: 4\n"
                    "duplicates: 3\nfields_moved: 4\n")
    code, out, _ = run_cli(capsys, "--equations-file", str(path), "oi",
                           "--equation", "acoustic-2d", "--order", "2")
    assert code == 0
    assert "kernel_flops: 16" in out


def test_config_dir_env(tmp_path, capsys, monkeypatch):
    (tmp_path / "machines.yaml").write_text(
        "name: envbox\npeak_gflops_achievable: 100\npeak_bw_achievable: 10\n")
    (tmp_path / "equations.yaml").write_text(
        "name: enveq\nn_second: 1\nfields_moved: 2\n")
    monkeypatch.setenv("FDROOF_CONFIG_DIR", str(tmp_path))
    code, out, _ = run_cli(capsys, "machines", "list")
    assert code == 0 and "envbox" in out
    code, out, _ = run_cli(capsys, "oi", "--equation", "enveq", "--order", "2")
    assert code == 0 and "kernel_flops: 6" in out


def test_malformed_registry_exits_2(tmp_path, capsys):
    path = tmp_path / "m.yaml"
    path.write_text("name: x\n  dangling: [\n")
    code, _, err = run_cli(capsys, "--machines-file", str(path), "machines", "list")
    assert code == 2
    assert "line" in err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2
