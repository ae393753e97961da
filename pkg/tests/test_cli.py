"""End-to-end tests for the biquant command line.

Everything goes through ``main(argv)`` so exit codes and artifacts are
checked exactly as a shell invocation would see them; one test exercises
the installed console script itself.
"""

from __future__ import annotations

import subprocess
import sys

from biquant.cli import main
from biquant.graphs import enumerate_graphs, format_graphs, parse_graphs
from biquant.operators import StructTensor
from biquant.quantize import build_costar, build_star, parse_weight_table

PAIR_TEXT = """\
gamma 1 : 2 1
1 2 ; 2 = 1/1
gamma 2 : 1 2
2 ; 1 2 = 1/1
"""

BRACKET_TEXT = """\
gamma 1 : 2 1
1 2 ; 2 = 1/1
"""

# fails Jacobi; the empty second block is a zero cobracket
BAD_PAIR_TEXT = """\
gamma 1 : 2 1
1 2 ; 3 = 1/1
1 3 ; 1 = 1/1
2 3 ; 2 = 1/1
gamma 2 : 1 2
"""

BAD_GRAPH_TEXT = """\
1 1 1
d1 i1
u1 i1
i1 d1
"""


def write(path, text):
    path.write_text(text)
    return str(path)


def pair_file(tmp_path):
    return write(tmp_path / "pair.txt", PAIR_TEXT)


def reps_file(tmp_path):
    reps = [enumerate_graphs(2, 1, 1)[0], enumerate_graphs(1, 2, 1)[0]]
    return write(tmp_path / "reps.txt", format_graphs(reps) + "\n")


def run_weight(tmp_path, out="w.txt", workers=1, samples=2000):
    graph = reps_file(tmp_path)
    dest = tmp_path / out
    rc = main([
        "weight", "--graph", graph, "--samples", str(samples),
        "--seed", "0", "--workers", str(workers), "--out", str(dest),
    ])
    assert rc == 0
    return dest


# -- graphs ---------------------------------------------------------------------


def test_enumerate_counts_and_headers(tmp_path, capsys):
    out = tmp_path / "g.txt"
    rc = main(["graphs", "enumerate", "--m", "2", "--n", "1", "--s", "1",
               "--budget", "3", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "# biquant 0.1.0"
    assert lines[1].startswith("# profile")
    assert lines[2].startswith("# seed")
    assert "# count 2" in lines
    assert parse_graphs(out.read_text()) == enumerate_graphs(2, 1, 1, 3)


def test_enumerate_artifact_revalidates(tmp_path, capsys):
    out = tmp_path / "g.txt"
    main(["graphs", "enumerate", "--m", "1", "--n", "2", "--s", "1",
          "--out", str(out)])
    rc = main(["graphs", "validate", "--graph", str(out)])
    assert rc == 0
    text = capsys.readouterr().out
    assert "# invalid 0" in text
    assert "FAIL" not in text


def test_validate_flags_inadmissible_graph(tmp_path, capsys):
    bad = write(tmp_path / "bad.txt", BAD_GRAPH_TEXT)
    rc = main(["graphs", "validate", "--graph", bad])
    assert rc == 1
    out = capsys.readouterr().out
    assert "graph 1 FAIL" in out
    assert "# invalid 1" in out


def test_missing_input_file_is_io_failure(tmp_path, capsys):
    rc = main(["graphs", "validate", "--graph", str(tmp_path / "absent.txt")])
    assert rc == 2


def test_usage_errors_exit_1():
    assert main(["graphs", "enumerate", "--m", "2", "--bogus"]) == 1
    assert main(["nonsense"]) == 1


# -- operators and the complex ----------------------------------------------------


def test_op_compile_emits_bracket_template(tmp_path, capsys):
    gfile = tmp_path / "g.txt"
    main(["graphs", "enumerate", "--m", "2", "--n", "1", "--s", "1",
          "--out", str(gfile)])
    tfile = write(tmp_path / "bracket.txt", BRACKET_TEXT)
    rc = main(["op", "compile", "--graph", str(gfile), "--tensors", tfile,
               "--dim", "2"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "shape 2,1 order 1 terms 2" in out
    assert "1/1 : 1 0 | 0 1 -> 0 1" in out
    # the two labelings compile to opposite templates
    assert "-1/1 : 1 0 | 0 1 -> 0 1" in out


def test_op_compile_rejects_tensor_count_mismatch(tmp_path, capsys):
    gfile = tmp_path / "g.txt"
    main(["graphs", "enumerate", "--m", "2", "--n", "1", "--s", "1",
          "--out", str(gfile)])
    tfile = pair_file(tmp_path)
    rc = main(["op", "compile", "--graph", str(gfile), "--tensors", tfile,
               "--dim", "2"])
    assert rc == 1


def one_graph_file(tmp_path):
    g = enumerate_graphs(2, 1, 1)[0]
    return write(tmp_path / "one.txt", g.to_text() + "\n")


def test_gs_d_lists_probe_rows(tmp_path, capsys):
    gfile = one_graph_file(tmp_path)
    tfile = write(tmp_path / "bracket.txt", BRACKET_TEXT)
    rc = main(["gs", "d", "--graph", gfile, "--tensors", tfile,
               "--dim", "2", "--deg", "1"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "component d1 shape 3,1" in out
    assert "component d2 shape 2,2" in out
    # three monomials of degree <= 1 in d = 2, so 27 and 9 probe rows
    assert sum(1 for l in out.splitlines() if l.startswith("d1 ")) == 27
    assert sum(1 for l in out.splitlines() if l.startswith("d2 ")) == 9


def test_gs_d2check_passes_on_compiled_cochain(tmp_path, capsys):
    gfile = one_graph_file(tmp_path)
    tfile = write(tmp_path / "bracket.txt", BRACKET_TEXT)
    rc = main(["gs", "d2check", "--graph", gfile, "--tensors", tfile,
               "--dim", "2", "--deg", "2"])
    assert rc == 0
    assert "square PASS" in capsys.readouterr().out


# -- validator ----------------------------------------------------------------------


def test_bialg_check_accepts_the_solvable_pair(tmp_path, capsys):
    rc = main(["bialg", "check", "--tensors", pair_file(tmp_path), "--dim", "2"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "bialgebra PASS" in out
    assert "jacobi ok" in out


def test_bialg_check_rejects_jacobi_failure(tmp_path, capsys):
    bad = write(tmp_path / "bad.txt", BAD_PAIR_TEXT)
    rc = main(["bialg", "check", "--tensors", bad, "--dim", "3"])
    assert rc == 1
    assert "bialgebra FAIL" in capsys.readouterr().out


def test_bialg_check_needs_both_shapes(tmp_path, capsys):
    only = write(tmp_path / "only.txt", BRACKET_TEXT)
    rc = main(["bialg", "check", "--tensors", only, "--dim", "2"])
    assert rc == 1


# -- weights -----------------------------------------------------------------------


def test_weight_table_parses_back(tmp_path):
    dest = run_weight(tmp_path)
    table = parse_weight_table(dest.read_text())
    assert table.profile == "eye-v1"
    assert table.seed == 0
    assert len(table.eps_values()) == 3
    for key in table.keys():
        for eps in table.eps_values():
            value, stderr, samples = table.rows[eps][key]
            assert samples == 2000
            assert stderr > 0
            # the one-edge weights are 1/2; 2000 samples stay within ~10 sigma
            assert abs(value - 0.5) < 0.25


def test_weight_independent_of_workers(tmp_path):
    a = run_weight(tmp_path, out="w1.txt", workers=1)
    b = run_weight(tmp_path, out="w2.txt", workers=2)
    assert a.read_bytes() == b.read_bytes()


def test_weight_canonicalizes_the_labeling(tmp_path):
    first, second = enumerate_graphs(2, 1, 1)
    fa = write(tmp_path / "a.txt", first.to_text() + "\n")
    fb = write(tmp_path / "b.txt", second.to_text() + "\n")
    oa, ob = tmp_path / "wa.txt", tmp_path / "wb.txt"
    for src, dst in ((fa, oa), (fb, ob)):
        assert main(["weight", "--graph", src, "--samples", "2000",
                     "--seed", "0", "--out", str(dst)]) == 0
    # both labelings of the class yield the same canonical row
    rows_a = [l for l in oa.read_text().splitlines() if not l.startswith("#")]
    rows_b = [l for l in ob.read_text().splitlines() if not l.startswith("#")]
    assert rows_a == rows_b


def test_weight_refuses_tiny_sample_budget(tmp_path, capsys):
    graph = reps_file(tmp_path)
    assert main(["weight", "--graph", graph, "--samples", "5"]) == 1


# -- quantize ---------------------------------------------------------------------


def quantize_args(tmp_path, weights, report, caps=("1", "0"), deg="2"):
    return ["quantize", "--tensors", pair_file(tmp_path), "--dim", "2",
            "--caps", caps[0], caps[1], "--weights", str(weights),
            "--deg", deg, "--report", str(report)]


def test_quantize_first_order_report(tmp_path):
    wfile = run_weight(tmp_path)
    report = tmp_path / "report.txt"
    rc = main(quantize_args(tmp_path, wfile, report))
    assert rc == 0
    text = report.read_text()
    assert "# profile eye-v1" in text
    assert "# seed 0" in text
    assert "# weights combined" in text
    assert "# weights eps 0.1" in text
    rows = [l for l in text.splitlines() if not l.startswith("#")]
    assert rows, "report has no verdict rows"
    assert all(" exact-zero " in r for r in rows)
    assert report.with_suffix(".png").exists()


def test_quantize_report_is_deterministic(tmp_path):
    wfile = run_weight(tmp_path)
    r1, r2 = tmp_path / "r1.txt", tmp_path / "r2.txt"
    assert main(quantize_args(tmp_path, wfile, r1) + ["--workers", "1"]) == 0
    assert main(quantize_args(tmp_path, wfile, r2) + ["--workers", "2"]) == 0
    assert r1.read_bytes() == r2.read_bytes()
    assert r1.with_suffix(".png").read_bytes() == r2.with_suffix(".png").read_bytes()


def test_quantize_missing_weight_is_validation_failure(tmp_path, capsys):
    wfile = run_weight(tmp_path)
    report = tmp_path / "report.txt"
    rc = main(quantize_args(tmp_path, wfile, report, caps=("1", "1")))
    assert rc == 1
    assert "missing weight for graph" in capsys.readouterr().err


def full_fake_table(alpha, beta, caps):
    """Distinct generic weights for every key either series asks for."""
    weights: dict[str, tuple[float, float]] = {}
    for build in (build_star, build_costar):
        while True:
            try:
                build(alpha, beta, caps, weights)
            except ValueError as err:
                key = str(err).split("missing weight for graph ")[1]
                weights[key] = (0.11 * (len(weights) + 1), 1e-9)
                continue
            break
    return weights


def test_quantize_generic_weights_violate_and_exit_3(tmp_path, capsys):
    alpha = StructTensor.from_entries(2, 1, 2, [((1, 2), (2,), 1)])
    beta = StructTensor.from_entries(1, 2, 2, [((2,), (1, 2), 1)])
    weights = full_fake_table(alpha, beta, (1, 1))
    rows = ["# profile eye-v1", "# seed 0"]
    rows += [f"{k} {v:.12e} {e:.12e} 1000 0.1" for k, (v, e) in sorted(weights.items())]
    wfile = write(tmp_path / "fake.txt", "\n".join(rows) + "\n")
    report = tmp_path / "report.txt"
    rc = main(quantize_args(tmp_path, wfile, report, caps=("1", "1")))
    assert rc == 3
    assert " violation " in report.read_text()


def test_quantize_rejects_non_bialgebra(tmp_path, capsys):
    bad = write(tmp_path / "bad.txt", BAD_PAIR_TEXT)
    wfile = run_weight(tmp_path)
    rc = main(["quantize", "--tensors", bad, "--dim", "3", "--caps", "1", "0",
               "--weights", str(wfile), "--report", str(tmp_path / "r.txt")])
    assert rc == 1


def test_quantize_refuses_mixed_profiles(tmp_path, capsys):
    wfile = run_weight(tmp_path)
    text = wfile.read_text() + "# profile other-profile\n"
    mixed = write(tmp_path / "mixed.txt", text)
    rc = main(quantize_args(tmp_path, mixed, tmp_path / "r.txt"))
    assert rc == 1
    assert "profile" in capsys.readouterr().err


# -- certificate -------------------------------------------------------------------


def test_verify_propagator_report_and_rerun(tmp_path):
    r1, r2 = tmp_path / "c1.txt", tmp_path / "c2.txt"
    for dest in (r1, r2):
        rc = main(["verify-propagator", "--points", "10", "--report", str(dest)])
        assert rc == 0
    text = r1.read_text()
    assert "certificate PASS" in text
    assert text.splitlines()[1] == "# profile eye-v1"
    assert r1.read_bytes() == r2.read_bytes()
    assert r1.with_suffix(".png").read_bytes() == r2.with_suffix(".png").read_bytes()


# -- the installed script -----------------------------------------------------------


def test_module_invocation_matches_entry_point(tmp_path):
    result = subprocess.run(
        [sys.executable, "-m", "biquant.cli", "graphs", "enumerate",
         "--m", "2", "--n", "1", "--s", "1"],
        capture_output=True, text=True,
    )
    assert result.returncode == 0
    assert "# count 2" in result.stdout
