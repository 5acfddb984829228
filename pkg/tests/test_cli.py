"""Command-line interface: exit codes, deterministic output, certificates."""

import json

from cubicvt.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_build_stdout_header(capsys):
    code, out, _ = run(capsys, "build", "-m", "1")
    assert code == 0
    assert out.splitlines()[0] == "108 162"


def test_build_stdout_header_m2(capsys):
    code, out, _ = run(capsys, "build", "-m", "2")
    assert code == 0
    assert out.splitlines()[0] == "1944 2916"


def test_build_writes_files(tmp_path, capsys):
    base = str(tmp_path / "g1")
    code, _, _ = run(capsys, "build", "-m", "1", "--out", base)
    assert code == 0
    edges = (tmp_path / "g1.edges").read_text()
    assert edges.splitlines()[0] == "108 162"
    labels = json.loads((tmp_path / "g1.labels.json").read_text())
    assert labels["m"] == 1
    assert labels["labels"]["0"] == "a^0 b^0 v=[0,0] z^0"


def test_build_rejects_out_of_range_m(capsys):
    code, _, err = run(capsys, "build", "-m", "9")
    assert code == 2


def test_build_is_deterministic(tmp_path, capsys):
    # clear every construction cache between runs so the second build
    # recomputes from scratch rather than replaying the first
    from cubicvt.codes import engine
    from cubicvt.extraspecial import context
    from cubicvt.graphs import gamma

    a, b = str(tmp_path / "a"), str(tmp_path / "b")
    run(capsys, "build", "-m", "1", "--out", a)
    gamma.cache_clear()
    engine.cache_clear()
    context.cache_clear()
    run(capsys, "build", "-m", "1", "--out", b)
    assert (tmp_path / "a.edges").read_bytes() == (tmp_path / "b.edges").read_bytes()
    assert (
        (tmp_path / "a.labels.json").read_bytes()
        == (tmp_path / "b.labels.json").read_bytes()
    )


def test_verify_m1_reports_the_doubled_symmetry_group(tmp_path, capsys):
    cert_path = str(tmp_path / "cert.json")
    code, out, err = run(capsys, "verify", "-m", "1", "--out", cert_path)
    # check "4" fails honestly at m=1: the computed group is twice the target
    assert code == 1
    assert "failed: 4" in err
    cert = json.loads((tmp_path / "cert.json").read_text())
    assert cert["m"] == 1
    assert cert["vertex_count"] == 108
    assert cert["aut_order"] == 432
    assert cert["lemma_results"]["4"]["status"] == "fail"
    assert cert["lemma_results"]["4"]["acting_group_order"] == 216
    assert cert["lemma_results"]["1"]["status"] == "pass"
    assert cert["lemma_results"]["2"]["status"] == "pass"
    assert cert["lemma_results"]["semireg"]["status"] == "pass"
    assert cert["lemma_results"]["qirr"]["status"] == "pass"
    assert cert["lemma_results"]["figure1"]["status"] == "pass"
    assert cert["lemma_results"]["stab"]["status"] == "pass"
    assert cert["semiregular_spectrum"] == [1, 2, 3, 6]


def test_verify_single_selector_pass(capsys):
    code, out, _ = run(capsys, "verify", "-m", "1", "--lemma", "semireg")
    assert code == 0
    assert "check semireg: pass" in out


def test_verify_m3_skips_aut_checks(capsys):
    code, out, _ = run(capsys, "verify", "-m", "3", "--lemma", "4", "--json")
    assert code == 0
    assert "check 4: skipped" in out
    cert = json.loads(out[out.index("{"):])
    assert cert["lemma_results"]["4"]["status"] == "skipped"
    assert "m <= 2" in cert["lemma_results"]["4"]["reason"]


def test_verify_m3_semireg_certificate(capsys):
    code, out, _ = run(capsys, "verify", "-m", "3", "--lemma", "semireg", "--json")
    assert code == 0
    body = out[out.index("{"):]
    cert = json.loads(body)
    assert cert["semiregular_spectrum"] == [1, 2, 3, 6]
    assert cert["lemma_results"]["semireg"]["status"] == "pass"


def test_verify_figure1_selector(capsys):
    code, out, _ = run(capsys, "verify", "-m", "1", "--lemma", "figure1")
    assert code == 0
    assert "check figure1: pass" in out


def test_ppd_outputs(capsys):
    code, out, _ = run(capsys, "ppd", "2", "6")
    assert code == 0 and out.strip() == "none (exception: 2^6-1)"
    code, out, _ = run(capsys, "ppd", "7", "2")
    assert code == 0 and "2^y-1" in out
    code, out, _ = run(capsys, "ppd", "2", "4")
    assert code == 0 and out.strip() == "5"
    code, out, _ = run(capsys, "ppd", "2", "1")
    assert code == 0 and "degenerate" in out


def test_ppd_bad_input(capsys):
    code, _, err = run(capsys, "ppd", "1", "3")
    assert code == 2
    code, _, err = run(capsys, "ppd", "2", "600")
    assert code == 3


def test_quotient_by_v_is_a_four_cycle(tmp_path, capsys):
    base = str(tmp_path / "g1")
    run(capsys, "build", "-m", "1", "--out", base)
    out_path = str(tmp_path / "q.edges")
    code, _, _ = run(
        capsys,
        "quotient",
        "--in",
        base + ".edges",
        "--labels",
        base + ".labels.json",
        "--by",
        "V",
        "--out",
        out_path,
    )
    assert code == 0
    text = (tmp_path / "q.edges").read_text()
    assert text == "4 4\n0 1\n0 3\n1 2\n2 3\n"  # the 4-cycle 0-1-2-3-0
    degrees = [0] * 4
    for line in text.splitlines()[1:]:
        u, w = map(int, line.split())
        degrees[u] += 1
        degrees[w] += 1
    assert degrees == [2] * 4


def test_quotient_by_singletons_round_trips(tmp_path, capsys):
    base = str(tmp_path / "g1")
    run(capsys, "build", "-m", "1", "--out", base)
    code, out, _ = run(
        capsys, "quotient", "--in", base + ".edges", "--by", "singletons"
    )
    assert code == 0
    assert out == (tmp_path / "g1.edges").read_text()


def test_quotient_requires_labels_for_v(tmp_path, capsys):
    base = str(tmp_path / "g1")
    run(capsys, "build", "-m", "1", "--out", base)
    code, _, err = run(capsys, "quotient", "--in", base + ".edges", "--by", "V")
    assert code == 2


def test_cayley_six_cycle(tmp_path, capsys):
    group = tmp_path / "c6.perm"
    group.write_text("1 2 3 4 5 0\n")
    code, out, _ = run(capsys, "cayley", "--group", str(group), "--conn", "1,5")
    assert code == 0
    assert out.splitlines()[0] == "6 6"
    degrees = [0] * 6
    for line in out.splitlines()[1:]:
        u, w = map(int, line.split())
        degrees[u] += 1
        degrees[w] += 1
    assert degrees == [2] * 6


def test_cayley_rejects_identity_connection(tmp_path, capsys):
    group = tmp_path / "c6.perm"
    group.write_text("1 2 3 4 5 0\n")
    code, _, err = run(capsys, "cayley", "--group", str(group), "--conn", "0")
    assert code == 2


def test_cayley_malformed_group_file(tmp_path, capsys):
    group = tmp_path / "bad.perm"
    group.write_text("0 0 1\n")
    code, _, err = run(capsys, "cayley", "--group", str(group), "--conn", "1")
    assert code == 2


def test_missing_file_is_usage_error(capsys):
    code, _, err = run(capsys, "quotient", "--in", "no-such-file", "--by", "singletons")
    assert code == 2


def test_threads_flag_accepted(capsys):
    code, out, _ = run(capsys, "--threads", "4", "ppd", "2", "4")
    assert code == 0 and out.strip() == "5"


def test_certificate_serializes_aut_generators(tmp_path, capsys):
    cert_path = str(tmp_path / "cert.json")
    code, _, _ = run(capsys, "verify", "-m", "1", "--lemma", "4", "--out", cert_path)
    cert = json.loads((tmp_path / "cert.json").read_text())
    gens = cert["aut_generators"]
    assert gens and all(sorted(p) == list(range(108)) for p in gens)


def test_blocks_file_quotient(tmp_path, capsys):
    graph = tmp_path / "c4.edges"
    graph.write_text("4 4\n0 1\n0 3\n1 2\n2 3\n")
    blocks = tmp_path / "blocks.json"
    blocks.write_text("[0, 1, 0, 1]")
    code, out, _ = run(
        capsys, "quotient", "--in", str(graph), "--by", f"blocks:{blocks}"
    )
    assert code == 0
    assert out == "2 1\n0 1\n"
