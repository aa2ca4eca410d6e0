import json

from trivector.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_gamma_build_and_count(tmp_path, capsys):
    g = tmp_path / "g.json"
    code, rep = run_cli(capsys, "gamma", "build", "--field", "GF(2)",
                        "--set", "c15=1", "-o", str(g))
    assert code == 0
    assert rep["verdict"]["terms"] == 9
    code, rep = run_cli(capsys, "loci", "count", "--gamma", str(g))
    assert code == 0
    assert rep["verdict"]["counts"] == {"0": 0, "2": 0, "4": 5, "6": 290,
                                        "8": 216}
    assert str(g) in rep["inputs"]


def test_gamma_build_gf4_default_modulus(capsys):
    code, rep = run_cli(capsys, "gamma", "build", "--field", "GF(4)")
    assert code == 0
    assert rep["verdict"]["field"] == "GF(2^2)"


def test_cli_determinism(tmp_path, capsys):
    g = tmp_path / "g.json"
    run_cli(capsys, "gamma", "build", "--field", "GF(2^4)", "--set", "c15=1",
            "-o", str(g))
    p = tmp_path / "p.json"
    import trivector.serialize as ser
    from trivector.loci import pencil_basis
    t = ser.trivector_from_json(ser.load_json(str(g)))
    ser.dump_json(ser.pencil_to_json(t.field, pencil_basis(t)), str(p))
    code1, rep1 = run_cli(capsys, "--seed", "5", "loci", "reconstruct",
                          "--pencil", str(p))
    code2, rep2 = run_cli(capsys, "--seed", "5", "loci", "reconstruct",
                          "--pencil", str(p))
    assert code1 == code2 == 0
    assert rep1["verdict"] == rep2["verdict"]
    assert rep1["seed"] == 5


def test_flags_chern_cli(capsys):
    code, rep = run_cli(capsys, "flags", "chern")
    assert code == 0
    assert rep["verdict"]["coefficient"] == 81
    assert rep["verdict"]["exponents"] == [0, 1, 1, 3, 3, 3, 6, 6, 8]


def test_stability_cli(tmp_path, capsys):
    g = tmp_path / "g0.json"
    run_cli(capsys, "gamma", "build", "--field", "GF(2)", "-o", str(g))
    code, rep = run_cli(capsys, "stability", "--gamma", str(g))
    assert code == 0
    assert rep["verdict"]["status"] == "non_stable"
    assert len(rep["verdict"]["witness"]) == 6


def test_heisenberg_cli(capsys):
    code, rep = run_cli(capsys, "heisenberg", "invariants", "--field", "GF(7)")
    assert code == 0
    assert rep["verdict"]["dimension"] == 4


def test_char3_rank_cli(tmp_path, capsys):
    c = tmp_path / "c.json"
    c.write_text(json.dumps({"field": "GF(3)", "c": {"24": "1"}}))
    code, rep = run_cli(capsys, "char3", "rank", "--curve", str(c))
    assert code == 0
    assert rep["verdict"]["lie"] == rep["verdict"]["coeff"] == 2


def test_gamma_act_perm(tmp_path, capsys):
    g = tmp_path / "g.json"
    f = tmp_path / "flag_check_input.json"
    run_cli(capsys, "gamma", "build", "--field", "GF(5)", "--set", "c30=1",
            "-o", str(g))
    code, rep = run_cli(capsys, "gamma", "act", "--gamma", str(g),
                        "--perm", "974852631", "-o", str(f))
    assert code == 0
    import trivector.serialize as ser
    from trivector.flags import flag_compatible, standard_flag
    t = ser.trivector_from_json(ser.load_json(str(f)))
    assert flag_compatible(t, standard_flag(t.field)).compatible


def test_malformed_json_reports_location(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"field": "GF(2)", "terms": [,]}')
    code = main(["stability", "--gamma", str(bad)])
    err = capsys.readouterr().err
    assert code == 1
    assert "line 1" in err and "column" in err


def test_usage_error_exit_code(tmp_path, capsys):
    g = tmp_path / "g.json"
    run_cli(capsys, "gamma", "build", "--field", "GF(2)", "-o", str(g))
    code = main(["gamma", "act", "--gamma", str(g)])
    assert code == 1


def test_selftest_single_criterion(capsys):
    code, rep = run_cli(capsys, "selftest", "--criteria", "C11")
    assert code == 0
    assert rep["verdict"]["all_pass"] is True
    assert rep["verdict"]["criteria"][0]["id"] == "C11"


def test_loci_cubic_and_embedding_cli(tmp_path, capsys):
    g = tmp_path / "g.json"
    run_cli(capsys, "gamma", "build", "--field", "GF(2)", "--set", "c15=1",
            "-o", str(g))
    out = tmp_path / "cubic.json"
    code, rep = run_cli(capsys, "loci", "cubic", "--gamma", str(g),
                        "--q", "4", "-o", str(out))
    assert code == 0 and rep["verdict"]["monomials"] > 0
    c = tmp_path / "c.json"
    c.write_text(json.dumps({"field": "GF(7)", "c": {"30": "1"}}))
    code, rep = run_cli(capsys, "loci", "check-embedding", "--curve", str(c))
    assert code == 0
    assert rep["verdict"]["weierstrass_rank"] <= 4


def test_loci_count_points_output(tmp_path, capsys):
    g = tmp_path / "g.json"
    run_cli(capsys, "gamma", "build", "--field", "GF(2)", "--set", "c15=1",
            "-o", str(g))
    pts = tmp_path / "pts.json"
    code, rep = run_cli(capsys, "loci", "count", "--gamma", str(g),
                        "--max-rank", "4", "--points", str(pts))
    assert code == 0
    data = json.loads(pts.read_text())
    assert len(data["points"]) == 5
    assert all(p["rank"] <= 4 for p in data["points"])


def test_flags_search_cli(tmp_path, capsys):
    g = tmp_path / "g.json"
    run_cli(capsys, "gamma", "build", "--field", "GF(4)", "--set", "c15=1",
            "-o", str(g))
    p = tmp_path / "p.json"
    run_cli(capsys, "gamma", "act", "--gamma", str(g),
            "--perm", "974852631", "-o", str(p))
    code, rep = run_cli(capsys, "flags", "search", "--gamma", str(p),
                        "--max-ext", "1")
    assert code == 0
    assert 1 <= rep["verdict"]["weighted_count"] <= 81
    assert rep["verdict"]["complete"] is False


def test_flags_check_cli(tmp_path, capsys):
    g = tmp_path / "g.json"
    run_cli(capsys, "gamma", "build", "--field", "GF(5)", "-o", str(g))
    flag = tmp_path / "flag.json"
    rows = [[1 if i == j else 0 for j in range(9)] for i in range(8)]
    flag.write_text(json.dumps({"field": "GF(5)", "F1": rows[:1],
                                "F3": rows[:3], "F6": rows[:6],
                                "F8": rows[:8]}))
    code, rep = run_cli(capsys, "flags", "check", "--gamma", str(g),
                        "--flag", str(flag))
    assert code == 0
    assert rep["verdict"]["compatible"] is False
    assert rep["verdict"]["violated"][0]["ijk"] == [2, 4, 9]
