import contextlib
import io
import json

import pytest

from constel.automata import as_inverse_automaton, read_aut
from constel.cli import main, parse_group_spec, parse_layers
from constel.groups import (CyclicSpec, ExtensionSpec, KleinSpec, PermSpec,
                            ProductSpec)
from constel.perms import from_cycles


def run(args):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(args)
    return code, out.getvalue(), err.getvalue()


def run_json(args, expect=0):
    code, out, err = run(args)
    assert code == expect, (code, err)
    payload = json.loads(out)
    assert payload["schema"] == 1
    return payload


def test_group_spec_language():
    assert parse_group_spec("cyclic(4; a=1, b=2)") == CyclicSpec(4, (1, 2))
    assert parse_group_spec("klein(a=10, b=01)") == KleinSpec(((1, 0), (0, 1)))
    assert parse_group_spec("perm(3; a=(0 1), b=(1 2))") == PermSpec(
        3, (from_cycles(3, [(0, 1)]), from_cycles(3, [(1, 2)])))
    assert parse_group_spec("tilde(cyclic(2; a=1,b=1), 3)") == ExtensionSpec(
        CyclicSpec(2, (1, 1)), 3, True)
    assert parse_group_spec("gaschutz(tilde(cyclic(2; a=1,b=1),2), 5)") == ExtensionSpec(
        ExtensionSpec(CyclicSpec(2, (1, 1)), 2, True), 5, False)
    assert parse_group_spec("prodA(cyclic(2; a=1,b=1), cyclic(3; a=1,b=1))") == ProductSpec(
        CyclicSpec(2, (1, 1)), CyclicSpec(3, (1, 1)))
    for bad in ("cyclic", "cyclic(2)", "wat(3)", "klein(a=3, b=01)"):
        with pytest.raises(ValueError):
            parse_group_spec(bad)


def test_layers_language():
    assert parse_layers("~2,3") == ((2, True), (3, False))
    assert parse_layers("~2,~2,~2") == ((2, True), (2, True), (2, True))
    assert parse_layers("") == ()
    with pytest.raises(ValueError):
        parse_layers("~x")


def test_example_evaluate_identity():
    payload = run_json(["evaluate", "--group", "tilde(cyclic(2; a=1,b=1),2)",
                        "--word", "aa"])
    assert payload["result"] == "identity"
    code, out, _ = run(["evaluate", "--group", "tilde(cyclic(2; a=1,b=1),2)",
                        "--word", "ab"])
    assert code == 1 and json.loads(out)["result"] == "non-identity"


def test_example_weak_dissolve_witness():
    code, out, _ = run(["dissolve", "--group", "cyclic(2; a=1,b=1)",
                        "--layers", "~2", "--weak"])
    assert code == 1
    payload = json.loads(out)
    assert payload["dissolver"] is False
    first = payload["reports"][0]
    assert first["label"] == "delta:a"
    assert first["method"] == "reachability"
    assert first["witness"] == {"u": "bab", "v": "a"}


def test_dissolver_exit_zero():
    code, out, _ = run(["dissolve", "--group", "cyclic(2; a=1,b=1)",
                        "--layers", "2", "--weak"])
    assert code == 0
    assert json.loads(out)["dissolver"] is True


def test_tall_tower_uses_linear_method():
    code, out, _ = run(["dissolve", "--group", "cyclic(2; a=1,b=1)",
                        "--layers", "~2,~2,~2", "--weak"])
    assert code == 0
    payload = json.loads(out)
    assert payload["dissolver"] is True
    assert all(r["method"] == "linear" for r in payload["reports"])


def test_example_completion_too_small(tmp_path):
    f = tmp_path / "f.aut"
    f.write_text("edge 0 a 1\nedge 1 a 2\nedge 0 b 0\nbase 0\n")
    code, _, err = run(["complete-alternating", "--automaton", str(f), "--n", "9"])
    assert code == 2
    assert "n < m+q+2 = 10" in err


def test_completion_report(tmp_path):
    f = tmp_path / "f.aut"
    f.write_text("edge 0 a 1\nedge 1 a 2\nedge 0 b 0\nbase 0\n")
    payload = run_json(["complete-alternating", "--automaton", str(f), "--n", "10"])
    assert (payload["m"], payload["q"], payload["k"], payload["n"]) == (3, 5, 0, 10)
    cert = payload["certificate"]
    assert cert["valid"] and cert["prime_cycle"] == [5, 1, "b"]
    completed = as_inverse_automaton(read_aut(payload["automaton"]))
    assert completed.n == 10 and completed.is_complete()


def test_fold_and_aut_out(tmp_path):
    f = tmp_path / "f.aut"
    f.write_text("edge 0 a 1\nedge 1 a 2\nedge 0 b 0\nbase 0\n")
    side = tmp_path / "out.aut"
    payload = run_json(["fold", "--automaton", str(f), "--aut-out", str(side)])
    assert payload["n"] == 3
    assert side.read_text() == payload["automaton"]


def test_core_golden():
    payload = run_json(["core", "--gens", "aa,b"])
    assert payload["automaton"] == "edge 0 a 1\nedge 0 b 0\nedge 1 a 0\nbase 0\n"
    assert payload["n"] == 2 and payload["rank"] == 2


def test_member_exit_codes():
    assert run(["member", "--gens", "aa,b", "--word", "aab"])[0] == 0
    assert run(["member", "--gens", "aa,b", "--word", "a"])[0] == 1
    code, _, err = run(["member", "--gens", "aa,b", "--word", "a!"])
    assert code == 2 and "bad character" in err


def test_cayley_golden():
    payload = run_json(["cayley", "--group", "cyclic(4; a=1,b=2)"])
    assert payload["order"] == 4
    assert payload["automaton"] == ("edge 0 a 1\nedge 0 b 2\nedge 1 a 2\n"
                                    "edge 1 b 3\nedge 2 a 3\nedge 2 b 0\n"
                                    "edge 3 a 0\nedge 3 b 1\nbase 0\n")


def test_constellations_listing():
    payload = run_json(["constellations", "--group", "cyclic(2; a=1,b=1)"])
    entries = payload["constellations"]
    assert len(entries) == 14
    for entry in entries:
        assert entry["far_component"] == [1]
        halves = entry["partition"]
        assert sorted(halves[0] + halves[1]) == sorted(entry["cut"])


def test_amalgam_command():
    payload = run_json(["amalgam", "--group", "cyclic(2; a=1,b=1)", "--index", "1"])
    assert payload["count"] == 7 and payload["n"] == 3
    code, _, err = run(["amalgam", "--group", "cyclic(2; a=1,b=1)", "--index", "99"])
    assert code == 2 and "out of range" in err


def test_ag_command():
    payload = run_json(["ag", "--group", "cyclic(2; a=1,b=1)"])
    assert payload["n"] == 22
    ag = as_inverse_automaton(read_aut(payload["automaton"]))
    assert ag.is_connected() and not ag.is_complete()


def test_certify_an_requires_complete(tmp_path):
    f = tmp_path / "f.aut"
    f.write_text("edge 0 a 1\nedge 1 a 2\nedge 0 b 0\nbase 0\n")
    code, _, err = run(["certify-an", "--automaton", str(f)])
    assert code == 2 and "complete" in err


def test_gaschutz_info_golden():
    payload = run_json(["gaschutz-info", "--group", "gaschutz(klein(a=10, b=01),3)"])
    assert payload["order"] == 972
    assert payload["kernel_rank"] == 5
    assert payload["center_order"] == 9
    assert payload["tilde"] is False


def test_gaschutz_info_rejects_plain_group():
    code, _, err = run(["gaschutz-info", "--group", "cyclic(2; a=1,b=1)"])
    assert code == 2 and "gaschutz" in err


def test_center_command():
    payload = run_json(["center", "--group", "gaschutz(cyclic(2; a=1,b=1),3)"])
    assert payload["order"] == 9
    assert payload["witness_words"] == ["aa", "bb"]
    code, _, err = run(["center", "--group", "tilde(cyclic(2; a=1,b=1),3)"])
    assert code == 2 and "plain layer" in err


def test_disconnect_command():
    neg = run_json(["disconnect", "--group", "tilde(cyclic(2; a=1,b=1),2)",
                    "--base", "cyclic(2; a=1,b=1)", "--letter", "a"])
    assert neg["equivalent"] is True and neg["disconnected"] is False
    pos = run_json(["disconnect", "--group", "gaschutz(cyclic(2; a=1,b=1),2)",
                    "--base", "cyclic(2; a=1,b=1)", "--letter", "a", "--sign", "-1"])
    assert pos["equivalent"] is True and pos["dissolves_delta"] is True


def test_key_lemma_command():
    payload = run_json(["key-lemma", "--group", "cyclic(2; a=1,b=1)",
                        "--p", "2", "--subgroup", "a"])
    assert payload["ok"] is True and payload["n_edges"] == 8
    assert payload["subgroup_order"] == 2
    code, _, err = run(["key-lemma", "--group", "cyclic(2; a=1,b=1)",
                        "--p", "2", "--subgroup", "aa"])
    assert code == 2 and "nontrivial" in err


def test_rank_check_command():
    payload = run_json(["rank-check", "--group", "klein(a=10, b=01)",
                        "--p", "3", "--tilde"])
    assert payload["rank"] == 3 and payload["cycle_dim"] == 5
    assert payload["formula_ok"] is True and payload["verified"] is True


def test_abelianization_command():
    assert run_json(["abelianization", "--group",
                     "tilde(klein(a=10, b=01),3)"])["factors"] == [2, 2]
    assert run_json(["abelianization", "--group",
                     "tilde(cyclic(2; a=1,b=1),3)"])["factors"] == [2]


def test_closure_command():
    payload = run_json(["closure", "--gens", "aa", "--level", "cyclic(4; a=1,b=1)"])
    assert payload["automaton"] == ("edge 0 a 1\nedge 0 b 1\nedge 1 a 0\n"
                                    "edge 1 b 0\nbase 0\n")
    assert payload["rank"] == 3 and payload["image_order"] == 2


def test_rz_member_command():
    level = "perm(3; a=(0 1), b=(1 2))"
    assert run(["rz-member", "--word", "ab", "--subgroups", "a|b",
                "--level", level])[0] == 0
    code, out, _ = run(["rz-member", "--word", "ba", "--subgroups", "a|b",
                        "--level", level])
    assert code == 1 and json.loads(out)["member"] is False


def test_out_flag_writes_report(tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(["core", "--gens", "aa,b", "--out", str(target)])
    assert code == 0
    assert json.loads(target.read_text())["n"] == 2


def test_corpus_generation(tmp_path):
    d1, d2 = str(tmp_path / "c1"), str(tmp_path / "c2")
    payload = run_json(["corpus", "--seed", "1", "--count", "10", "--dir", d1])
    assert len(payload["files"]) == 10
    run_json(["corpus", "--seed", "1", "--count", "10", "--dir", d2])
    sizes = []
    for i in range(10):
        text1 = open("%s/corpus_%03d.aut" % (d1, i)).read()
        text2 = open("%s/corpus_%03d.aut" % (d2, i)).read()
        assert text1 == text2  # same seed, same bytes
        aut = as_inverse_automaton(read_aut(text1))
        assert aut.is_connected() and not aut.is_complete()
        assert 3 <= aut.n <= 8
        sizes.append(aut.n)
    assert sizes == [4, 6, 4, 7, 7, 4, 7, 8, 7, 3]


def test_corpus_rejects_tiny_m(tmp_path):
    code, _, err = run(["corpus", "--m-min", "2", "--dir", str(tmp_path / "c")])
    assert code == 2 and "at least 3" in err


def test_unknown_command_and_bad_spec():
    assert run(["nonsense"])[0] == 2
    code, _, err = run(["cayley", "--group", "wat(3)"])
    assert code == 2 and "error:" in err
