import json

import pytest

from silverchase import cli
from silverchase.chase import chase, gen_psi
from silverchase.formats import chase_from_doc, chase_from_text, dot_edges, dump_psi, dumps, load_psi, poset_to_doc, transcript_to_doc

from game_fixtures import illegal_fixtures, legal_fixtures
from test_chase import exhausted_seed


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = cli.main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err
    return _run


@pytest.fixture
def psi0_file(tmp_path, psi0):
    p = tmp_path / "psi0.txt"
    p.write_text(dump_psi(psi0))
    return p


def write_game(tmp_path, poset, t, stem="g"):
    pp, tp = tmp_path / f"{stem}-poset.json", tmp_path / f"{stem}-play.json"
    pp.write_text(dumps(poset_to_doc(poset)))
    tp.write_text(dumps(transcript_to_doc(t)))
    return pp, tp


def test_psi_gen_constant(run):
    code, out, _ = run("psi-gen", "--kind", "constant", "--seed", 7, "--D", 3)
    assert code == 0
    psi = load_psi(out)
    assert psi.horizon == 3 and len({lab for _, lab in psi.items()}) == 1
    assert "seed=7" in out


def test_psi_gen_collapsing(run):
    code, out, _ = run("psi-gen", "--kind", "collapsing", "--seed", 3, "--D", 3)
    psi = load_psi(out)
    assert len(set(psi.levels[0].tolist())) == 1
    assert len(set(psi.levels[1].tolist())) == 4


def test_psi_gen_is_byte_identical(run, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run("psi-gen", "--seed", 5, "--D", 5, "--out", a)
    run("psi-gen", "--seed", 5, "--D", 5, "--out", b)
    assert a.read_bytes() == b.read_bytes()


def test_psi_gen_infeasible(run):
    code, _, err = run("psi-gen", "--kind", "level_injective", "--label-range", 1)
    assert code == 1 and "error" in err


def test_chase_psi0(run, psi0_file):
    code, out, _ = run("chase", psi0_file)
    assert code == 0
    result = chase_from_text(out)
    assert result.final_assignment.as_dict() == {1: 0}
    assert result.final.free == (0,)
    assert result.final_tree.sorted_nodes() == [(), (5,), (5, 1), (5, 3)]
    assert "final-binary yes" in out.splitlines()


def test_chase_constant_table(run, tmp_path):
    p = tmp_path / "c.txt"
    p.write_text(dump_psi(gen_psi(7, 2, 7, 5, "constant")))
    code, out, _ = run("chase", p, "--format", "doc")
    assert code == 0
    result = chase_from_doc(json.loads(out))
    for stage in result.stages[:-1]:
        (rec,) = stage.records
        assert rec.branch == "equalized" and dict(rec.extension) == {stage.frontier + 1: 0}


def test_chase_max_stages_zero(run, psi0_file):
    code, out, _ = run("chase", psi0_file, "--max-stages", 0)
    assert code == 0
    assert len(chase_from_text(out).stages) == 1


def test_chase_dot(run, psi0_file, psi0):
    code, out, _ = run("chase", psi0_file, "--format", "dot")
    tree = chase(psi0, 8).final_tree
    assert dot_edges(out) == {(v[:-1], v) for v in tree if v}


def test_chase_exhaustion_exit_code(run, tmp_path):
    seed, expected = exhausted_seed()
    p = tmp_path / "x.txt"
    p.write_text(dump_psi(expected.psi))
    code, out, _ = run("chase", p, "--max-stages", 10)
    assert code == 2 and "horizon_exhausted" in out


def test_chase_parse_error(run, tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("psi a=2 D=2\n0 5\n")
    code, _, err = run("chase", p)
    assert code == 1 and err.startswith("silverchase: error:")
    code, _, _ = run("chase", tmp_path / "missing.txt")
    assert code == 1


def test_oracle_listing(run, psi0_file):
    code, out, _ = run("oracle", psi0_file, "--free", 1, "--L", 2)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "oracle L=2 free=1 k=2 count=4"
    assert "  n=2 B=2 1=0" in lines
    assert lines[-1] == "chase-member yes"


def test_oracle_rejects_deep_L(run, psi0_file):
    code, _, _ = run("oracle", psi0_file, "--free", 1, "--L", 3)
    assert code == 1


def test_game_validate_one_element(run, tmp_path):
    poset, t = legal_fixtures()["one-element"]
    pp, tp = write_game(tmp_path, poset, t)
    code, out, _ = run("game-validate", "--poset", pp, "--transcript", tp, "--format", "doc")
    doc = json.loads(out)
    assert code == 0 and doc["overall"] == "legal" and doc["win"]["kind"] == "generic_wins"


def test_game_validate_chain_violation(run, tmp_path):
    poset, t = illegal_fixtures()["gamma.chain"]
    pp, tp = write_game(tmp_path, poset, t)
    code, out, _ = run("game-validate", "--poset", pp, "--transcript", tp)
    assert code == 3
    assert out.startswith("verdict illegal rule=gamma.chain")


def test_game_validate_shape_error(run, tmp_path):
    poset, t = legal_fixtures()["one-element"]
    pp, tp = write_game(tmp_path, poset, t)
    doc = json.loads(tp.read_text())
    doc["rounds"][0]["enumeration"] = [[0]]
    tp.write_text(json.dumps(doc))
    code, _, _ = run("game-validate", "--poset", pp, "--transcript", tp)
    assert code == 1


def test_game_script_is_legal(run, tmp_path):
    tp = tmp_path / "play.json"
    run("game-script", "--n", 2, "--rounds", 5, "--seed", 4, "--out", tp)
    pp = tmp_path / "poset.json"
    pp.write_text(dumps({"format_version": 1, "kind": "silver", "n": 2}))
    code, out, _ = run("game-validate", "--poset", pp, "--transcript", tp)
    assert code == 0 and out.startswith("verdict legal")


@pytest.mark.parametrize("expr, expected", [
    ('FP_1 of "n=2 B=5 0=1,2=0,3=1"', "4"),
    ('"" * 10', "n=2 B=2 0=1,1=0"),
    ('"0=1" <=*_3 "0=1,5=0"', "true"),
    ('"0=1" <= "0=0"', "false"),
    ('"0=1" compat "1=0"', "true"),
    ('"0=1" union "3=0"', "n=2 B=4 0=1,3=0"),
])
def test_silver_expressions(run, expr, expected):
    code, out, _ = run("silver", expr)
    assert code == 0 and out == expected + "\n"


def test_silver_expression_errors(run):
    assert run("silver", '"0=1" union "0=0"')[0] == 1
    assert run("silver", '"0=5" <= "0=1"')[0] == 1
    assert run("silver", "FP_x of ''")[0] == 1
    assert run("silver", "'0=1' <=*_y '0=1'")[0] == 1
    assert run("silver", "'0=1")[0] == 1


def test_sweep_deterministic_and_thread_independent(run, monkeypatch):
    args = ("sweep", "--tables", 12, "--D-min", 3, "--D-max", 5, "--seed", 2)
    monkeypatch.setenv("SILVER_CHASE_THREADS", "1")
    code, serial, _ = run(*args)
    assert code == 0
    monkeypatch.setenv("SILVER_CHASE_THREADS", "2")
    assert run(*args)[1] == serial
    assert serial.splitlines()[1].split()[0] == "D"


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("SILVER_CHASE_THREADS", "3")
    assert cli.worker_count() == 3
    monkeypatch.setenv("SILVER_CHASE_THREADS", "0")
    assert cli.worker_count() >= 1
    monkeypatch.setenv("SILVER_CHASE_THREADS", "many")
    with pytest.raises(cli.UsageError):
        cli.worker_count()


def test_every_command_is_byte_stable(run, psi0_file, tmp_path):
    poset, t = illegal_fixtures()["nice.split"]
    pp, tp = write_game(tmp_path, poset, t)
    commands = [
        ("psi-gen", "--kind", "random", "--seed", 9, "--D", 4),
        ("chase", psi0_file, "--format", "doc"),
        ("chase", psi0_file, "--format", "dot"),
        ("oracle", psi0_file, "--free", 1, "--format", "doc"),
        ("game-validate", "--poset", pp, "--transcript", tp, "--format", "doc"),
        ("game-script", "--seed", 3, "--rounds", 6),
        ("silver", '"" * 10 0 1'),
    ]
    for argv in commands:
        assert run(*argv) == run(*argv)
