import csv
import json
import random
from fractions import Fraction

import pytest

from typed_contracts.cli import main
from typed_contracts.generators import gap3v4_family, gap3v4_menu
from typed_contracts.instance import InstanceError, validate
from typed_contracts.io import (
    contract_to_dict,
    dump_json,
    graph_to_dict,
    instance_to_dict,
    load_contracts,
    load_graph,
    load_instance,
    save_instance,
)
from typed_contracts.response import Contract, Menu

from helpers import random_instance

F = Fraction

SIMPLE = {
    "types": 1,
    "actions": 2,
    "outcomes": 2,
    "costs": ["0", "1/2"],
    "rewards": ["0", "1"],
    "forecasts": [[["1", "0"], ["0", "1"]]],
}


def write(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


# ----- file formats -------------------------------------------------------------


def test_numeric_literals(tmp_path):
    data = dict(SIMPLE, costs=[0, 0.5], rewards=["0", "1.0"])
    inst = load_instance(write(tmp_path / "a.json", data))
    assert inst.costs[0] == (0, F(1, 2))
    assert inst.weights == (F(1),)
    data = dict(SIMPLE, forecasts=[[["0.1", "0.9"], ["1/3", "2/3"]]])
    inst = load_instance(write(tmp_path / "b.json", data))
    assert inst.forecasts[0][0] == (F(1, 10), F(9, 10))


@pytest.mark.parametrize("seed", range(8))
def test_instance_round_trip(tmp_path, seed):
    inst = random_instance(random.Random(seed), cost_varying=seed % 2 == 0)
    path = tmp_path / "inst.json"
    save_instance(inst, path)
    back = load_instance(path)
    assert back == inst and back.shared == inst.shared
    assert validate(back) == []


def test_metadata_survives_round_trip(tmp_path):
    inst = gap3v4_family(3)
    path = tmp_path / "g.json"
    save_instance(inst, path)
    back = load_instance(path)
    assert back.metadata["provenance"]["family"] == "gap3v4"


def test_loader_errors(tmp_path):
    with pytest.raises(InstanceError, match="header says actions=3"):
        load_instance(write(tmp_path / "h.json", dict(SIMPLE, actions=3)))
    with pytest.raises(InstanceError, match="missing field"):
        load_instance(write(tmp_path / "m.json", {"rewards": ["0"]}))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(InstanceError, match="invalid JSON"):
        load_instance(bad)
    with pytest.raises(InstanceError):
        load_instance(tmp_path / "missing.json")


def test_sorting_loader(tmp_path):
    data = dict(SIMPLE, costs=["1/2", "0"], rewards=["1", "0"])
    inst = load_instance(write(tmp_path / "u.json", data), sort=True)
    assert inst.costs[0] == (0, F(1, 2)) and inst.rewards == (0, 1)
    assert "sort_permutation" in inst.metadata
    assert load_instance(tmp_path / "u.json").costs[0] == (F(1, 2), 0)


def test_contract_files(tmp_path):
    single = load_contracts(write(tmp_path / "x.json", {"x": ["0", "1/2"]}))
    assert single == Contract((0, F(1, 2)))
    menu = load_contracts(write(tmp_path / "menu.json", {"contracts": [["0", "1/2"], ["0", "1/4"]]}))
    assert isinstance(menu, Menu) and len(menu) == 2
    assert contract_to_dict(menu) == {"contracts": [["0", "1/2"], ["0", "1/4"]]}
    with pytest.raises(InstanceError):
        load_contracts(write(tmp_path / "y.json", {"y": []}))


def test_graph_files(tmp_path):
    g = load_graph(write(tmp_path / "c5.json", {"n": 5, "edges": [[1, 2], [2, 3], [3, 4], [4, 5], [5, 1]]}))
    assert g.neighbors(1) == (2, 5)
    assert graph_to_dict(g)["n"] == 5 and len(graph_to_dict(g)["edges"]) == 5
    with pytest.raises(InstanceError):
        load_graph(write(tmp_path / "loop.json", {"n": 2, "edges": [[1, 1]]}))


# ----- CLI ------------------------------------------------------------------------


@pytest.fixture
def gap_files(tmp_path):
    inst = tmp_path / "gap.json"
    menu = tmp_path / "menu.json"
    assert main(["generate", "gap3v4", "--k", "3", "--out", str(inst), "--menu-out", str(menu)]) == 0
    return inst, menu


def test_generate_gap3v4_weights(gap_files):
    inst = load_instance(gap_files[0])
    assert inst.weights == (F(2, 9), F(2, 9), F(2, 9), F(1, 3))


def test_solve_all(gap_files, tmp_path, capsys):
    report = tmp_path / "report.json"
    assert main(["solve", str(gap_files[0]), "--all", "--out", str(report)]) == 0
    out = capsys.readouterr().out
    assert "13/27" in out and "1/3" in out
    data = json.loads(report.read_text())
    assert data["benchmarks"]["Opt-Menu"]["exact"] == "13/27"
    assert data["benchmarks"]["Opt-Single"]["exact"] == "1/3"
    assert data["provenance"]["family"] == "gap3v4"


def test_solve_linear_single_crossing(tmp_path, capsys):
    path = write(tmp_path / "s.json", SIMPLE)
    assert main(["solve", path, "--linear"]) == 0
    out = capsys.readouterr().out
    assert "alpha=1/2" in out and "1/2" in out


def test_solve_budget_exit(tmp_path, capsys):
    data = {
        "types": 2, "actions": 2, "outcomes": 2, "costs": ["0", "1/2"], "rewards": ["0", "1"],
        "forecasts": [[["1", "0"], ["0", "1"]], [["1", "0"], ["1/2", "1/2"]]],
    }
    path = write(tmp_path / "two.json", data)
    assert main(["solve", path, "--single", "--budget", "1"]) == 3
    assert "budget" in capsys.readouterr().err
    assert main(["--budget", "1", "solve", path, "--single"]) == 3


def test_solve_float_mode(gap_files, capsys):
    assert main(["solve", str(gap_files[0]), "--menu", "--mode", "float"]) == 0
    assert "0.481481481481" in capsys.readouterr().out


def test_invalid_instance_exit(tmp_path, capsys):
    data = dict(SIMPLE, forecasts=[[["1/2", "1/4"], ["0", "1"]]])
    path = write(tmp_path / "bad.json", data)
    assert main(["solve", path]) == 2
    assert "(t=0,i=0)" in capsys.readouterr().err


def test_generate_theorem32(tmp_path):
    out = tmp_path / "t32.json"
    assert main(["generate", "theorem32", "--n", "3", "--types", "4", "--lambda", "1000000", "--out", str(out)]) == 0
    inst = load_instance(out)
    assert validate(inst) == [] and inst.num_outcomes == 2
    assert main(["generate", "theorem32", "--n", "3", "--types", "4", "--lambda", "3"]) == 2


def test_generate_domset_from_graph(tmp_path):
    graph = write(tmp_path / "c5.json", {"n": 5, "edges": [[1, 2], [2, 3], [3, 4], [4, 5], [5, 1]]})
    out = tmp_path / "d.json"
    assert main(["generate", "domset", "--graph", graph, "--out", str(out)]) == 0
    assert load_instance(out).shape == (10, 5, 6)


def test_transforms(tmp_path):
    src = tmp_path / "in.json"
    save_instance(random_instance(random.Random(2), T=2, n=2, m=2, cost_varying=True), src)
    cases = [
        (["nonlinearity"], lambda i: i.num_outcomes == 4),
        (["infopower", "--epsilon", "1/4"], lambda i: i.num_types == 3),
        (["collapse"], lambda i: i.shape[:2] == (1, 3)),
        (["uniformize"], lambda i: i.shared),
        (["normalize"], lambda i: min(i.rewards) == 0),
    ]
    for k, (args, check) in enumerate(cases):
        out = tmp_path / f"out{k}.json"
        assert main(["transform", args[0], str(src), *args[1:], "--out", str(out)]) == 0
        inst = load_instance(out)
        assert validate(inst) == [] and check(inst)
        assert "provenance" in inst.metadata or args[0] == "normalize"
    assert main(["transform", "infopower", str(src), "--epsilon", "3/4"]) == 2
    std = tmp_path / "out2.json"
    back = tmp_path / "back.json"
    assert main(["transform", "expand", str(std), "--n", "2", "--types", "2", "--out", str(back)]) == 0
    assert load_instance(back).num_types == 2


def test_verify_menu_ic(gap_files, capsys):
    assert main(["verify", str(gap_files[0]), str(gap_files[1])]) == 0
    out = capsys.readouterr().out
    assert "status: IC" in out and "13/27" in out


def test_verify_single_contract(gap_files, tmp_path):
    x = write(tmp_path / "x.json", {"x": ["0", "0", "0", "0"]})
    assert main(["verify", str(gap_files[0]), x]) == 0


def test_verify_broken_menu(gap_files, tmp_path, capsys):
    menu = contract_to_dict(gap3v4_menu(3))
    # entry 1 now pays more on every outcome, so other types want it
    menu["contracts"][1] = ["1", "1", "1", "0"]
    path = write(tmp_path / "broken.json", menu)
    assert main(["verify", str(gap_files[0]), path]) == 4
    out = capsys.readouterr().out
    assert "NOT IC" in out and "prefers entry 1" in out


def test_gaps_table_and_csv(gap_files, tmp_path, capsys):
    table = tmp_path / "gaps.csv"
    assert main(["gaps", str(gap_files[0]), "--csv", str(table)]) == 0
    out = capsys.readouterr().out
    assert "13/9" in out and "Delta(c)" in out
    rows = list(csv.reader(table.open()))
    header = rows[0]
    menu_row = next(r for r in rows if r and r[0] == "Opt-Menu")
    assert menu_row[header.index("Opt-Single")] == "13/9"


def test_gaps_zero_rewards(tmp_path, capsys):
    data = dict(SIMPLE, rewards=["0", "0"])
    assert main(["gaps", write(tmp_path / "z.json", data)]) == 0
    out = capsys.readouterr().out
    assert "undefined" in out and "all ratios are undefined" in out


def test_gaps_two_outcomes(tmp_path, capsys):
    report = tmp_path / "r.json"
    assert main(["gaps", write(tmp_path / "s.json", SIMPLE), "--out", str(report)]) == 0
    assert json.loads(report.read_text())["ratios"]["Opt-Menu/Opt-Linear"] == "1"


def test_outputs_identical_across_workers(gap_files, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["gaps", str(gap_files[0]), "--out", str(a)]) == 0
    assert main(["gaps", str(gap_files[0]), "--workers", "2", "--out", str(b)]) == 0
    assert json.loads(a.read_text()) == json.loads(b.read_text())


def test_bad_global_flags(gap_files):
    assert main(["solve", str(gap_files[0]), "--tolerance", "0"]) == 2
    assert main(["solve", str(gap_files[0]), "--workers", "0"]) == 2


def test_dump_json_renders_fractions(tmp_path):
    path = tmp_path / "f.json"
    dump_json({"v": F(1, 3), "xs": [F(1, 2)]}, path)
    assert json.loads(path.read_text()) == {"v": "1/3", "xs": ["1/2"]}
    assert instance_to_dict(gap3v4_family(2))["type_weights"] == ["1/4", "1/4", "1/2"]
