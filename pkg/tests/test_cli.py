import json

import pytest

from fgindex.cli import (
    EXIT_INTERNAL,
    EXIT_INVALID,
    EXIT_OK,
    EXIT_TRUNCATED,
    index_fraction,
    main,
    report_dict,
)
from fgindex.sgraph import to_dot

from conftest import aut_path

RANK3 = str(aut_path("rank3"))
RANK4 = str(aut_path("rank4"))
RANK6 = str(aut_path("rank6_cyclic"))
FIB = str(aut_path("fibonacci"))


def test_index_fraction_formatting():
    assert index_fraction(0) == "0"
    assert index_fraction(2) == "1"
    assert index_fraction(4) == "2"
    assert index_fraction(9) == "9/2"
    assert index_fraction(15) == "15/2"


# -- check ---------------------------------------------------------------------


def test_check_prints_the_substitution(capsys):
    assert main(["check", FIB]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out == [
        "rank: 2",
        "letters: a b",
        "  a -> a b",
        "  b -> a",
        "positive: yes",
        "inverse: checks out",
        "primitive: yes",
    ]


def test_check_missing_file(capsys):
    assert main(["check", "no_such_file.aut"]) == EXIT_INVALID
    assert capsys.readouterr().err.startswith("error:")


def test_check_rejects_malformed_text(tmp_path, capsys):
    bad = tmp_path / "bad.aut"
    bad.write_text("letters: a b\nmap a = a b\nmap a = b\n")
    assert main(["check", str(bad)]) == EXIT_INVALID
    assert "error:" in capsys.readouterr().err


def test_check_rejects_wrong_inverse(tmp_path, capsys):
    bad = tmp_path / "noninv.aut"
    bad.write_text(
        "letters: a b\nmap a = a b\nmap b = a\ninv a = b\ninv b = a\n"
    )
    assert main(["check", str(bad)]) == EXIT_INVALID
    assert "error:" in capsys.readouterr().err


# -- index ---------------------------------------------------------------------


def test_index_complete_run(capsys):
    assert main(["index", RANK3]) == EXIT_OK
    captured = capsys.readouterr()
    lines = captured.out.splitlines()
    assert "rank: 3" in lines
    assert "singularities: 3" in lines
    assert "doubled index: 4" in lines
    assert "index: 2" in lines
    assert "complete: yes" in lines
    assert captured.err == ""


def test_index_truncated_run(capsys):
    assert main(["index", RANK6, "--max-k", "10"]) == EXIT_TRUNCATED
    captured = capsys.readouterr()
    assert "doubled index: 9" in captured.out
    assert "index: 9/2" in captured.out
    assert "complete: no" in captured.out
    assert captured.err.strip() == (
        "INCOMPLETE: sweep truncated (reached level 10 of 10; "
        "partial levels: 5, 6, 7, 8, 9, 10)"
    )


def test_index_rejects_bad_budget(capsys):
    assert main(["index", RANK3, "--budget", "17"]) == EXIT_INVALID
    assert "error:" in capsys.readouterr().err


def test_index_rejects_bad_max_k(capsys):
    assert main(["index", RANK3, "--max-k", "0"]) == EXIT_INVALID
    assert "error:" in capsys.readouterr().err


# -- report --------------------------------------------------------------------


def test_report_prints_json(capsys):
    assert main(["report", RANK4]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["rank"] == 4
    assert doc["fo_index_times_2"] == 6
    assert doc["index"] == "3"
    assert doc["complete"] is True
    assert doc["sweep"]["full_levels"] == [1, 2]
    assert len(doc["singularities"]) == 6
    first = doc["singularities"][0]
    assert first["label"] == {"w": "a", "k": 1}
    assert first["fixing_power"] == 1
    assert [p["kind"] for p in first["points"]] == ["development"] * 2
    assert len(doc["graph"]["finite_edges"]) == 6
    assert doc["components"][0]["basis"] == ["b d a^-1 d^-1 c b^-1 a c^-1"]
    assert len(doc["attracting_reps"]) == 6


def test_report_writes_files_instead_of_stdout(tmp_path, capsys):
    json_path = tmp_path / "out.json"
    dot_path = tmp_path / "out.dot"
    code = main(
        ["report", RANK4, "--json", str(json_path), "--dot", str(dot_path)]
    )
    assert code == EXIT_OK
    assert capsys.readouterr().out == ""
    doc = json.loads(json_path.read_text())
    assert doc["fo_index_times_2"] == 6
    dot = dot_path.read_text()
    assert dot.startswith("digraph singularities {")
    assert 'S0 [label="S0 (a, 1)"];' in dot


def test_report_reruns_are_byte_identical(tmp_path):
    paths = []
    for tag in ("one", "two"):
        json_path = tmp_path / f"{tag}.json"
        dot_path = tmp_path / f"{tag}.dot"
        assert (
            main(
                [
                    "report",
                    RANK4,
                    "--json",
                    str(json_path),
                    "--dot",
                    str(dot_path),
                ]
            )
            == EXIT_OK
        )
        paths.append((json_path.read_bytes(), dot_path.read_bytes()))
    assert paths[0] == paths[1]


def test_report_dict_matches_analysis(rank4_analysis):
    doc = report_dict(rank4_analysis)
    assert doc["fo_index_times_2"] == rank4_analysis.doubled
    assert [s["id"] for s in doc["singularities"]] == list(range(6))
    labels = [s["label"]["w"] for s in doc["singularities"]]
    assert labels == [
        "a",
        "d^-1",
        "a c",
        "d^-1 c^-1",
        "a b d",
        "d^-1 c^-1 a^-1 d^-1 b^-1",
    ]
    dot = to_dot(
        rank4_analysis.phi,
        rank4_analysis.result.singularities,
        rank4_analysis.graph,
        rank4_analysis.phi.alphabet,
    )
    assert dot.count("->") == 12  # 6 finite edges + 6 dashed ends


# -- verify --------------------------------------------------------------------

CHECK_NAMES = [
    "loop-census",
    "index-formulas-agree",
    "index-bound",
    "node-germ-identity",
    "component-rank-identity",
    "basis-fixed",
    "labels-pure",
    "classes-disjoint",
    "fixing-powers",
    "development-period-bound",
    "graph-deterministic",
]


def test_verify_passes_on_complete_run(capsys):
    assert main(["verify", RANK3]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out == [f"PASS {name}" for name in CHECK_NAMES]


def test_verify_truncated_run_still_checks_out(capsys):
    assert main(["verify", RANK6, "--max-k", "10"]) == EXIT_TRUNCATED
    captured = capsys.readouterr()
    lines = captured.out.splitlines()
    assert lines == [f"PASS {name}" for name in CHECK_NAMES]
    assert "INCOMPLETE" in captured.err


def test_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_INVALID, EXIT_TRUNCATED, EXIT_INTERNAL}) == 4
