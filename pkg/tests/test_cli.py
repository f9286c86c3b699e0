"""Command-line surface: subcommands, exit codes, serialization round trips."""

import json

import pytest

from conftest import (
    BIN_CUBIC_1,
    BIN_CUBIC_2,
    TRIO_1,
    TRIO_2,
    TRIO_3,
)
from polydecomp import center_basis
from polydecomp.cli import (
    main,
    matrix_from_json,
    matrix_to_json,
    read_problem,
    result_from_document,
    result_to_document,
)
from polydecomp.ratlinalg import RatMatrix


@pytest.fixture
def pair_file(tmp_path):
    path = tmp_path / "pair.txt"
    path.write_text(
        "# two binary cubics\n"
        "vars: u1 u2\n"
        f"{BIN_CUBIC_1}\n"
        f"{BIN_CUBIC_2}\n"
    )
    return str(path)


@pytest.fixture
def trio_file(tmp_path):
    path = tmp_path / "trio.txt"
    path.write_text(
        "vars: x1 x2 x3\n" + "\n".join([TRIO_1, TRIO_2, TRIO_3]) + "\n"
    )
    return str(path)


class TestProblemFiles:
    def test_read(self, pair_file):
        problem = read_problem(pair_file)
        assert problem.vars == ("u1", "u2")
        assert len(problem.sources) == 2
        assert len(problem.parse()) == 2

    def test_missing_vars_line(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("x + y\n")
        assert main(["center", "--input", str(path)]) == 2

    def test_missing_file(self):
        assert main(["center", "--input", "/nonexistent/nope.txt"]) == 2

    def test_bad_polynomial_exit_code(self, tmp_path, capsys):
        path = tmp_path / "bad.txt"
        path.write_text("vars: x\nx^\n")
        assert main(["center", "--input", str(path)]) == 2
        assert "error" in capsys.readouterr().err


class TestCenterCommand:
    def test_text_output(self, pair_file, capsys):
        assert main(["center", "--input", pair_file]) == 0
        out = capsys.readouterr().out
        assert "center dimension: 2" in out

    def test_json_output(self, pair_file, capsys):
        assert main(["center", "--input", pair_file, "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["center_dim"] == 2
        assert len(doc["center_basis"]) == 2

    def test_trio_center(self, trio_file, capsys):
        assert main(["center", "--input", trio_file]) == 0
        assert "center dimension: 1" in capsys.readouterr().out

    def test_affine_center_full(self, tmp_path, capsys):
        path = tmp_path / "affine.txt"
        path.write_text("vars: x y\nx - y + 3\n")
        assert main(["center", "--input", path.as_posix()]) == 0
        assert "center dimension: 4" in capsys.readouterr().out


class TestDecomposeCommand:
    def test_text_diagonalizable(self, pair_file, capsys):
        assert main(["decompose", "--input", pair_file]) == 0
        out = capsys.readouterr().out
        assert "diagonalizable: yes" in out
        assert "f1(P*y) =" in out

    def test_indecomposable_is_exit_zero(self, trio_file, capsys):
        assert main(["decompose", "--input", trio_file]) == 0
        out = capsys.readouterr().out
        assert "indecomposable (center is scalar)" in out

    def test_json_document(self, pair_file, tmp_path):
        out_path = tmp_path / "result.json"
        assert (
            main(
                [
                    "decompose",
                    "--input",
                    pair_file,
                    "--json",
                    "--output",
                    str(out_path),
                ]
            )
            == 0
        )
        doc = json.loads(out_path.read_text())
        assert doc["version"] == 1
        assert doc["diagonalizable"] is True
        assert doc["center_dim"] == 2
        assert doc["seed"] == 42
        assert len(doc["tree"]["children"]) == 2

    def test_seed_flag_changes_nothing_structural(self, pair_file, capsys):
        for seed in ("1", "2"):
            assert main(["decompose", "--input", pair_file, "--seed", seed]) == 0
            assert "diagonalizable: yes" in capsys.readouterr().out

    def test_fourvar_block_sizes(self, tmp_path, capsys):
        from conftest import FOURVAR_1, FOURVAR_2

        path = tmp_path / "fourvar.txt"
        path.write_text(f"vars: x1 x2 x3 x4\n{FOURVAR_1}\n{FOURVAR_2}\n")
        assert main(["decompose", "--input", str(path), "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        sizes = sorted(len(c["indices"]) for c in doc["tree"]["children"])
        assert sizes == [1, 1, 2]
        assert doc["diagonalizable"] is False


class TestVerifyCommand:
    def test_fresh_result_passes(self, pair_file, tmp_path, capsys):
        out_path = tmp_path / "result.json"
        main(["decompose", "--input", pair_file, "--json", "--output", str(out_path)])
        assert (
            main(["verify", "--input", pair_file, "--result", str(out_path)]) == 0
        )
        assert "PASS" in capsys.readouterr().out

    def test_tampered_transform_fails(self, pair_file, tmp_path, capsys):
        out_path = tmp_path / "result.json"
        main(["decompose", "--input", pair_file, "--json", "--output", str(out_path)])
        doc = json.loads(out_path.read_text())
        doc["P"][0][0] = "5/7"
        tampered = tmp_path / "tampered.json"
        tampered.write_text(json.dumps(doc))
        assert (
            main(["verify", "--input", pair_file, "--result", str(tampered)]) == 1
        )
        out = capsys.readouterr().out
        assert "FAIL" in out and "block diagonal" in out

    def test_hand_packaged_known_result_passes(self, tmp_path, capsys):
        # encode the known transform and outputs for the four-variable pair
        from conftest import FOURVAR_1, FOURVAR_2, FOURVAR_EPS, FOURVAR_P, mat
        from polydecomp import DecompositionNode, DecompositionResult, separate
        from polydecomp.cli import ProblemFile

        vars4 = ("x1", "x2", "x3", "x4")
        problem = ProblemFile(vars4, (FOURVAR_1, FOURVAR_2))
        path = tmp_path / "fourvar.txt"
        path.write_text("vars: " + " ".join(vars4) + "\n" + FOURVAR_1 + "\n" + FOURVAR_2 + "\n")
        polys = problem.parse()
        p = mat(FOURVAR_P)
        ranges = [(0, 1), (1, 2), (2, 4)]
        parts = separate(polys, p, ranges)
        children = []
        for b, (lo, hi) in enumerate(ranges):
            child_polys = tuple(parts[i][b] for i in range(2))
            children.append(
                DecompositionNode(
                    variable_indices=tuple(range(lo, hi)),
                    polys=child_polys,
                    children=(),
                    center_dim=center_basis(child_polys).dim,
                )
            )
        root = DecompositionNode(
            variable_indices=(0, 1, 2, 3),
            polys=tuple(polys),
            children=tuple(children),
            center_dim=3,
            idempotents=tuple(mat(rows) for rows in FOURVAR_EPS),
            transform=p,
        )
        result = DecompositionResult(P=p, tree=root, diagonalizable=False)
        doc = result_to_document(problem, center_basis(polys), result, None)
        result_path = tmp_path / "hand.json"
        result_path.write_text(json.dumps(doc))
        assert (
            main(["verify", "--input", str(path), "--result", str(result_path)]) == 0
        )
        assert "PASS" in capsys.readouterr().out


class TestGenerateCommand:
    def test_generate_and_decompose(self, tmp_path, capsys):
        out = tmp_path / "gen.txt"
        assert (
            main(
                [
                    "generate",
                    "--seed",
                    "7",
                    "--n",
                    "4",
                    "--m",
                    "2",
                    "--blocks",
                    "1,1,2",
                    "--max-degree",
                    "3",
                    "--output",
                    str(out),
                ]
            )
            == 0
        )
        capsys.readouterr()
        truth = json.loads((tmp_path / "gen.txt.truth.json").read_text())
        assert truth["planted_blocks"] == [1, 1, 2]
        assert main(["decompose", "--input", str(out)]) == 0

    def test_bad_blocks_exit_code(self, tmp_path):
        out = tmp_path / "gen.txt"
        code = main(
            [
                "generate",
                "--seed",
                "1",
                "--n",
                "4",
                "--m",
                "1",
                "--blocks",
                "3,3",
                "--output",
                str(out),
            ]
        )
        assert code == 2


class TestSerialization:
    def test_matrix_round_trip(self):
        from fractions import Fraction

        m = RatMatrix.from_rows([[Fraction(1, 3), -2], [0, Fraction(7, 2)]])
        assert matrix_from_json(matrix_to_json(m)) == m

    def test_document_round_trip(self, pair_file):
        from polydecomp import decompose_recursive

        problem = read_problem(pair_file)
        polys = problem.parse()
        result = decompose_recursive(polys, seed=42)
        doc = result_to_document(problem, center_basis(polys), result, 42)
        blob = json.dumps(doc)
        _, restored = result_from_document(json.loads(blob))
        doc2 = result_to_document(problem, center_basis(polys), restored, 42)
        assert json.dumps(doc2) == blob
