"""Command-line interface.

Problem files are plain text: a ``vars:`` line naming the variables, then one
polynomial per nonempty line; ``#`` starts a comment.  Results are emitted as
human-readable text or as a versioned JSON document whose matrices are
row-major arrays of exact ``a/b`` strings, so serialization is lossless.

Exit codes: 0 success (decomposable or not -- that is data), 1 failed
verification verdict, 2 bad input or parse error, 3 internal invariant
violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._rat import rat_str
from .center import CenterBasis, center_basis
from .decompose import (
    DecompositionNode,
    DecompositionResult,
    decompose_recursive,
    verify_decomposition,
)
from .errors import InternalInvariantViolation, ParseError, PolyDecompError
from .instancegen import generate
from .poly import Polynomial, parse_polynomial, render_canonical, validate_variable_names
from .ratlinalg import RatMatrix, invert

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ProblemFile:
    vars: tuple[str, ...]
    sources: tuple[str, ...]

    def parse(self) -> list[Polynomial]:
        return [parse_polynomial(s, self.vars) for s in self.sources]


def read_problem(path: str) -> ProblemFile:
    with open(path, "r", encoding="utf-8") as fh:
        raw_lines = fh.read().splitlines()
    vars_line = None
    sources = []
    for line in raw_lines:
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if vars_line is None:
            if not line.startswith("vars:"):
                raise ParseError("first content line must start with 'vars:'", 0)
            vars_line = line[len("vars:") :].split()
            validate_variable_names(vars_line)
            continue
        sources.append(line)
    if vars_line is None:
        raise ParseError("problem file has no 'vars:' line", 0)
    if not sources:
        raise ParseError("problem file has no polynomials", 0)
    return ProblemFile(tuple(vars_line), tuple(sources))


def write_problem(path: str, vars: Sequence[str], sources: Sequence[str]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("vars: " + " ".join(vars) + "\n")
        for s in sources:
            fh.write(s + "\n")


# ---------------------------------------------------------------------------
# JSON encoding (matrices as row-major arrays of exact strings)
# ---------------------------------------------------------------------------


def matrix_to_json(m: RatMatrix) -> list[list[str]]:
    return [[rat_str(m.entry(r, c)) for c in range(m.cols)] for r in range(m.rows)]


def matrix_from_json(rows: list[list[str]]) -> RatMatrix:
    return RatMatrix.from_rows([[Fraction(x) for x in row] for row in rows])


def _node_var_names(node_indices: Sequence[int], root_vars: Sequence[str], is_root: bool):
    if is_root:
        return list(root_vars)
    return [f"y{i + 1}" for i in node_indices]


def _node_to_json(node: DecompositionNode, root_vars, is_root: bool = False) -> dict:
    names = _node_var_names(node.variable_indices, root_vars, is_root)
    return {
        "indices": list(node.variable_indices),
        "center_dim": node.center_dim,
        "polys": [render_canonical(p, names) for p in node.polys],
        "idempotents": None
        if node.idempotents is None
        else [matrix_to_json(e) for e in node.idempotents],
        "transform": None
        if node.transform is None
        else matrix_to_json(node.transform),
        "children": [_node_to_json(c, root_vars) for c in node.children],
    }


def _node_from_json(data: dict, root_vars, is_root: bool = False) -> DecompositionNode:
    indices = tuple(int(i) for i in data["indices"])
    names = _node_var_names(indices, root_vars, is_root)
    polys = tuple(parse_polynomial(s, names) for s in data["polys"])
    idems = data.get("idempotents")
    transform = data.get("transform")
    return DecompositionNode(
        variable_indices=indices,
        polys=polys,
        children=tuple(
            _node_from_json(c, root_vars) for c in data.get("children", [])
        ),
        center_dim=int(data["center_dim"]),
        idempotents=None
        if idems is None
        else tuple(matrix_from_json(e) for e in idems),
        transform=None if transform is None else matrix_from_json(transform),
    )


def result_to_document(
    problem: ProblemFile,
    center: CenterBasis,
    result: DecompositionResult | None,
    seed: int | None,
) -> dict:
    doc = {
        "version": SCHEMA_VERSION,
        "vars": list(problem.vars),
        "inputs": list(problem.sources),
        "seed": seed,
        "center_dim": center.dim,
        "center_basis": [matrix_to_json(b) for b in center.basis],
        "idempotents": None,
        "P": None,
        "P_inverse": None,
        "diagonalizable": None,
        "tree": None,
    }
    if result is not None:
        doc["idempotents"] = (
            None
            if result.tree.idempotents is None
            else [matrix_to_json(e) for e in result.tree.idempotents]
        )
        doc["P"] = matrix_to_json(result.P)
        doc["P_inverse"] = matrix_to_json(invert(result.P))
        doc["diagonalizable"] = result.diagonalizable
        doc["tree"] = _node_to_json(result.tree, problem.vars, is_root=True)
    return doc


def result_from_document(doc: dict) -> tuple[ProblemFile, DecompositionResult]:
    problem = ProblemFile(tuple(doc["vars"]), tuple(doc["inputs"]))
    if doc.get("tree") is None or doc.get("P") is None:
        raise ValueError("document does not contain a decomposition result")
    tree = _node_from_json(doc["tree"], problem.vars, is_root=True)
    return problem, DecompositionResult(
        P=matrix_from_json(doc["P"]),
        tree=tree,
        diagonalizable=bool(doc["diagonalizable"]),
    )


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _format_matrix(m: RatMatrix, indent: str = "  ") -> str:
    cells = [[rat_str(m.entry(r, c)) for c in range(m.cols)] for r in range(m.rows)]
    width = max(len(x) for row in cells for x in row)
    return "\n".join(
        indent + "[ " + "  ".join(x.rjust(width) for x in row) + " ]" for row in cells
    )


def cmd_center(args) -> int:
    problem = read_problem(args.input)
    polys = problem.parse()
    center = center_basis(polys)
    if args.json:
        doc = {
            "version": SCHEMA_VERSION,
            "vars": list(problem.vars),
            "inputs": list(problem.sources),
            "center_dim": center.dim,
            "center_basis": [matrix_to_json(b) for b in center.basis],
        }
        _emit(json.dumps(doc, indent=2), args.output)
    else:
        lines = [f"center dimension: {center.dim}"]
        for i, b in enumerate(center.basis):
            lines.append(f"basis element {i + 1}:")
            lines.append(_format_matrix(b))
        _emit("\n".join(lines), args.output)
    return 0


def _decomposition_text(problem: ProblemFile, result: DecompositionResult) -> str:
    root = result.tree
    lines = [f"center dimension: {root.center_dim}"]
    leaves = list(root.leaves())
    if len(leaves) == 1:
        if root.center_dim == 1:
            lines.append("indecomposable (center is scalar)")
        else:
            lines.append(
                f"no decomposition found (center dimension {root.center_dim}, "
                "no nontrivial idempotent located)"
            )
        return "\n".join(lines)
    lines.append("change of variables x = P*y, P =")
    lines.append(_format_matrix(result.P))
    blocks = " ".join(
        "{" + ", ".join(f"y{i + 1}" for i in leaf.variable_indices) + "}"
        for leaf in leaves
    )
    lines.append(f"variable blocks: {blocks}")
    for i in range(len(root.polys)):
        parts = []
        for leaf in leaves:
            names = [f"y{j + 1}" for j in leaf.variable_indices]
            parts.append("(" + render_canonical(leaf.polys[i], names) + ")")
        lines.append(f"f{i + 1}(P*y) = " + " + ".join(parts))
    lines.append(f"diagonalizable: {'yes' if result.diagonalizable else 'no'}")
    return "\n".join(lines)


def cmd_decompose(args) -> int:
    problem = read_problem(args.input)
    polys = problem.parse()
    center = center_basis(polys)
    result = decompose_recursive(polys, seed=args.seed, max_tries=args.max_tries)
    report = verify_decomposition(polys, result)
    if not report.ok:
        raise InternalInvariantViolation(
            f"self-verification failed: {report.reason}"
        )
    if args.json:
        doc = result_to_document(problem, center, result, args.seed)
        _emit(json.dumps(doc, indent=2), args.output)
    else:
        _emit(_decomposition_text(problem, result), args.output)
    return 0


def cmd_verify(args) -> int:
    problem = read_problem(args.input)
    polys = problem.parse()
    with open(args.result, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    stored_problem, result = result_from_document(doc)
    if stored_problem.vars != problem.vars:
        print("FAIL: variable names differ from the problem file")
        return 1
    report = verify_decomposition(polys, result)
    if report.ok:
        print("PASS: decomposition verified")
        return 0
    print(f"FAIL: {report.reason}")
    return 1


def cmd_generate(args) -> int:
    blocks = [int(b) for b in args.blocks.split(",") if b]
    instance = generate(args.seed, args.n, args.m, blocks, args.max_degree)
    names = [f"x{i + 1}" for i in range(args.n)]
    sources = [render_canonical(f, names) for f in instance.fs]
    write_problem(args.output, names, sources)
    truth = {
        "version": SCHEMA_VERSION,
        "seed": instance.seed,
        "n": args.n,
        "m": args.m,
        "planted_blocks": list(instance.planted_blocks),
        "mixing_matrix": matrix_to_json(instance.Q),
        "unmixed": [render_canonical(h, names) for h in instance.unmixed],
    }
    with open(args.output + ".truth.json", "w", encoding="utf-8") as fh:
        json.dump(truth, fh, indent=2)
    print(f"wrote {args.output} and {args.output}.truth.json")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polydecomp",
        description="Simultaneous direct-sum decomposition of polynomial sets "
        "over the rationals (exact arithmetic).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_center = sub.add_parser("center", help="compute the center algebra basis")
    p_center.add_argument("--input", required=True, help="problem file path")
    p_center.add_argument("--json", action="store_true", help="emit JSON")
    p_center.add_argument("--output", help="write to file instead of stdout")
    p_center.set_defaults(func=cmd_center)

    p_dec = sub.add_parser("decompose", help="run the full decomposition pipeline")
    p_dec.add_argument("--input", required=True, help="problem file path")
    p_dec.add_argument("--seed", type=int, default=42)
    p_dec.add_argument("--max-tries", type=int, default=8)
    group = p_dec.add_mutually_exclusive_group()
    group.add_argument("--json", action="store_true", help="emit JSON")
    group.add_argument("--text", action="store_true", help="emit text (default)")
    p_dec.add_argument("--output", help="write to file instead of stdout")
    p_dec.set_defaults(func=cmd_decompose)

    p_ver = sub.add_parser("verify", help="re-check a serialized result")
    p_ver.add_argument("--input", required=True, help="problem file path")
    p_ver.add_argument("--result", required=True, help="result JSON path")
    p_ver.set_defaults(func=cmd_verify)

    p_gen = sub.add_parser("generate", help="generate a planted instance")
    p_gen.add_argument("--seed", type=int, default=42)
    p_gen.add_argument("--n", type=int, required=True, help="variable count")
    p_gen.add_argument("--m", type=int, required=True, help="polynomial count")
    p_gen.add_argument(
        "--blocks", required=True, help="comma-separated block sizes summing to n"
    )
    p_gen.add_argument("--max-degree", type=int, default=3)
    p_gen.add_argument("--output", required=True, help="problem file to write")
    p_gen.set_defaults(func=cmd_generate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InternalInvariantViolation as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 3
    except (PolyDecompError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
