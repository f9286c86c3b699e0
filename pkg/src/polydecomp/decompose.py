"""End-to-end simultaneous direct-sum decomposition.

Per node: compute the center of the node's polynomials, extract a complete
orthogonal idempotent set, build the change of variables whose columns are
bases of the idempotents' column spaces, substitute, route every monomial to
the unique variable block it touches, and recurse into each block with fresh
variables.  Recursion recomputes centers on sub-blocks rather than
restricting the parent center, which also recovers splits an unlucky random
draw missed at the parent level.

Constant terms are invisible to Hessians, so they are assigned to the first
(lowest-index) block by convention; linear terms follow their variable's
block.  With that convention the reconstruction identity
f_i(P*y) = sum of the leaf polynomials holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .center import center_basis
from .errors import (
    DimensionMismatch,
    EmptyInput,
    InternalInvariantViolation,
    MixedMonomial,
    SingularMatrix,
)
from .idempotent import IdempotentSet, find_idempotents, verify_complete
from .poly import Polynomial, embed, restrict_to, substitute_linear
from .ratlinalg import RatMatrix, column_space_basis, invert


@dataclass(frozen=True)
class DecompositionNode:
    """One variable block in the decomposition tree.

    ``variable_indices`` are the positions of this block's variables in the
    transformed coordinates (contiguous for pipeline output).  ``polys`` are
    the input polynomials restricted to the block, in block-local variables.
    Internal nodes carry the idempotent set and the local change of
    variables that produced their children; leaves carry neither.
    """

    variable_indices: tuple[int, ...]
    polys: tuple[Polynomial, ...]
    children: tuple["DecompositionNode", ...]
    center_dim: int
    idempotents: tuple[RatMatrix, ...] | None = None
    transform: RatMatrix | None = None

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def leaves(self) -> Iterator["DecompositionNode"]:
        if self.is_leaf:
            yield self
        else:
            for child in self.children:
                yield from child.leaves()


@dataclass(frozen=True)
class DecompositionResult:
    """Overall change of variables, the block tree, and the t = n flag."""

    P: RatMatrix
    tree: DecompositionNode
    diagonalizable: bool

    def leaf_block_sizes(self) -> tuple[int, ...]:
        return tuple(sorted(len(l.variable_indices) for l in self.tree.leaves()))


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def block_ranges(sizes: Sequence[int]) -> list[tuple[int, int]]:
    """Contiguous (start, stop) ranges for the given block sizes."""
    ranges = []
    start = 0
    for s in sizes:
        ranges.append((start, start + s))
        start += s
    return ranges


def block_diagonal(blocks: Sequence[RatMatrix]) -> RatMatrix:
    n = sum(b.rows for b in blocks)
    entries = [0] * (n * n)
    offset = 0
    for b in blocks:
        for r in range(b.rows):
            for c in range(b.cols):
                entries[(offset + r) * n + (offset + c)] = b.entry(r, c)
        offset += b.rows
    return RatMatrix(n, n, entries)


def change_of_variables(idem: IdempotentSet) -> RatMatrix:
    """Invertible P whose columns are column-space bases of each idempotent.

    Conjugation by P sends the j-th idempotent to the 0/1 diagonal matrix
    supported on the j-th contiguous block; both properties are verified
    exactly before returning.
    """
    n = idem.n
    columns = []
    sizes = []
    for e in idem.eps:
        cols = column_space_basis(e)
        sizes.append(len(cols))
        columns.extend(cols)
    if len(columns) != n:
        raise InternalInvariantViolation(
            f"idempotent column spaces total {len(columns)} columns, expected {n}"
        )
    p = RatMatrix.from_columns(columns)
    try:
        p_inv = invert(p)
    except SingularMatrix as exc:
        raise InternalInvariantViolation(
            "idempotent column spaces do not form a basis"
        ) from exc
    for (start, stop), e in zip(block_ranges(sizes), idem.eps):
        expected = RatMatrix(
            n,
            n,
            [
                1 if (r == c and start <= r < stop) else 0
                for r in range(n)
                for c in range(n)
            ],
        )
        if p_inv * e * p != expected:
            raise InternalInvariantViolation(
                "conjugated idempotent is not the expected diagonal block"
            )
    return p


def diagonal_idempotent_supports(
    p: RatMatrix, idems: Sequence[RatMatrix]
) -> list[tuple[int, ...]] | None:
    """Index supports of P^-1 e P when every conjugate is diagonal 0/1.

    Accepts non-contiguous supports; returns None if any conjugate is not a
    0/1 diagonal matrix or the supports fail to partition the coordinates.
    """
    n = p.rows
    try:
        p_inv = invert(p)
    except SingularMatrix:
        return None
    supports = []
    seen: set[int] = set()
    for e in idems:
        conj = p_inv * e * p
        support = []
        for r in range(n):
            for c in range(n):
                v = conj.entry(r, c)
                if r == c:
                    if v == 1:
                        support.append(r)
                    elif v != 0:
                        return None
                elif v != 0:
                    return None
        if seen.intersection(support):
            return None
        seen.update(support)
        supports.append(tuple(support))
    if len(seen) != n:
        return None
    return supports


def separate(
    polys: Sequence[Polynomial],
    p: RatMatrix,
    blocks: Sequence[tuple[int, int]],
) -> list[list[Polynomial]]:
    """Substitute x = P*y and split each result by variable block.

    Returns one list per input polynomial with one block-local polynomial
    per block.  Every monomial of degree >= 2 must fall inside a single
    block (MixedMonomial otherwise, which a verified idempotent set rules
    out); constants go to the first block.
    """
    if not polys:
        return []
    n = polys[0].n
    ranges = list(blocks)
    covered = [i for start, stop in ranges for i in range(start, stop)]
    if covered != list(range(n)):
        raise ValueError("blocks must be contiguous and partition the coordinates")
    position_block = [0] * n
    for b, (start, stop) in enumerate(ranges):
        for i in range(start, stop):
            position_block[i] = b
    out: list[list[Polynomial]] = []
    for f in polys:
        g = substitute_linear(f, p)
        buckets: list[dict] = [{} for _ in ranges]
        for mono, coeff in g._terms.items():
            touched = {position_block[i] for i, e in enumerate(mono) if e}
            if not touched:
                b = 0  # constant term convention: first block
            elif len(touched) == 1:
                b = touched.pop()
            else:
                raise MixedMonomial(
                    f"monomial {mono} spans blocks {sorted(touched)}"
                )
            buckets[b][mono] = coeff
        pieces = []
        for (start, stop), bucket in zip(ranges, buckets):
            piece = Polynomial._raw(n, bucket)
            pieces.append(restrict_to(piece, range(start, stop)))
        out.append(pieces)
    return out


def decompose_recursive(
    polys: Sequence[Polynomial], seed: int = 42, max_tries: int = 8
) -> DecompositionResult:
    """Full recursive pipeline; deterministic in ``seed``.

    Terminates because block sizes strictly decrease.  The returned P is the
    product of level-wise block-embedded transforms, and substituting it
    into the inputs reproduces the leaf polynomials exactly.
    """
    polys = tuple(polys)
    if not polys:
        raise EmptyInput("at least one polynomial is required")
    n = polys[0].n
    if any(p.n != n for p in polys):
        raise DimensionMismatch("polynomials have mixed ambient dimensions")
    node_counter = [0]

    def rec(
        fs: tuple[Polynomial, ...], indices: tuple[int, ...]
    ) -> tuple[DecompositionNode, RatMatrix]:
        k = fs[0].n
        node_seed = seed * 1_000_003 + node_counter[0]
        node_counter[0] += 1
        z = center_basis(fs)
        if k == 1:
            return (
                DecompositionNode(indices, fs, (), z.dim),
                RatMatrix.identity(1),
            )
        idem = find_idempotents(z, node_seed, max_tries)
        if len(idem) == 1:
            return (
                DecompositionNode(indices, fs, (), z.dim),
                RatMatrix.identity(k),
            )
        if not verify_complete(idem, fs):
            raise InternalInvariantViolation(
                "idempotent set failed verification against its polynomials"
            )
        p_node = change_of_variables(idem)
        sizes = [len(column_space_basis(e)) for e in idem.eps]
        ranges = block_ranges(sizes)
        parts = separate(fs, p_node, ranges)
        children = []
        child_transforms = []
        for b, (start, stop) in enumerate(ranges):
            child_fs = tuple(parts[i][b] for i in range(len(fs)))
            child_indices = indices[start:stop]
            child, child_p = rec(child_fs, child_indices)
            children.append(child)
            child_transforms.append(child_p)
        total = p_node * block_diagonal(child_transforms)
        node = DecompositionNode(
            indices, fs, tuple(children), z.dim, idem.eps, p_node
        )
        return node, total

    root, p_total = rec(polys, tuple(range(n)))
    diagonalizable = all(len(l.variable_indices) == 1 for l in root.leaves())
    return DecompositionResult(P=p_total, tree=root, diagonalizable=diagonalizable)


def _verify_node(
    node: DecompositionNode, reason_prefix: str
) -> VerificationReport:
    k = len(node.variable_indices)
    if len(node.polys) == 0:
        return VerificationReport(False, f"{reason_prefix}: node has no polynomials")
    if any(f.n != k for f in node.polys):
        return VerificationReport(
            False, f"{reason_prefix}: polynomial ambient dimension mismatch"
        )
    if node.is_leaf:
        return VerificationReport(True)
    child_indices = [i for child in node.children for i in child.variable_indices]
    if list(node.variable_indices) != child_indices:
        return VerificationReport(
            False, f"{reason_prefix}: children do not partition the variables"
        )
    if node.idempotents is None or node.transform is None:
        return VerificationReport(
            False, f"{reason_prefix}: missing splitting witnesses"
        )
    idem = IdempotentSet(k, tuple(node.idempotents))
    if not verify_complete(idem, node.polys):
        return VerificationReport(
            False, f"{reason_prefix}: idempotent identities fail"
        )
    sizes = [len(child.variable_indices) for child in node.children]
    ranges = block_ranges(sizes)
    supports = diagonal_idempotent_supports(node.transform, node.idempotents)
    if supports is None or [
        tuple(range(start, stop)) for start, stop in ranges
    ] != supports:
        return VerificationReport(
            False, f"{reason_prefix}: conjugated idempotent not block diagonal"
        )
    try:
        parts = separate(node.polys, node.transform, ranges)
    except MixedMonomial:
        return VerificationReport(
            False, f"{reason_prefix}: separation produced a mixed monomial"
        )
    for b, child in enumerate(node.children):
        expected = tuple(parts[i][b] for i in range(len(node.polys)))
        if expected != tuple(child.polys):
            return VerificationReport(
                False, f"{reason_prefix}: child polynomials do not match separation"
            )
        sub = _verify_node(child, f"{reason_prefix}.{b}")
        if not sub.ok:
            return sub
    return VerificationReport(True)


def verify_decomposition(
    polys: Sequence[Polynomial], result: DecompositionResult
) -> VerificationReport:
    """Independent end-to-end certificate check, recomputed from scratch.

    Verifies the change of variables is invertible, the top-level conjugated
    idempotents are the expected diagonal blocks, every node's idempotent
    identities and separation are reproducible, the leaf polynomials sum
    back to f_i(P*y) exactly, and the diagonalizable flag matches the tree.
    """
    polys = tuple(polys)
    if not polys:
        return VerificationReport(False, "no input polynomials")
    n = polys[0].n
    root = result.tree
    if tuple(root.polys) != polys:
        return VerificationReport(False, "root polynomials do not match inputs")
    if tuple(root.variable_indices) != tuple(range(n)):
        return VerificationReport(False, "root variable indices malformed")
    if result.P.rows != n or result.P.cols != n:
        return VerificationReport(False, "change of variables has wrong shape")
    try:
        invert(result.P)
    except SingularMatrix:
        return VerificationReport(False, "change of variables is singular")
    if not root.is_leaf:
        if root.idempotents is None:
            return VerificationReport(False, "root is missing splitting witnesses")
        supports = diagonal_idempotent_supports(result.P, root.idempotents)
        expected = [tuple(child.variable_indices) for child in root.children]
        if supports is None or supports != expected:
            return VerificationReport(
                False, "conjugated idempotent not block diagonal"
            )
    node_report = _verify_node(root, "root")
    if not node_report.ok:
        return node_report
    transformed = [substitute_linear(f, result.P) for f in polys]
    for i, g in enumerate(transformed):
        total = Polynomial.zero(n)
        for leaf in root.leaves():
            total = total + embed(leaf.polys[i], leaf.variable_indices, n)
        if total != g:
            return VerificationReport(
                False, f"reconstruction mismatch for polynomial {i}"
            )
    if result.diagonalizable != all(
        len(l.variable_indices) == 1 for l in root.leaves()
    ):
        return VerificationReport(False, "diagonalizable flag inconsistent")
    return VerificationReport(True)
