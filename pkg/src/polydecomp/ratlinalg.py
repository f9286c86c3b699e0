"""Exact linear algebra over the rationals.

Dense matrices with exact rational entries, sized for ambient dimensions in
the single digits.  Forward elimination runs fraction-free on gcd-normalized
integer rows; the reduced echelon form is produced by an exact backward pass,
so every result (ranks, nullspaces, inverses) is bit-reproducible.

The module also provides the univariate polynomial machinery (gcd, Bezout
cofactors, squarefree part, coprime splitting, minimal polynomials) that the
idempotent search uses to cut a matrix algebra into spectral pieces.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from ._rat import Rat, divide, normalize, rat_str, to_rat
from .errors import DimensionMismatch, SingularMatrix

Vector = tuple  # tuple[Rat, ...]; module-internal shorthand


class RatMatrix:
    """Immutable dense matrix of exact rationals, row-major."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, rows: int, cols: int, entries: Sequence):
        if rows < 1 or cols < 1:
            raise ValueError("matrix dimensions must be positive")
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self._e = tuple(to_rat(x) for x in entries)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, [1 if r == c else 0 for r in range(n) for c in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMatrix":
        r = len(rows)
        c = len(rows[0])
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return cls(r, c, [x for row in rows for x in row])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "RatMatrix":
        c = len(columns)
        r = len(columns[0])
        if any(len(col) != r for col in columns):
            raise ValueError("ragged columns")
        return cls(r, c, [columns[j][i] for i in range(r) for j in range(c)])

    def entry(self, r: int, c: int) -> Rat:
        return self._e[r * self.cols + c]

    def row(self, r: int) -> Vector:
        return self._e[r * self.cols : (r + 1) * self.cols]

    def column(self, c: int) -> Vector:
        return tuple(self._e[r * self.cols + c] for r in range(self.rows))

    def to_rows(self) -> list:
        return [list(self.row(r)) for r in range(self.rows)]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(
            self.cols,
            self.rows,
            [self._e[r * self.cols + c] for c in range(self.cols) for r in range(self.rows)],
        )

    def _check_same_shape(self, other: "RatMatrix") -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch(
                f"shape {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._check_same_shape(other)
        return RatMatrix(
            self.rows, self.cols, [a + b for a, b in zip(self._e, other._e)]
        )

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._check_same_shape(other)
        return RatMatrix(
            self.rows, self.cols, [a - b for a, b in zip(self._e, other._e)]
        )

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, [-a for a in self._e])

    def scale(self, c) -> "RatMatrix":
        c = to_rat(c)
        return RatMatrix(self.rows, self.cols, [c * a for a in self._e])

    def __mul__(self, other):
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise DimensionMismatch(
                    f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
                )
            out = []
            for r in range(self.rows):
                row = self.row(r)
                for c in range(other.cols):
                    acc = 0
                    for k in range(self.cols):
                        acc += row[k] * other._e[k * other.cols + c]
                    out.append(acc)
            return RatMatrix(self.rows, other.cols, out)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RatMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self._e == other._e
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return all(x == 0 for x in self._e)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == RatMatrix.identity(self.rows)

    def __repr__(self) -> str:
        body = "; ".join(
            " ".join(rat_str(x) for x in self.row(r)) for r in range(self.rows)
        )
        return f"RatMatrix({self.rows}x{self.cols}: {body})"


def vec(m: RatMatrix) -> Vector:
    """Row-major flattening of a matrix."""
    return m._e


def unvec(v: Sequence, rows: int, cols: int) -> RatMatrix:
    return RatMatrix(rows, cols, list(v))


# ---------------------------------------------------------------------------
# Elimination
# ---------------------------------------------------------------------------


def _primitive_int_row(row: Sequence) -> list:
    """Scale a rational row to a primitive integer row (zero stays zero)."""
    denom = 1
    for x in row:
        if isinstance(x, Fraction):
            denom = lcm(denom, x.denominator)
    ints = [int(x * denom) for x in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def signed_primitive_row(row: Sequence) -> Vector:
    """Primitive integer row with the first nonzero entry positive.

    Canonical form used to deduplicate equation rows exactly.
    """
    ints = _primitive_int_row(row)
    for v in ints:
        if v:
            if v < 0:
                ints = [-x for x in ints]
            break
    return tuple(ints)


def rref(m: RatMatrix) -> tuple[RatMatrix, tuple[int, ...]]:
    """Exact reduced row echelon form and the pivot column indices.

    Pivoting is deterministic: the first row with a nonzero entry in the
    current column.  Forward elimination is fraction-free on gcd-normalized
    integer rows; the backward pass normalizes pivots to 1 exactly.
    """
    nrows, ncols = m.rows, m.cols
    rows = [_primitive_int_row(m.row(r)) for r in range(nrows)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if rows[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, nrows):
            v = rows[i][c]
            if v:
                merged = [a * piv - b * v for a, b in zip(rows[i], rows[r])]
                g = 0
                for x in merged:
                    g = gcd(g, x)
                    if g == 1:
                        break
                rows[i] = [x // g for x in merged] if g > 1 else merged
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    # Backward pass in exact rational arithmetic.
    reduced = [[Fraction(x) for x in rows[i]] for i in range(len(pivots))]
    for i in reversed(range(len(pivots))):
        c = pivots[i]
        piv = reduced[i][c]
        reduced[i] = [x / piv for x in reduced[i]]
        for j in range(i):
            f = reduced[j][c]
            if f:
                reduced[j] = [a - f * b for a, b in zip(reduced[j], reduced[i])]
    out: list = []
    for i in range(nrows):
        if i < len(reduced):
            out.extend(normalize(x) for x in reduced[i])
        else:
            out.extend([0] * ncols)
    return RatMatrix(nrows, ncols, out), tuple(pivots)


def rank(m: RatMatrix) -> int:
    return len(rref(m)[1])


def nullspace_basis(m: RatMatrix) -> list[Vector]:
    """Canonical basis of the right kernel.

    One vector per free column, ordered by free-column index; the free
    coordinate is set to 1 and pivot coordinates are read off the reduced
    echelon form.
    """
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [0] * m.cols
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = normalize(-reduced.entry(i, f))
        basis.append(tuple(v))
    return basis


def column_space_basis(m: RatMatrix) -> list[Vector]:
    """Columns of ``m`` at the pivot positions of its echelon form."""
    _, pivots = rref(m)
    return [m.column(c) for c in pivots]


def invert(m: RatMatrix) -> RatMatrix:
    if m.rows != m.cols:
        raise DimensionMismatch("only square matrices can be inverted")
    n = m.rows
    aug = RatMatrix(
        n,
        2 * n,
        [
            m.entry(r, c) if c < n else (1 if c - n == r else 0)
            for r in range(n)
            for c in range(2 * n)
        ],
    )
    reduced, pivots = rref(aug)
    if pivots[:n] != tuple(range(n)):
        raise SingularMatrix(f"matrix has rank {sum(1 for p in pivots if p < n)} < {n}")
    return RatMatrix(
        n, n, [reduced.entry(r, n + c) for r in range(n) for c in range(n)]
    )


def solve(m: RatMatrix, rhs: Sequence) -> Vector | None:
    """One exact solution of ``m x = rhs`` (free variables 0), or None."""
    if len(rhs) != m.rows:
        raise DimensionMismatch("right-hand side length does not match rows")
    aug = RatMatrix(
        m.rows,
        m.cols + 1,
        [
            m.entry(r, c) if c < m.cols else rhs[r]
            for r in range(m.rows)
            for c in range(m.cols + 1)
        ],
    )
    reduced, pivots = rref(aug)
    if m.cols in pivots:
        return None
    x = [0] * m.cols
    for i, c in enumerate(pivots):
        x[c] = reduced.entry(i, m.cols)
    return tuple(x)


# ---------------------------------------------------------------------------
# Span utilities (vectors are tuples of scalars of a fixed width)
# ---------------------------------------------------------------------------


def row_space_basis(vectors: Iterable[Sequence], width: int) -> list[Vector]:
    """Canonical (reduced echelon) basis of the span of the given vectors."""
    vs = [tuple(v) for v in vectors]
    if not vs:
        return []
    reduced, pivots = rref(RatMatrix.from_rows(vs))
    return [reduced.row(i) for i in range(len(pivots))]


def span_rank(vectors: Iterable[Sequence], width: int) -> int:
    return len(row_space_basis(vectors, width))


def in_span(vectors: Sequence[Sequence], target: Sequence, width: int) -> bool:
    base = list(vectors)
    r = span_rank(base, width)
    return span_rank(base + [tuple(target)], width) == r


def same_span(a: Sequence[Sequence], b: Sequence[Sequence], width: int) -> bool:
    ra = span_rank(a, width)
    rb = span_rank(b, width)
    if ra != rb:
        return False
    return span_rank(list(a) + list(b), width) == ra


def span_intersection(
    a: Sequence[Sequence], b: Sequence[Sequence], width: int
) -> list[Vector]:
    """Canonical basis of span(a) intersected with span(b)."""
    a = [tuple(v) for v in a]
    b = [tuple(v) for v in b]
    if not a or not b:
        return []
    ka = len(a)
    cols = ka + len(b)
    stacked = RatMatrix(
        width,
        cols,
        [
            a[j][r] if j < ka else -b[j - ka][r]
            for r in range(width)
            for j in range(cols)
        ],
    )
    meet = []
    for coeffs in nullspace_basis(stacked):
        v = [0] * width
        for j in range(ka):
            cj = coeffs[j]
            if cj:
                for r in range(width):
                    v[r] += cj * a[j][r]
        meet.append(tuple(normalize(x) for x in v))
    return row_space_basis(meet, width)


# ---------------------------------------------------------------------------
# Univariate polynomials
# ---------------------------------------------------------------------------


class UniPoly:
    """Univariate polynomial, coefficients lowest degree first, no trailing zeros."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Sequence = ()):
        c = [to_rat(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def zero(cls) -> "UniPoly":
        return cls(())

    @classmethod
    def one(cls) -> "UniPoly":
        return cls((1,))

    @classmethod
    def shift(cls) -> "UniPoly":
        """The polynomial t."""
        return cls((0, 1))

    @classmethod
    def linear_root(cls, r) -> "UniPoly":
        """The monic linear polynomial t - r."""
        return cls((-to_rat(r), 1))

    def coefficients(self) -> tuple:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    @property
    def leading(self) -> Rat:
        if not self._c:
            raise ValueError("zero polynomial has no leading coefficient")
        return self._c[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self._c == other._c

    __hash__ = None

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = out[i] + x
        return UniPoly(out)

    def __neg__(self) -> "UniPoly":
        return UniPoly([-x for x in self._c])

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, UniPoly):
            if not self._c or not other._c:
                return UniPoly.zero()
            out = [0] * (len(self._c) + len(other._c) - 1)
            for i, x in enumerate(self._c):
                if x:
                    for j, y in enumerate(other._c):
                        if y:
                            out[i + j] += x * y
            return UniPoly(out)
        c = to_rat(other)
        return UniPoly([c * x for x in self._c])

    def __rmul__(self, other):
        return self * other

    def __pow__(self, e: int) -> "UniPoly":
        if e < 0:
            raise ValueError("negative power")
        result = UniPoly.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        lead = self.leading
        if lead == 1:
            return self
        return UniPoly([divide(x, lead) for x in self._c])

    def __divmod__(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._c)
        d = other.degree
        lead = other.leading
        q = [0] * max(0, len(rem) - d)
        for i in reversed(range(len(q))):
            top = rem[i + d]
            if top == 0:
                continue
            f = divide(top, lead)
            q[i] = f
            for j, y in enumerate(other._c):
                rem[i + j] = rem[i + j] - f * y
        return UniPoly(q), UniPoly(rem)

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[1]

    def derivative(self) -> "UniPoly":
        return UniPoly([i * self._c[i] for i in range(1, len(self._c))])

    def __call__(self, x: Rat) -> Rat:
        acc = 0
        for c in reversed(self._c):
            acc = acc * x + c
        return normalize(acc) if isinstance(acc, Fraction) else acc

    def of_matrix(self, m: RatMatrix) -> RatMatrix:
        """Evaluate at a square matrix (Horner)."""
        if m.rows != m.cols:
            raise DimensionMismatch("matrix evaluation needs a square matrix")
        n = m.rows
        acc = RatMatrix.zeros(n, n)
        ident = RatMatrix.identity(n)
        for c in reversed(self._c):
            acc = acc * m + ident.scale(c)
        return acc

    def __repr__(self) -> str:
        if self.is_zero():
            return "UniPoly(0)"
        parts = []
        for i in reversed(range(len(self._c))):
            c = self._c[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(rat_str(c))
            else:
                mono = "t" if i == 1 else f"t^{i}"
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{rat_str(c)}*{mono}")
        return "UniPoly(" + " + ".join(parts).replace("+ -", "- ") + ")"


def unipoly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic greatest common divisor (Euclid)."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def extended_gcd(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
    """Monic gcd g with cofactors (g, u, v) satisfying u*a + v*b = g."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials")
    r0, r1 = a, b
    s0, s1 = UniPoly.one(), UniPoly.zero()
    t0, t1 = UniPoly.zero(), UniPoly.one()
    while not r1.is_zero():
        q, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    lead = r0.leading
    if lead != 1:
        inv = divide(1, lead)
        r0, s0, t0 = r0 * inv, s0 * inv, t0 * inv
    return r0, s0, t0


def squarefree_part(m: UniPoly) -> UniPoly:
    """m divided by gcd(m, m'), made monic."""
    if m.degree < 1:
        raise ValueError("squarefree part needs degree >= 1")
    g = unipoly_gcd(m, m.derivative())
    return (m // g).monic()


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24 (fixed witness set)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """One nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"factorization failed for {n}")  # pragma: no cover


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    stack = [n]
    while stack:
        v = stack.pop()
        if v == 1:
            continue
        if _is_prime(v):
            out[v] = out.get(v, 0) + 1
            continue
        d = _pollard_rho(v)
        stack.append(d)
        stack.append(v // d)
    return out


def _divisors(v: int) -> list[int]:
    v = abs(v)
    if v == 0:
        return []
    divs = [1]
    for prime, exp in _factorize(v).items():
        divs = [d * prime**e for d in divs for e in range(exp + 1)]
    return sorted(divs)


def primitive_integer_matrix(m: RatMatrix) -> RatMatrix:
    """Positive rational rescaling of m with primitive integer entries.

    Rescaling preserves eigenspaces, so spectral projectors computed from
    the result apply to the original matrix.
    """
    row = _primitive_int_row(list(vec(m)))
    return RatMatrix(m.rows, m.cols, row)


def _int_horner(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def rational_roots(p: UniPoly) -> list[Rat]:
    """All rational roots, ascending, each listed once.

    Candidates come from the divisor sweep over the integer-scaled constant
    and leading coefficients.  Integer candidates (the only kind for monic
    inputs) are screened by the classic (1 - r) | p(1) and (1 + r) | p(-1)
    divisibility filters before an integer Horner evaluation.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has every root")
    roots: list[Rat] = []
    coeffs = list(p.coefficients())
    # Strip powers of t: root 0.
    shift = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        shift += 1
    if shift:
        roots.append(0)
    if len(coeffs) > 1:
        denom = 1
        for x in coeffs:
            if isinstance(x, Fraction):
                denom = lcm(denom, x.denominator)
        ints = [int(x * denom) for x in coeffs]
        g = 0
        for x in ints:
            g = gcd(g, x)
        ints = [x // g for x in ints]
        at_one = _int_horner(ints, 1)
        at_minus_one = _int_horner(ints, -1)
        if at_one == 0:
            roots.append(1)
        if at_minus_one == 0:
            roots.append(-1)
        lead_divs = _divisors(ints[-1])
        for p_num in _divisors(ints[0]):
            for r in (p_num, -p_num):
                if r in (1, -1):
                    continue
                if at_one % (1 - r) != 0 or at_minus_one % (1 + r) != 0:
                    continue
                if _int_horner(ints, r) == 0:
                    roots.append(r)
            for q_den in lead_divs:
                if q_den == 1 or gcd(p_num, q_den) != 1:
                    continue
                for cand in (Fraction(p_num, q_den), Fraction(-p_num, q_den)):
                    if UniPoly(ints)(cand) == 0:
                        roots.append(normalize(cand))
    return sorted(roots, key=Fraction)


def coprime_split(m: UniPoly) -> list[UniPoly]:
    """Pairwise-coprime monic factors of the squarefree part of ``m``.

    Every rational root becomes its own linear factor (ascending root
    order); whatever remains has no rational roots and is returned as a
    single trailing factor.  The factor product equals squarefree_part(m).
    """
    if m.degree < 1:
        raise ValueError("coprime split needs degree >= 1")
    s = squarefree_part(m)
    factors = [UniPoly.linear_root(r) for r in rational_roots(s)]
    residual = s
    for f in factors:
        residual = residual // f
    residual = residual.monic()
    if residual.degree >= 1:
        factors.append(residual)
    return factors


def primary_coprime_factors(m: UniPoly) -> list[UniPoly]:
    """Pairwise-coprime monic factors of ``m`` itself (multiplicities kept).

    Groups the full multiplicity of ``m`` over each coprime factor of its
    squarefree part, so the factor product is exactly ``m``.  A single
    returned factor means no rational spectral split exists.
    """
    m = m.monic()
    parts = coprime_split(m)
    if len(parts) == 1:
        return [m]
    out = []
    check = UniPoly.one()
    for s in parts:
        f = unipoly_gcd(m, s ** m.degree).monic()
        out.append(f)
        check = check * f
    assert check == m, "primary factor product must reproduce the input"
    return out


# ---------------------------------------------------------------------------
# Minimal polynomials
# ---------------------------------------------------------------------------


def minimal_polynomial(m: RatMatrix) -> UniPoly:
    """Least-degree monic annihilator, via the first Krylov dependency.

    Successive powers I, M, M^2, ... are flattened and tested for linear
    dependency; the first dependency gives the minimal polynomial exactly.
    """
    if m.rows != m.cols:
        raise DimensionMismatch("minimal polynomial needs a square matrix")
    n = m.rows
    d = n * n
    basis_vecs = [vec(RatMatrix.identity(n))]
    power = RatMatrix.identity(n)
    while True:
        power = power * m
        target = vec(power)
        k = len(basis_vecs)
        stacked = RatMatrix(
            d, k, [basis_vecs[j][r] for r in range(d) for j in range(k)]
        )
        sol = solve(stacked, target)
        if sol is not None:
            return UniPoly([-x for x in sol] + [1])
        basis_vecs.append(target)
        if k > d:  # unreachable; defensive bound
            raise AssertionError("Krylov sequence failed to close")
