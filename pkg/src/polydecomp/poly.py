"""Exact multivariate polynomial arithmetic over the rationals.

A polynomial in ``n`` variables maps exponent tuples of length ``n`` to
nonzero rational coefficients.  Coefficients are plain ``int`` when integral
and ``fractions.Fraction`` otherwise, so arithmetic is exact and equality
tests are reliable.  The module also provides the text surface (parser and
canonical renderer), formal differentiation, Hessian matrices, and linear
changes of variables.

Term iteration exposed to callers is always graded-lexicographic: higher
total degree first, ties broken by the exponent vector with the first
variable most significant.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ._rat import Rat, normalize, rat_str, to_rat
from .errors import DimensionMismatch, ParseError
from .ratlinalg import RatMatrix

Monomial = tuple  # tuple[int, ...], one exponent per variable

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def grlex_key(mono: Monomial) -> tuple:
    """Sort key: ascending order under this key is graded-lex descending."""
    return (-sum(mono), tuple(-e for e in mono))


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping | Iterable | None = None):
        if n < 1:
            raise ValueError("ambient dimension must be >= 1")
        clean: dict = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for mono, coeff in items:
                mono = tuple(int(e) for e in mono)
                if len(mono) != n:
                    raise DimensionMismatch(
                        f"monomial length {len(mono)} != ambient dimension {n}"
                    )
                if any(e < 0 for e in mono):
                    raise ValueError("negative exponent")
                c = clean.get(mono, 0) + to_rat(coeff)
                if c:
                    clean[mono] = normalize(c) if isinstance(c, Fraction) else c
                else:
                    clean.pop(mono, None)
        self.n = n
        self._terms = clean

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "Polynomial":
        """Internal constructor; ``terms`` must already be clean."""
        p = object.__new__(cls)
        p.n = n
        p._terms = terms
        return p

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n: int, value) -> "Polynomial":
        c = to_rat(value)
        return cls._raw(n, {(0,) * n: c} if c else {})

    @classmethod
    def variable(cls, n: int, index: int) -> "Polynomial":
        if not 0 <= index < n:
            raise IndexError(f"variable index {index} out of range for n={n}")
        mono = tuple(1 if i == index else 0 for i in range(n))
        return cls._raw(n, {mono: 1})

    def terms(self) -> list[tuple[Monomial, Rat]]:
        """Terms in graded-lexicographic order."""
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]))

    def coefficient(self, mono: Sequence[int]) -> Rat:
        return self._terms.get(tuple(mono), 0)

    def num_terms(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def total_degree(self) -> int:
        """Largest monomial degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(m) for m in self._terms)

    def constant_term(self) -> Rat:
        return self._terms.get((0,) * self.n, 0)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.n == other.n
            and self._terms == other._terms
        )

    __hash__ = None

    def _check_dim(self, other: "Polynomial") -> None:
        if self.n != other.n:
            raise DimensionMismatch(f"ambient dimensions differ: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.n, other)
        self._check_dim(other)
        out = dict(self._terms)
        for mono, c in other._terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = normalize(s) if isinstance(s, Fraction) else s
            else:
                out.pop(mono, None)
        return Polynomial._raw(self.n, out)

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return Polynomial._raw(self.n, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = to_rat(c)
        if not c:
            return Polynomial.zero(self.n)
        return Polynomial._raw(
            self.n, {m: normalize(c * v) for m, v in self._terms.items()}
        )

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check_dim(other)
        if not self._terms or not other._terms:
            return Polynomial.zero(self.n)
        out: dict = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                mono = tuple(x + y for x, y in zip(ma, mb))
                s = out.get(mono, 0) + ca * cb
                if s:
                    out[mono] = s
                else:
                    out.pop(mono, None)
        return Polynomial._raw(
            self.n, {m: normalize(c) for m, c in out.items()}
        )

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.n, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def partial_derivative(self, index: int) -> "Polynomial":
        if not 0 <= index < self.n:
            raise IndexError(f"variable index {index} out of range for n={self.n}")
        out: dict = {}
        for mono, c in self._terms.items():
            e = mono[index]
            if e:
                lowered = mono[:index] + (e - 1,) + mono[index + 1 :]
                out[lowered] = c * e
        return Polynomial._raw(self.n, out)

    def __repr__(self) -> str:
        names = [f"x{i}" for i in range(self.n)]
        return f"Polynomial({self.n}: {render_canonical(self, names)})"


def partial_derivative(p: Polynomial, index: int) -> Polynomial:
    return p.partial_derivative(index)


# ---------------------------------------------------------------------------
# Parsing and rendering
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[+\-*/^])"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    return tokens


def validate_variable_names(names: Sequence[str]) -> list[str]:
    names = list(names)
    if not names:
        raise ValueError("at least one variable name is required")
    if len(set(names)) != len(names):
        raise ValueError("variable names must be distinct")
    for name in names:
        if not _NAME_RE.match(name):
            raise ValueError(f"invalid variable name {name!r}")
    return names


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse polynomial text over the given ordered variable names.

    Grammar: terms joined by '+'/'-'; a term is '*'-separated factors, each
    an integer, an 'a/b' rational, or a variable with an optional '^exp'
    where exp is a non-negative integer literal.  An omitted coefficient
    means 1 and an omitted exponent means 1; whitespace is insignificant.
    """
    names = validate_variable_names(variables)
    index = {name: i for i, name in enumerate(names)}
    n = len(names)
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial text", 0)
    k = 0

    def peek():
        return tokens[k] if k < len(tokens) else (None, None, len(text))

    def parse_factor(coeff: Rat, exps: list[int]) -> Rat:
        nonlocal k
        kind, value, pos = peek()
        if kind == "int":
            k += 1
            num = int(value)
            nkind, nvalue, npos = peek()
            if nkind == "op" and nvalue == "/":
                k += 1
                dkind, dvalue, dpos = peek()
                if dkind != "int":
                    raise ParseError("expected integer denominator", dpos)
                k += 1
                den = int(dvalue)
                if den == 0:
                    raise ParseError("zero denominator", dpos)
                return normalize(coeff * Fraction(num, den))
            if nkind == "op" and nvalue == "^":
                raise ParseError("exponents apply to variables, not coefficients", npos)
            return coeff * num
        if kind == "name":
            k += 1
            if value not in index:
                raise ParseError(f"unknown variable {value!r}", pos)
            exp = 1
            nkind, nvalue, npos = peek()
            if nkind == "op" and nvalue == "^":
                k += 1
                ekind, evalue, epos = peek()
                if ekind != "int":
                    raise ParseError(
                        "exponent must be a non-negative integer literal", epos
                    )
                k += 1
                exp = int(evalue)
            exps[index[value]] += exp
            return coeff
        raise ParseError("expected a coefficient or variable", pos)

    terms: dict = {}
    sign = 1
    kind, value, _ = peek()
    if kind == "op" and value in "+-":
        sign = -1 if value == "-" else 1
        k += 1
    while True:
        coeff: Rat = sign
        exps = [0] * n
        coeff = parse_factor(coeff, exps)
        while True:
            kind, value, pos = peek()
            if kind == "op" and value == "*":
                k += 1
                coeff = parse_factor(coeff, exps)
            else:
                break
        mono = tuple(exps)
        s = terms.get(mono, 0) + coeff
        if s:
            terms[mono] = normalize(s) if isinstance(s, Fraction) else s
        else:
            terms.pop(mono, None)
        kind, value, pos = peek()
        if kind is None:
            break
        if kind == "op" and value in "+-":
            sign = -1 if value == "-" else 1
            k += 1
            continue
        raise ParseError("expected '+' or '-' between terms", pos)
    return Polynomial._raw(n, terms)


def render_canonical(p: Polynomial, variables: Sequence[str]) -> str:
    """Deterministic text form: graded-lex term order, lowest-terms coefficients."""
    names = validate_variable_names(variables)
    if len(names) != p.n:
        raise DimensionMismatch(
            f"{len(names)} variable names for ambient dimension {p.n}"
        )
    if p.is_zero():
        return "0"
    pieces = []
    for i, (mono, coeff) in enumerate(p.terms()):
        negative = coeff < 0
        mag = -coeff if negative else coeff
        factors = []
        for name, e in zip(names, mono):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if not factors:
            body = rat_str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([rat_str(mag)] + factors)
        if i == 0:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(pieces)


# ---------------------------------------------------------------------------
# Matrices of polynomials
# ---------------------------------------------------------------------------


class PolyMatrix:
    """Immutable matrix with Polynomial entries, row-major."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[Polynomial]):
        if rows < 1 or cols < 1:
            raise ValueError("matrix dimensions must be positive")
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        ambient = entries[0].n
        if any(e.n != ambient for e in entries):
            raise DimensionMismatch("entries have mixed ambient dimensions")
        self.rows = rows
        self.cols = cols
        self._entries = tuple(entries)

    @property
    def ambient_dim(self) -> int:
        return self._entries[0].n

    def entry(self, r: int, c: int) -> Polynomial:
        return self._entries[r * self.cols + c]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(
            self.cols,
            self.rows,
            [self.entry(r, c) for c in range(self.cols) for r in range(self.rows)],
        )

    def is_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(
            self.entry(r, c) == self.entry(c, r)
            for r in range(self.rows)
            for c in range(r + 1, self.cols)
        )

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self._entries)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self._entries == other._entries
        )

    __hash__ = None

    def times_matrix(self, m: RatMatrix) -> "PolyMatrix":
        """Right-multiply by a rational matrix."""
        if self.cols != m.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.rows}x{self.cols} by {m.rows}x{m.cols}"
            )
        out = []
        for r in range(self.rows):
            for c in range(m.cols):
                acc = Polynomial.zero(self.ambient_dim)
                for k in range(self.cols):
                    coeff = m.entry(k, c)
                    if coeff:
                        acc = acc + self.entry(r, k).scale(coeff)
                out.append(acc)
        return PolyMatrix(self.rows, m.cols, out)


def hessian(p: Polynomial) -> PolyMatrix:
    """Symmetric matrix of second partial derivatives."""
    n = p.n
    firsts = [p.partial_derivative(i) for i in range(n)]
    entries = [
        firsts[r].partial_derivative(c) for r in range(n) for c in range(n)
    ]
    return PolyMatrix(n, n, entries)


def substitute_linear(p: Polynomial, m: RatMatrix) -> Polynomial:
    """Expand p(M y): each old variable i becomes the linear form row i of M.

    Each row is factored as (1/d_i) times an integer form, so the power
    cache runs on fast integer arithmetic; the rational factor is applied
    once per input monomial.
    """
    if m.rows != p.n or m.cols != p.n:
        raise DimensionMismatch(
            f"substitution matrix is {m.rows}x{m.cols}, ambient dimension is {p.n}"
        )
    n = p.n
    from math import lcm

    dens = []
    int_forms = []
    for i in range(n):
        row = [m.entry(i, j) for j in range(n)]
        d = 1
        for x in row:
            if isinstance(x, Fraction):
                d = lcm(d, x.denominator)
        dens.append(d)
        terms = {}
        for j, x in enumerate(row):
            v = int(x * d)
            if v:
                terms[tuple(1 if t == j else 0 for t in range(n))] = v
        int_forms.append(Polynomial._raw(n, terms))
    powers: list[dict[int, Polynomial]] = [
        {0: Polynomial.constant(n, 1), 1: int_forms[i]} for i in range(n)
    ]

    def power_of(i: int, e: int) -> Polynomial:
        cache = powers[i]
        if e not in cache:
            top = max(cache)
            acc = cache[top]
            for step in range(top + 1, e + 1):
                acc = acc * int_forms[i]
                cache[step] = acc
        return cache[e]

    # Integer numerators are accumulated per denominator class so the inner
    # loop stays on native ints; classes are merged exactly at the end.
    by_den: dict[int, dict] = {}
    zero_mono = (0,) * n
    for mono, c in p._terms.items():
        if isinstance(c, Fraction):
            num_c, den_c = c.numerator, c.denominator
        else:
            num_c, den_c = c, 1
        denom = den_c
        term = None
        for i, e in enumerate(mono):
            if e:
                if dens[i] != 1:
                    denom *= dens[i] ** e
                pw = power_of(i, e)
                term = pw if term is None else term * pw
        bucket = by_den.setdefault(denom, {})
        if term is None:
            bucket[zero_mono] = bucket.get(zero_mono, 0) + num_c
            continue
        for mo, cv in term._terms.items():
            bucket[mo] = bucket.get(mo, 0) + cv * num_c
    acc: dict = {}
    for denom, bucket in by_den.items():
        if denom == 1:
            for mo, v in bucket.items():
                s = acc.get(mo, 0) + v
                if s:
                    acc[mo] = s
                else:
                    acc.pop(mo, None)
        else:
            for mo, v in bucket.items():
                if not v:
                    continue
                s = acc.get(mo, 0) + Fraction(v, denom)
                if s:
                    acc[mo] = s
                else:
                    acc.pop(mo, None)
    return Polynomial._raw(
        n, {mo: normalize(v) if isinstance(v, Fraction) else v for mo, v in acc.items()}
    )


def restrict_to(p: Polynomial, positions: Sequence[int]) -> Polynomial:
    """Project onto the variables at ``positions``; other exponents must be 0."""
    positions = list(positions)
    keep = set(positions)
    out: dict = {}
    for mono, c in p._terms.items():
        for i, e in enumerate(mono):
            if e and i not in keep:
                raise ValueError(
                    f"monomial uses variable {i} outside the restriction set"
                )
        out[tuple(mono[i] for i in positions)] = c
    return Polynomial._raw(len(positions), out)


def embed(p: Polynomial, positions: Sequence[int], n: int) -> Polynomial:
    """Inverse of restrict_to: place a k-variable polynomial at ``positions``."""
    positions = list(positions)
    if len(positions) != p.n:
        raise DimensionMismatch("positions length must equal ambient dimension")
    out: dict = {}
    for mono, c in p._terms.items():
        full = [0] * n
        for i, e in zip(positions, mono):
            full[i] = e
        out[tuple(full)] = c
    return Polynomial._raw(n, out)
