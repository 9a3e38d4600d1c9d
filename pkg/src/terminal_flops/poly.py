"""Exact rational sparse multivariate polynomials.

A :class:`Polynomial` is an immutable map from exponent vectors to nonzero
:class:`fractions.Fraction` coefficients over an ordered tuple of variable
names.  The module also provides a small recursive-descent parser and a
canonical printer; ``parse_poly(str(p), p.vars) == p`` for every ``p``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

INFINITY = math.inf
"""Sentinel returned by :func:`weighted_order` for the zero polynomial."""

DEFAULT_TRUNCATION = 24

Exponent = tuple[int, ...]


class PolyError(ValueError):
    """Raised on ring mismatches and other misuse of polynomials."""


class ParseError(ValueError):
    """Raised when polynomial text does not conform to the grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


class Polynomial:
    __slots__ = ("_vars", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, object] | None = None):
        self._vars = tuple(variables)
        if len(set(self._vars)) != len(self._vars):
            raise PolyError(f"duplicate variable names in {self._vars}")
        clean: dict[Exponent, Fraction] = {}
        n = len(self._vars)
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise PolyError(f"exponent {exp} does not match ring {self._vars}")
            if any(e < 0 for e in exp):
                raise PolyError(f"negative exponent {exp}")
            c = as_fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self._terms = clean
        self._hash = None

    # construction helpers

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls(variables)

    @classmethod
    def constant(cls, variables: Sequence[str], value) -> "Polynomial":
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise PolyError(f"unknown variable {name!r} for ring {variables}")
        exp = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exp: 1})

    @classmethod
    def monomial(cls, variables: Sequence[str], exp: Sequence[int], coeff=1) -> "Polynomial":
        return cls(variables, {tuple(exp): coeff})

    # basic accessors

    @property
    def vars(self) -> tuple[str, ...]:
        return self._vars

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def degree_in(self, name: str) -> int:
        i = self._index(name)
        return max((e[i] for e in self._terms), default=-1)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * len(self._vars), Fraction(0))

    def uses(self, name: str) -> bool:
        i = self._index(name)
        return any(e[i] for e in self._terms)

    def _index(self, name: str) -> int:
        try:
            return self._vars.index(name)
        except ValueError:
            raise PolyError(f"unknown variable {name!r} for ring {self._vars}") from None

    # arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other._vars != self._vars:
                raise PolyError(f"ring mismatch: {self._vars} vs {other._vars}")
            return other
        return Polynomial.constant(self._vars, as_fraction(other))

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Polynomial(self._vars, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self._vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = self._coerce(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Polynomial(self._vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise PolyError("exponent must be a non-negative integer")
        result = Polynomial.constant(self._vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = as_fraction(c)
        return Polynomial(self._vars, {e: c * v for e, v in self._terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._vars == other._vars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self._vars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._vars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({self._vars!r}, {str(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)

    # structural helpers

    def derivative(self, name: str) -> "Polynomial":
        i = self._index(name)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return Polynomial(self._vars, out)

    def homogeneous_part(self, degree: int) -> "Polynomial":
        return Polynomial(self._vars, {e: c for e, c in self._terms.items() if sum(e) == degree})

    def weighted_part(self, weights: Sequence, value) -> "Polynomial":
        w = [as_fraction(x) for x in weights]
        value = as_fraction(value)
        return Polynomial(
            self._vars,
            {e: c for e, c in self._terms.items() if sum(a * b for a, b in zip(e, w)) == value},
        )

    def filter(self, keep) -> "Polynomial":
        return Polynomial(self._vars, {e: c for e, c in self._terms.items() if keep(e)})

    def rename(self, variables: Sequence[str]) -> "Polynomial":
        """Same terms over a ring of the same size with different names."""
        if len(variables) != len(self._vars):
            raise PolyError("rename needs the same number of variables")
        return Polynomial(variables, self._terms)

    def embed(self, variables: Sequence[str]) -> "Polynomial":
        """Re-express in a ring containing all variables this polynomial uses."""
        variables = tuple(variables)
        idx = []
        for i, v in enumerate(self._vars):
            if v in variables:
                idx.append((i, variables.index(v)))
            elif any(e[i] for e in self._terms):
                raise PolyError(f"variable {v!r} is used but absent from {variables}")
        out = {}
        for e, c in self._terms.items():
            ne = [0] * len(variables)
            for i, j in idx:
                ne[j] = e[i]
            out[tuple(ne)] = c
        return Polynomial(variables, out)

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]))


def _grlex_key(exp: Exponent):
    return (sum(exp), tuple(-e for e in exp))


def _mul_bounded(a: Polynomial, b: Polynomial, bound: int | None) -> Polynomial:
    if bound is None:
        return a * b
    out: dict[Exponent, Fraction] = {}
    for e1, c1 in a.terms.items():
        d1 = sum(e1)
        if d1 > bound:
            continue
        for e2, c2 in b.terms.items():
            if d1 + sum(e2) > bound:
                continue
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, Fraction(0)) + c1 * c2
    return Polynomial(a.vars, out)


def substitute(
    p: Polynomial,
    assignment: Mapping[str, Polynomial],
    target_vars: Sequence[str] | None = None,
    bound: int | None = None,
) -> Polynomial:
    """Replace each variable of ``p`` by its image.

    Variables missing from ``assignment`` map to the same-named variable of
    the target ring.  All images must live in the target ring.  With
    ``bound`` every intermediate product is truncated to that total degree.
    """
    images = list(assignment.values())
    if target_vars is None:
        target_vars = images[0].vars if images else p.vars
    target_vars = tuple(target_vars)
    for name, img in assignment.items():
        if name not in p.vars:
            raise PolyError(f"cannot substitute for {name!r}: not a variable of {p.vars}")
        if img.vars != target_vars:
            raise PolyError(f"image of {name!r} lives in {img.vars}, expected {target_vars}")
    full = []
    for v in p.vars:
        if v in assignment:
            full.append(assignment[v])
        else:
            full.append(Polynomial.variable(target_vars, v))
    cache: list[dict[int, Polynomial]] = [{} for _ in full]

    def power(i: int, k: int) -> Polynomial:
        if k not in cache[i]:
            cache[i][k] = full[i] if k == 1 else _mul_bounded(power(i, k - 1), full[i], bound)
        return cache[i][k]

    # variables mapped to themselves only shift exponents, so group the
    # terms by the exponents of the genuinely substituted variables
    moved = [
        i for i, v in enumerate(p.vars) if v not in target_vars or full[i] != Polynomial.variable(target_vars, v)
    ]
    stay = {i: target_vars.index(v) for i, v in enumerate(p.vars) if i not in moved}
    groups: dict[Exponent, dict[Exponent, Fraction]] = {}
    for exp, c in p.items():
        shift = [0] * len(target_vars)
        for i, j in stay.items():
            shift[j] = exp[i]
        groups.setdefault(tuple(exp[i] for i in moved), {})[tuple(shift)] = c
    acc: dict[Exponent, Fraction] = {}
    for key, coeffs in groups.items():
        low = min(sum(e) for e in coeffs)
        prod = Polynomial.constant(target_vars, 1)
        for i, k in zip(moved, key):
            if k:
                prod = _mul_bounded(prod, power(i, k), None if bound is None else bound - low)
        for e, v in _mul_bounded(Polynomial(target_vars, coeffs), prod, bound).items():
            acc[e] = acc.get(e, Fraction(0)) + v
    out = Polynomial(target_vars, acc)
    return out if bound is None else truncate(out, bound)


def weighted_order(p: Polynomial, weights: Sequence):
    """Minimum over terms of ``exponent . weights``; ``INFINITY`` for zero."""
    w = [as_fraction(x) for x in weights]
    if len(w) != len(p.vars):
        raise PolyError(f"weight of length {len(w)} for ring of {len(p.vars)} variables")
    if p.is_zero():
        return INFINITY
    return min(sum((a * b for a, b in zip(e, w)), Fraction(0)) for e in p.terms)


def truncate(p: Polynomial, bound: int) -> Polynomial:
    """Drop every term of total degree above ``bound``."""
    if bound < 0:
        raise PolyError("truncation bound must be non-negative")
    return p.filter(lambda e: sum(e) <= bound)


def multiplicity(p: Polynomial) -> int:
    """Lowest total degree among the terms of a nonzero polynomial."""
    if p.is_zero():
        raise PolyError("multiplicity of the zero polynomial is undefined")
    return min(sum(e) for e in p.terms)


# printing


def _format_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"({c.numerator}/{c.denominator})"


def format_poly(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    pieces = []
    for exp, c in p.sorted_terms():
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        factors = []
        for v, k in zip(p.vars, exp):
            if k == 1:
                factors.append(v)
            elif k > 1:
                factors.append(f"{v}^{k}")
        if not factors:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_format_coeff(mag)] + factors)
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


# parsing


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.vars = tuple(variables)
        self.by_length = sorted(self.vars, key=len, reverse=True)
        self.pos = 0

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise ParseError(f"expected {ch!r}, found {found!r}", self.pos)
        self.pos += 1

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise ParseError(f"expected integer, found {found!r}", self.pos)
        return int(self.text[start:self.pos])

    def parse(self) -> Polynomial:
        result = self.expr()
        self.skip()
        if self.pos != len(self.text):
            raise ParseError(f"unexpected {self.text[self.pos]!r}", self.pos)
        return result

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        result = self.term().scale(sign)
        while self.peek() in ("+", "-") and self.peek():
            op = self.peek()
            self.pos += 1
            t = self.term()
            result = result + t if op == "+" else result - t
        return result

    def starts_factor(self) -> bool:
        ch = self.peek()
        if not ch:
            return False
        return ch == "(" or ch.isdigit() or ch.isalpha() or ch == "_"

    def term(self) -> Polynomial:
        result = self.factor()
        while True:
            if self.peek() == "*":
                self.pos += 1
                result = result * self.factor()
            elif self.starts_factor():
                result = result * self.factor()
            else:
                return result

    def rational_ahead(self) -> bool:
        j = self.pos + 1
        t = self.text

        def ws(j):
            while j < len(t) and t[j].isspace():
                j += 1
            return j

        j = ws(j)
        if j < len(t) and t[j] == "-":
            j = ws(j + 1)
        k = j
        while k < len(t) and t[k].isdigit():
            k += 1
        if k == j:
            return False
        k = ws(k)
        return k < len(t) and t[k] == "/"

    def factor(self) -> Polynomial:
        ch = self.peek()
        start = self.pos
        if not ch:
            raise ParseError("unexpected end of input", self.pos)
        if ch == "(":
            if self.rational_ahead():
                self.pos += 1
                neg = False
                if self.peek() == "-":
                    neg = True
                    self.pos += 1
                num = self.integer()
                self.expect("/")
                den = self.integer()
                self.expect(")")
                if den == 0:
                    raise ParseError("zero denominator", start)
                base = Polynomial.constant(self.vars, Fraction(-num if neg else num, den))
            else:
                self.pos += 1
                base = self.expr()
                self.expect(")")
        elif ch.isdigit():
            base = Polynomial.constant(self.vars, self.integer())
        elif ch.isalpha() or ch == "_":
            name = None
            for v in self.by_length:
                if self.text.startswith(v, self.pos):
                    name = v
                    break
            if name is None:
                end = self.pos
                while end < len(self.text) and (self.text[end].isalnum() or self.text[end] == "_"):
                    end += 1
                raise ParseError(f"unknown variable {self.text[self.pos:end]!r}", self.pos)
            self.pos += len(name)
            base = Polynomial.variable(self.vars, name)
        else:
            raise ParseError(f"unexpected {ch!r}", self.pos)
        if self.peek() == "^":
            self.pos += 1
            base = base ** self.integer()
        return base


def parse_poly(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse ``text`` as a polynomial over ``variables``.

    Juxtaposition is multiplication and identifiers are matched greedily
    against the declared names, so ``xy`` means ``x*y`` in ``[x, y, z, u]``.
    """
    if not variables:
        raise PolyError("at least one variable is required")
    return _Parser(text, variables).parse()


def lcm_list(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out
