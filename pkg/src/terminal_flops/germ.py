"""Germs of threefold singularities: affine space, cyclic action, equations.

A germ is the origin of ``{f_1 = ... = f_k = 0} / mu_r`` inside affine space
with coordinates ``variables``.  The group acts diagonally with the given
characters, and each equation must be semi-invariant.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .poly import (
    DEFAULT_TRUNCATION,
    Polynomial,
    PolyError,
    parse_poly,
    substitute,
    truncate,
)


class GermError(ValueError):
    """Domain error raised by germ construction and manipulation."""


@dataclass(frozen=True)
class CyclicAction:
    """The diagonal action of ``mu_r`` with characters ``weights``."""

    r: int
    weights: tuple[int, ...]

    def __post_init__(self):
        if self.r < 1:
            raise GermError("the index of a cyclic action must be positive")
        object.__setattr__(self, "weights", tuple(int(a) % self.r for a in self.weights))

    @classmethod
    def trivial(cls, n: int) -> "CyclicAction":
        return cls(1, (0,) * n)

    @property
    def is_trivial(self) -> bool:
        return self.r == 1

    def character(self, exp: Sequence[int]) -> int:
        return sum(e * a for e, a in zip(exp, self.weights)) % self.r

    def reduced(self) -> "CyclicAction":
        """Drop the kernel so the action is faithful."""
        d = self.r
        for a in self.weights:
            d = math.gcd(d, a)
        if d <= 1:
            return self
        return CyclicAction(self.r // d, tuple(a // d for a in self.weights))

    def units(self) -> list[int]:
        return [k for k in range(1, self.r + 1) if math.gcd(k, self.r) == 1] if self.r > 1 else [1]

    def rescaled(self, k: int) -> "CyclicAction":
        return CyclicAction(self.r, tuple(a * k for a in self.weights))

    def canonical(self) -> "CyclicAction":
        """Lexicographically smallest presentation among generator changes."""
        act = self.reduced()
        if act.r == 1:
            return CyclicAction(1, (0,) * len(act.weights))
        return min((act.rescaled(k) for k in act.units()), key=lambda a: a.weights)

    def equivalent(self, other: "CyclicAction") -> bool:
        return self.canonical() == other.canonical()

    def restrict(self, keep: Sequence[int]) -> "CyclicAction":
        return CyclicAction(self.r, tuple(self.weights[i] for i in keep))

    def __str__(self) -> str:
        return f"1/{self.r}({','.join(str(a) for a in self.weights)})"


@dataclass(frozen=True)
class Germ:
    variables: tuple[str, ...]
    action: CyclicAction
    equations: tuple[Polynomial, ...]

    @property
    def ambient_dim(self) -> int:
        return len(self.variables)

    @property
    def index(self) -> int:
        return self.action.reduced().r

    @property
    def is_hypersurface(self) -> bool:
        return len(self.equations) == 1

    def equation_character(self, i: int = 0) -> int:
        eq = self.equations[i]
        return self.action.character(next(iter(eq.terms)))

    def text(self) -> str:
        lines = ["ring: " + ", ".join(self.variables)]
        if not self.action.is_trivial:
            lines.append(f"group: 1/{self.action.r} ({', '.join(str(a) for a in self.action.weights)})")
        lines.extend(f"equation: {eq}" for eq in self.equations)
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        eqs = ", ".join(str(e) for e in self.equations) or "(no equations)"
        if self.action.is_trivial:
            return eqs
        return f"{eqs} / {self.action}"


def make_germ(variables: Sequence[str], action: CyclicAction | None, equations: Sequence) -> Germ:
    """Validate and build a germ.

    ``equations`` may be polynomials over ``variables`` or expression text.
    """
    variables = tuple(variables)
    if action is None:
        action = CyclicAction.trivial(len(variables))
    if len(action.weights) != len(variables):
        raise GermError(f"action {action} has {len(action.weights)} weights for {len(variables)} variables")
    eqs = []
    for e in equations:
        if isinstance(e, str):
            e = parse_poly(e, variables)
        elif e.vars != variables:
            raise GermError(f"equation ring {e.vars} differs from {variables}")
        eqs.append(e)
    if len(eqs) > 2:
        raise GermError("at most two defining equations are supported")
    if len(variables) - len(eqs) != 3:
        raise GermError(
            f"dimension mismatch: {len(variables)} variables and {len(eqs)} equations do not cut out a threefold"
        )
    for eq in eqs:
        if eq.is_zero():
            raise GermError("zero equation")
        if eq.constant_term():
            raise GermError(f"equation {eq} does not vanish at the origin")
        chars = {}
        for exp in sorted(eq.terms, key=lambda e: (sum(e), tuple(-x for x in e))):
            chars.setdefault(action.character(exp), exp)
        if len(chars) > 1:
            (c1, e1), (c2, e2) = list(chars.items())[:2]
            m1 = str(Polynomial.monomial(variables, e1))
            m2 = str(Polynomial.monomial(variables, e2))
            raise GermError(
                f"equivariance violation: monomial {m2} has character {c2} but {m1} has character {c1}"
            )
    return Germ(variables, action, tuple(eqs))


@dataclass(frozen=True)
class CoordinateChange:
    """Polynomial images of (some of) the coordinates, in the same ring."""

    assignment: Mapping[str, Polynomial]
    truncation_degree: int = DEFAULT_TRUNCATION

    def full(self, variables: Sequence[str]) -> dict[str, Polynomial]:
        return {v: self.assignment.get(v, Polynomial.variable(variables, v)) for v in variables}

    def validate(self, germ: Germ) -> None:
        variables = germ.variables
        images = self.full(variables)
        for v, img in images.items():
            if img.vars != variables:
                raise GermError(f"image of {v} lives in {img.vars}, expected {variables}")
        # linear part must be invertible
        rows = []
        for v in variables:
            lin = images[v].homogeneous_part(1)
            rows.append([lin.coefficient(tuple(1 if j == i else 0 for j in range(len(variables))))
                         for i in range(len(variables))])
        if _rank(rows) < len(variables):
            raise GermError("coordinate change has a singular linear part")
        for i, v in enumerate(variables):
            want = germ.action.weights[i]
            for exp in images[v].terms:
                if sum(exp) == 0:
                    if want % germ.action.r:
                        raise GermError(f"translation of {v} is not equivariant")
                    continue
                if germ.action.character(exp) != want:
                    raise GermError(f"image of {v} is not semi-invariant of character {want}")


def _rank(rows: list[list[Fraction]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def apply_change(g: Germ, c: CoordinateChange) -> Germ:
    """Substitute the change into every equation and truncate."""
    c.validate(g)
    images = c.full(g.variables)
    new = []
    for eq in g.equations:
        out = substitute(eq, images, g.variables, bound=c.truncation_degree)
        new.append(out)
    return make_germ(g.variables, g.action, new)


def change_from_text(germ_vars: Sequence[str], mapping: Mapping[str, str], degree: int = DEFAULT_TRUNCATION) -> CoordinateChange:
    return CoordinateChange({k: parse_poly(v, germ_vars) for k, v in mapping.items()}, degree)


# germ files

_GROUP_RE = re.compile(r"^\s*1\s*/\s*(\d+)\s*\(([^)]*)\)\s*$")


def parse_germ_text(text: str) -> Germ:
    """Read the ``ring:/group:/equation:`` germ file format."""
    variables = None
    action = None
    equations: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise GermError(f"line {lineno}: expected 'key: value'")
        key = key.strip().lower()
        value = value.strip()
        if key == "ring":
            variables = tuple(v.strip() for v in value.split(",") if v.strip())
        elif key == "group":
            m = _GROUP_RE.match(value)
            if not m:
                raise GermError(f"line {lineno}: expected 'group: 1/r (a1, ..., an)'")
            action = CyclicAction(int(m.group(1)), tuple(int(a) for a in m.group(2).split(",")))
        elif key == "equation":
            equations.append(value)
        else:
            raise GermError(f"line {lineno}: unknown key {key!r}")
    if variables is None:
        raise GermError("germ file has no 'ring:' line")
    return make_germ(variables, action, equations)


def germ(equations, variables: Sequence[str] = ("x", "y", "z", "u"), r: int = 1, weights: Sequence[int] | None = None) -> Germ:
    """Shorthand constructor used throughout the tests and the catalog."""
    if isinstance(equations, (str, Polynomial)):
        equations = [equations]
    action = CyclicAction(r, tuple(weights)) if weights is not None else CyclicAction.trivial(len(variables))
    return make_germ(variables, action, equations)


# isolatedness


def singular_locus_dimension_bound(g: Germ, degree_bound: int = 16) -> str:
    """``isolated``, ``non-isolated`` or ``inconclusive`` for a hypersurface germ."""
    from .classify import milnor_number, UNSTABLE

    if len(g.equations) != 1:
        raise GermError("isolatedness test needs a hypersurface germ")
    f = g.equations[0]
    if f.homogeneous_part(1):
        return "isolated"
    mu = milnor_number(f, degree_bound)
    if mu != UNSTABLE:
        return "isolated"
    if _has_singular_curve(f):
        return "non-isolated"
    return "inconclusive"


def _has_singular_curve(f: Polynomial) -> bool:
    """Detect a coordinate axis along which ``f`` is singular."""
    n = len(f.vars)
    grads = [f.derivative(v) for v in f.vars] + [f]
    for i in range(n):
        on_axis = lambda e, i=i: all(e[j] == 0 for j in range(n) if j != i)
        if all(not p.filter(on_axis) for p in grads):
            return True
    return False


# the cD normal form


@dataclass(frozen=True)
class NormalFormResult:
    germ: Germ
    lam: Fraction
    k: int | None
    n: int | None
    truncation_degree: int
    iterations: int
    progress: tuple[int, ...] = field(default=())

    def metadata(self) -> dict:
        return {
            "lambda": _frac_text(self.lam),
            "k": self.k,
            "n": self.n,
            "truncation_degree": self.truncation_degree,
            "iterations": self.iterations,
            "progress": list(self.progress),
        }


def _frac_text(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


class _CDForm:
    """Split ``f`` into the pieces named in the cD normal-form algorithm."""

    def __init__(self, f: Polynomial):
        x, y, z, u = range(4)
        self.f = f
        self.h_part = f.filter(lambda e: e[x] == 0 and e[y] >= 2 and e[z] == 0 and e[u] >= 1)
        self.lin_u = f.filter(lambda e: e[x] == 0 and e[y] == 1 and e[z] == 0)
        self.g = f.filter(lambda e: e[x] == 0 and e[y] == 0)
        pure_u = [e[u] for e in self.g.terms if e[z] == 0]
        self.n_exp = min(pure_u) if pure_u else None
        self.k = min((e[u] for e in self.lin_u.terms), default=None)
        cands = [v for v in (self.n_exp, self.k) if v is not None]
        self.n_f = min(cands) if cands else None
        ypos = [e[u] - 1 for e in self.h_part.terms if e[y] > 2]
        if ypos:
            self.delta = min(ypos)
        else:
            self.delta = None if self.n_f is None else self.n_f - 1

    @property
    def gap(self) -> int | None:
        if self.n_f is None or self.delta is None:
            return None
        return self.n_f - self.delta

    def h(self) -> Polynomial:
        """``h(y, u)`` with ``y^2 u h(y, u)`` the sub-normal-form tail."""
        return Polynomial(self.f.vars, {(0, e[1] - 2, 0, e[3] - 1): c for e, c in self.h_part.items()})


def _cD_subnormalize(f: Polynomial, degree: int, max_rounds: int = 200) -> Polynomial:
    """Bring ``x^2 + y^2 z + ...`` to sub-normal form.

    Moves: complete the square in ``x``; absorb ``y^2 z (...)`` tails into
    ``z``; absorb ``y z (...)`` terms by shifting ``y``.
    """
    V = f.vars
    X, Y, Z, U = (Polynomial.variable(V, v) for v in V)
    for _ in range(max_rounds):
        f = truncate(f, degree)
        changed = False
        # x: f = x^2 + x*A + B  ->  x -> x - A/2
        xa = f.filter(lambda e: e[0] >= 1 and e != (2, 0, 0, 0))
        if xa:
            a = Polynomial(V, {(e[0] - 1,) + e[1:]: c for e, c in xa.items()})
            f = substitute(f, {"x": X - a.scale(Fraction(1, 2))}, V, bound=degree)
            changed = True
            continue
        # y^2 * z * q(y, z, u) with q != 1  ->  z -> z - q
        tail = f.filter(lambda e: e[1] >= 2 and (e[2] >= 1 or e[3] == 0) and e != (0, 2, 1, 0))
        if tail:
            if tail.coefficient((0, 2, 0, 0)):
                raise GermError("quadratic part has rank two: the germ is of cA type")
            q = Polynomial(V, {(0, e[1] - 2, e[2], e[3]): c for e, c in tail.items()})
            f = substitute(f, {"z": Z - q}, V, bound=degree)
            changed = True
            continue
        # y * z * p(z, u)  ->  y -> y - p/2
        yz = f.filter(lambda e: e[1] == 1 and e[2] >= 1)
        if yz:
            p = Polynomial(V, {(0, 0, e[2] - 1, e[3]): c for e, c in yz.items()})
            f = substitute(f, {"y": Y - p.scale(Fraction(1, 2))}, V, bound=degree)
            changed = True
            continue
        # y^i u^j with j >= n(f) has no room in the sub-normal form: fold into z as well
        form = _CDForm(f)
        big = form.h_part.filter(lambda e: form.n_f is not None and e[3] >= form.n_f)
        if big:
            q = Polynomial(V, {(0, e[1] - 2, 0, e[3]): c for e, c in big.items()})
            f = substitute(f, {"z": Z - q}, V, bound=degree)
            changed = True
            continue
        if not changed:
            return f
    raise GermError(f"sub-normal form did not stabilize at truncation degree {degree}")


def normal_form_cD(g: Germ, truncation_degree: int = DEFAULT_TRUNCATION, check_class: bool = True) -> NormalFormResult:
    """Normal form ``x^2 + y^2 z + lambda y u^k + g(z, u)`` of a cD germ.

    The input must already contain ``x^2`` and ``y^2 z``; the loop follows
    the induction on ``n(f) - delta(f)`` and checks that it strictly drops.
    """
    if len(g.equations) != 1 or g.ambient_dim != 4 or not g.action.is_trivial:
        raise GermError("normal_form_cD needs a four-variable hypersurface germ with trivial action")
    if check_class:
        from .classify import terminal_classify

        cls = terminal_classify(g)
        if cls.kind != "cD":
            raise GermError(f"not of cD type (classified as {cls.name})")
    f = g.equations[0]
    x2 = f.coefficient((2, 0, 0, 0))
    y2z = f.coefficient((0, 2, 1, 0))
    if not x2 or not y2z:
        raise GermError("normal_form_cD expects a presentation containing x^2 and y^2 z")
    f = f.scale(1 / x2)
    if y2z / x2 != 1:
        V = f.vars
        f = substitute(f, {"z": Polynomial.variable(V, "z").scale(x2 / y2z)}, V)
    V = f.vars
    Z = Polynomial.variable(V, "z")
    f = _cD_subnormalize(truncate(f, truncation_degree), truncation_degree)
    progress = []
    iterations = 0
    for iterations in range(1, 4 * truncation_degree + 2):
        form = _CDForm(f)
        if form.h_part.is_zero():
            if form.n_f is None:
                raise GermError("non-isolated singularity detected: no y*u^k or u^n term survives")
            progress.append(form.gap)
            break
        progress.append(form.gap)
        h = form.h()
        f = _cD_subnormalize(substitute(f, {"z": Z - Polynomial.variable(V, "u") * h}, V, bound=truncation_degree), truncation_degree)
        nxt = _CDForm(f)
        if form.gap is not None and nxt.gap is not None and not nxt.h_part.is_zero() and nxt.gap >= form.gap:
            raise GermError(
                f"normal form iteration made no progress (n - delta went from {form.gap} to {nxt.gap})"
            )
    else:
        raise GermError(f"truncation degree {truncation_degree} exhausted before the normal form stabilized")
    form = _CDForm(f)
    k = form.k
    lam = form.lin_u.coefficient((0, 1, 0, k)) if k is not None else Fraction(0)
    extra = form.lin_u.filter(lambda e: e[3] != k)
    if extra:
        f = _fold_unit(f, k, truncation_degree)
        form = _CDForm(f)
        lam = form.lin_u.coefficient((0, 1, 0, k))
    out = make_germ(g.variables, g.action, [f])
    return NormalFormResult(out, lam, k, form.n_exp, truncation_degree, iterations, tuple(progress))


def _fold_unit(f: Polynomial, k: int, degree: int) -> Polynomial:
    """Rewrite ``y u^k U(u)`` as ``lambda y u^k`` by rescaling ``u``."""
    V = f.vars
    U = Polynomial.variable(V, "u")
    for _ in range(degree):
        lin = f.filter(lambda e: e[0] == 0 and e[1] == 1 and e[2] == 0)
        lam = lin.coefficient((0, 1, 0, k))
        rest = lin.filter(lambda e: e[3] != k)
        if not rest:
            return f
        # y u^k (lam + c u^m + ...) ~ lam y (u (1 + c u^m / (k lam)))^k to first order
        low = min(rest.terms, key=lambda e: e[3])
        c = rest.coefficient(low)
        m = low[3] - k
        f = substitute(f, {"u": U - Polynomial.monomial(V, (0, 0, 0, m + 1), c / (k * lam))}, V, bound=degree)
        f = _cD_subnormalize(f, degree)
    raise GermError("could not normalize the coefficient of y u^k")
