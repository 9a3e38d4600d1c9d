"""Du Val and terminal threefold classification with a Milnor-number oracle."""

from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .germ import CyclicAction, Germ, GermError, make_germ
from .poly import Polynomial, multiplicity, substitute, truncate

UNSTABLE = "unstable"
_PRIME = (1 << 61) - 1


class ClassificationError(GermError):
    pass


class NotTerminalError(ClassificationError):
    pass


class UnrecognizedError(ClassificationError):
    pass


# Milnor number


def _monomials(n: int, degree: int) -> list[tuple[int, ...]]:
    out = []
    for d in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def _mod(q: Fraction) -> int:
    return q.numerator % _PRIME * pow(q.denominator % _PRIME, -1, _PRIME) % _PRIME


def _local_algebra_dim(partials: list[dict], n: int, degree: int) -> int:
    """``dim C[x]/(J + m^(degree+1))`` by sparse elimination over a large prime."""
    monos = _monomials(n, degree)
    index = {e: i for i, e in enumerate(monos)}
    pivots: dict[int, dict[int, int]] = {}
    for p in partials:
        if not p:
            continue
        low = min(sum(e) for e in p)
        for m in monos:
            if sum(m) + low > degree:
                continue
            row = {}
            for e, c in p.items():
                prod = tuple(a + b for a, b in zip(e, m))
                if sum(prod) <= degree:
                    row[index[prod]] = c
            while row:
                col = min(row)
                piv = pivots.get(col)
                if piv is None:
                    inv = pow(row[col], -1, _PRIME)
                    pivots[col] = {k: v * inv % _PRIME for k, v in row.items()}
                    break
                f = row[col]
                for k, v in piv.items():
                    nv = (row.get(k, 0) - f * v) % _PRIME
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
    return len(monos) - len(pivots)


def milnor_number(f: Polynomial, degree_bound: int = 24):
    """Milnor number of an isolated critical point, or ``UNSTABLE``.

    The local algebra is truncated at increasing degree until its dimension
    stays put for three consecutive increments.
    """
    if f.homogeneous_part(1):
        return 0
    n = len(f.vars)
    partials = [{e: _mod(c) for e, c in f.derivative(v).items()} for v in f.vars]
    history: list[int] = []
    for d in range(1, degree_bound + 1):
        history.append(_local_algebra_dim(partials, n, d))
        if len(history) >= 4 and len(set(history[-4:])) == 1:
            return history[-1]
    return UNSTABLE


# Du Val types


_FAMILY_RANK = {"A": 0, "D": 1, "E": 2}


@functools.total_ordering
@dataclass(frozen=True)
class DuValType:
    family: str
    subscript: int

    def __post_init__(self):
        lo = {"A": 1, "D": 4, "E": 6}.get(self.family)
        if lo is None:
            raise ValueError(f"unknown Du Val family {self.family!r}")
        if self.subscript < lo or (self.family == "E" and self.subscript > 8):
            raise ValueError(f"invalid Du Val symbol {self.family}{self.subscript}")

    def _key(self):
        return (_FAMILY_RANK[self.family], self.subscript)

    def __lt__(self, other: "DuValType") -> bool:
        return self._key() < other._key()

    def __str__(self) -> str:
        return f"{self.family}{self.subscript}"

    @classmethod
    def parse(cls, text: str) -> "DuValType":
        return cls(text[0].upper(), int(text[1:].lstrip("_")))


# quadratic forms and the splitting lemma


def _quadratic_matrix(f: Polynomial) -> list[list[Fraction]]:
    n = len(f.vars)
    q = [[Fraction(0)] * n for _ in range(n)]
    for e, c in f.homogeneous_part(2).items():
        idx = [i for i in range(n) for _ in range(e[i])]
        i, j = idx
        if i == j:
            q[i][i] += c
        else:
            q[i][j] += c / 2
            q[j][i] += c / 2
    return q


def _rank(m: list[list[Fraction]]) -> int:
    from .germ import _rank as rank

    return rank(m) if m else 0


def _diagonalize(f: Polynomial, degree: int, order: Sequence[int] | None = None) -> tuple[Polynomial, list[int]]:
    """Rational linear change making the quadratic part diagonal.

    Returns the new polynomial and the indices of the variables carrying a
    nonzero square, in the order they were found.
    """
    V = f.vars
    n = len(V)
    order = list(order) if order is not None else list(range(n))
    X = [Polynomial.variable(V, v) for v in V]
    done: list[int] = []
    while True:
        q = _quadratic_matrix(f)
        free = [i for i in order if i not in done]
        i = next((i for i in free if q[i][i]), None)
        if i is None:
            pair = next(((i, j) for i in free for j in free if i != j and q[i][j]), None)
            if pair is None:
                return f, done
            i, j = pair
            f = substitute(f, {V[i]: X[i] + X[j]}, V, bound=degree)
            continue
        shift = Polynomial.zero(V)
        for j in free:
            if j != i and q[i][j]:
                shift = shift + X[j].scale(q[i][j] / q[i][i])
        if shift:
            f = substitute(f, {V[i]: X[i] - shift}, V, bound=degree)
        done.append(i)


def _split_squares(f: Polynomial, squares: list[int], degree: int) -> Polynomial:
    """Remove every mixed term involving the square variables (splitting lemma)."""
    V = f.vars
    for _ in range(4 * degree + 4):
        f = truncate(f, degree)
        moved = False
        for i in squares:
            sq = tuple(2 if j == i else 0 for j in range(len(V)))
            a = f.coefficient(sq)
            mixed = f.filter(lambda e, i=i, sq=sq: e[i] >= 1 and e != sq)
            if not mixed:
                continue
            A = Polynomial(V, {tuple(x - (1 if j == i else 0) for j, x in enumerate(e)): c for e, c in mixed.items()})
            f = substitute(f, {V[i]: Polynomial.variable(V, V[i]) - A.scale(1 / (2 * a))}, V, bound=degree)
            moved = True
        if not moved:
            return f
    raise ClassificationError("splitting lemma did not converge")


def _residual(f: Polynomial, squares: list[int]) -> Polynomial:
    keep = [v for j, v in enumerate(f.vars) if j not in squares]
    out = {}
    for e, c in f.items():
        if any(e[j] for j in squares):
            continue
        out[tuple(e[j] for j, v in enumerate(f.vars) if v in keep)] = c
    return Polynomial(tuple(keep), out)


# univariate helpers for binary forms


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def _poly_mod(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        a = _poly_trim(a)
    return a


def _poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _poly_trim(a), _poly_trim(b)
    while b:
        a, b = b, _poly_mod(a, b)
    return [c / a[-1] for c in a]


def binary_cubic_pattern(g3: Polynomial) -> tuple[str, Fraction | None]:
    """Factor pattern of a binary cubic: ``squarefree``, ``square`` or ``cube``.

    For ``square`` and ``cube`` the repeated root ``s`` of ``g3(s, 1)`` is
    returned (``None`` means the repeated factor is the second variable).
    """
    coeffs = [g3.coefficient((i, 3 - i)) for i in range(4)]
    if not any(coeffs):
        raise ClassificationError("zero cubic")
    p = _poly_trim(coeffs)
    at_infinity = 3 - (len(p) - 1)
    if at_infinity >= 2:
        return ("cube" if at_infinity == 3 else "square"), None
    dp = [i * c for i, c in enumerate(p)][1:]
    g = _poly_gcd(p, dp)
    if len(g) == 1:
        return "squarefree", None
    if len(g) == 2:
        return "square", -g[0]
    return "cube", -g[0]


# Du Val classification


def _as_surface(f) -> Polynomial:
    if isinstance(f, Germ):
        if len(f.equations) != 1 or f.ambient_dim != 3:
            raise ClassificationError("Du Val classification needs a surface hypersurface germ")
        return f.equations[0]
    return f


def duval_classify(f, degree_bound: int = 24) -> DuValType:
    """ADE type of an isolated surface singularity in three variables."""
    f = _as_surface(f)
    if len(f.vars) != 3:
        raise ClassificationError("Du Val classification needs three variables")
    if f.constant_term():
        raise ClassificationError("the surface does not pass through the origin")
    if f.homogeneous_part(1):
        raise ClassificationError("smooth point: not a Du Val singularity")
    mu = milnor_number(f, degree_bound)
    if mu == UNSTABLE:
        raise ClassificationError("non-isolated singularity")
    jet = max(mu + 2, 6)
    g, squares = _diagonalize(truncate(f, jet), jet)
    corank = 3 - len(squares)
    if corank == 3:
        raise ClassificationError("corank 3: not a Du Val singularity")
    g = _split_squares(g, squares, jet)
    res = _residual(g, squares)
    if corank == 0:
        result = DuValType("A", 1)
    elif corank == 1:
        if res.is_zero():
            raise ClassificationError("non-isolated singularity")
        result = DuValType("A", multiplicity(res) - 1)
    else:
        result = _binary_type(res, mu)
    if result.subscript != mu:
        raise ClassificationError(f"Du Val classifier ({result}) disagrees with the Milnor number {mu}")
    return result


def _binary_type(g: Polynomial, mu: int) -> DuValType:
    V = g.vars
    g3 = g.homogeneous_part(3)
    if g3.is_zero():
        raise ClassificationError("corank two with vanishing cubic: not a Du Val singularity")
    pattern, root = binary_cubic_pattern(g3)
    if pattern == "squarefree":
        return DuValType("D", 4)
    Y, Z = (Polynomial.variable(V, v) for v in V)
    # move the repeated factor onto the first variable
    if root is None:
        g = substitute(g, {V[0]: Z, V[1]: Y}, V)
    else:
        g = substitute(g, {V[0]: Y + Z.scale(root)}, V)
    if pattern == "square":
        if mu < 5:
            raise ClassificationError("square-factor cubic with Milnor number below 5")
        return DuValType("D", mu)
    c = g.coefficient((3, 0))
    # Tschirnhaus: clear y^2 * (...) so the weighted tests read off cleanly
    y2 = g.filter(lambda e: e[0] == 2)
    if y2:
        q = Polynomial(V, {(0, e[1]): c2 for e, c2 in y2.items()})
        g = substitute(g, {V[0]: Y - q.scale(1 / (3 * c))}, V)
    if g.coefficient((0, 4)):
        return DuValType("E", 6)
    if g.coefficient((1, 3)):
        return DuValType("E", 7)
    if g.coefficient((0, 5)):
        return DuValType("E", 8)
    raise ClassificationError("cubic is a perfect cube but the jet is beyond E8: not Du Val")


# classification verdicts


@dataclass(frozen=True)
class SingularityClass:
    kind: str
    index: int = 1
    subscript: int | None = None
    weights: tuple[int, ...] | None = None
    elephant: DuValType | None = None
    metadata: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def is_smooth(self) -> bool:
        return self.kind == "smooth"

    @property
    def is_gorenstein(self) -> bool:
        return self.index == 1

    @property
    def name(self) -> str:
        if self.kind == "cyclic_quotient":
            return f"1/{self.index}({','.join(map(str, self.weights))})"
        if self.subscript is not None and self.kind in ("cA", "cD", "cE"):
            return f"{self.kind}{self.subscript}"
        return self.kind

    def report(self) -> dict:
        out = {"kind": self.kind if self.kind != "cyclic_quotient" else "cyclic_quotient", "name": self.name,
               "index": self.index}
        if self.subscript is not None:
            out["subscript"] = self.subscript
        if self.weights is not None:
            out["weights"] = list(self.weights)
        out["elephant"] = str(self.elephant) if self.elephant else None
        out.update(self.metadata)
        return out


def _cyclic_quotient_class(action: CyclicAction) -> SingularityClass:
    act = action.reduced()
    r = act.r
    if r == 1:
        return SingularityClass("smooth")
    a = act.weights
    for i, j, k in itertools.permutations(range(3)):
        if i > j:
            continue
        if (a[i] + a[j]) % r == 0 and math.gcd(a[i], r) == 1 and math.gcd(a[k], r) == 1:
            inv = pow(a[k], -1, r)
            w = [x * inv % r for x in a]
            return SingularityClass("cyclic_quotient", r, weights=tuple(w),
                                    metadata={"terminal_form": [w[i], w[j], w[k]]})
    raise NotTerminalError(f"cyclic quotient {act} fails the 1/r(a,-a,1) test")


def _eliminate_linear(g: Germ) -> tuple[int, ...] | None:
    """Indices that survive when the single equation has a linear term."""
    f = g.equations[0]
    lin = f.homogeneous_part(1)
    if lin.is_zero():
        return None
    n = g.ambient_dim
    v = next(i for i in range(n) if lin.coefficient(tuple(1 if j == i else 0 for j in range(n))))
    return tuple(j for j in range(n) if j != v)


def _gorenstein_class(f: Polynomial, seed: int = 0) -> SingularityClass:
    if len(f.vars) != 4:
        raise ClassificationError("threefold hypersurfaces need four variables")
    if f.constant_term():
        raise ClassificationError("the equation does not vanish at the origin")
    if f.homogeneous_part(1):
        return SingularityClass("smooth")
    jet = 12
    g, squares = _diagonalize(truncate(f, jet), jet)
    rho = len(squares)
    if rho >= 2:
        if rho == 2:
            g = _split_squares(g, squares, jet)
            res = _residual(g, squares)
            if res.is_zero():
                raise NotTerminalError("non-isolated cA singularity")
            n = multiplicity(res) - 1
        else:
            n = 1
        return SingularityClass("cA", 1, n, elephant=DuValType("A", n), metadata={"quadratic_rank": rho})
    if rho == 0:
        raise NotTerminalError("multiplicity at least three: not a compound Du Val point")
    g = _split_squares(g, squares, jet)
    res = _residual(g, squares)
    g3 = res.homogeneous_part(3)
    if g3.is_zero():
        raise NotTerminalError("quadratic rank one with vanishing cubic: not compound Du Val")
    cube = _cube_root_linear(g3)
    if cube is None:
        n = _section_subscript(f, "D", seed)
        return SingularityClass("cD", 1, n, elephant=DuValType("D", n))
    n, data = _cE_subscript(res, cube)
    return SingularityClass("cE", 1, n, elephant=DuValType("E", n), metadata=data)


def _cube_root_linear(g3: Polynomial) -> list[Fraction] | None:
    """``(c, l)`` style data when ``g3 = c * l^3`` for a linear form ``l``."""
    n = len(g3.vars)
    for lead in range(n):
        pure = tuple(3 if j == lead else 0 for j in range(n))
        c = g3.coefficient(pure)
        if not c:
            continue
        coeffs = []
        for j in range(n):
            if j == lead:
                coeffs.append(Fraction(1))
            else:
                e = tuple(2 if k == lead else (1 if k == j else 0) for k in range(n))
                coeffs.append(g3.coefficient(e) / (3 * c))
        V = g3.vars
        l = Polynomial.zero(V)
        for j, a in enumerate(coeffs):
            if a:
                l = l + Polynomial.variable(V, V[j]).scale(a)
        if (l ** 3).scale(c) == g3:
            return [lead, c] + coeffs
        return None
    return None


def _cE_subscript(res: Polynomial, cube) -> tuple[int, dict]:
    lead, c, *coeffs = cube
    V = res.vars
    X = [Polynomial.variable(V, v) for v in V]
    # make the cube root a coordinate
    shift = Polynomial.zero(V)
    for j, a in enumerate(coeffs):
        if j != lead and a:
            shift = shift + X[j].scale(a)
    g = substitute(res, {V[lead]: X[lead] - shift}, V, bound=8)
    y2 = g.filter(lambda e: e[lead] == 2)
    if y2:
        q = Polynomial(V, {tuple(0 if k == lead else x for k, x in enumerate(e)): cc for e, cc in y2.items()})
        g = substitute(g, {V[lead]: X[lead] - q.scale(1 / (3 * c))}, V, bound=8)
    others = [k for k in range(len(V)) if k != lead]
    lin_y = g.filter(lambda e: e[lead] == 1)
    free = g.filter(lambda e: e[lead] == 0)
    g3 = lin_y.homogeneous_part(4)
    h4 = free.homogeneous_part(4)
    h5 = free.homogeneous_part(5)
    data = {"g3_zero": g3.is_zero(), "h4_zero": h4.is_zero(), "h5_zero": h5.is_zero()}
    if not h4.is_zero():
        return 6, data
    if not g3.is_zero():
        return 7, data
    if not h5.is_zero():
        return 8, data
    raise NotTerminalError("cubic is a perfect cube but the germ is beyond cE8")


def _section_subscript(f: Polynomial, family: str, seed: int) -> int:
    """Subscript of the generic hyperplane section, minimized over two draws."""
    rng = random.Random(seed)
    best = None
    for _ in range(2):
        surface = _linear_section(f, rng)
        t = duval_classify(surface)
        if t.family != family:
            raise ClassificationError(f"hyperplane section is {t}, expected family {family}")
        best = t.subscript if best is None else min(best, t.subscript)
    return best


def _linear_section(f: Polynomial, rng: random.Random, elim: int | None = None) -> Polynomial:
    V = f.vars
    n = len(V)
    elim = n - 1 if elim is None else elim
    keep = [v for j, v in enumerate(V) if j != elim]
    image = Polynomial.zero(tuple(keep))
    for v in keep:
        image = image + Polynomial.variable(tuple(keep), v).scale(_draw(rng))
    assign = {v: Polynomial.variable(tuple(keep), v) for v in keep}
    assign[V[elim]] = image
    return substitute(f, assign, tuple(keep))


def _draw(rng: random.Random) -> int:
    return rng.choice([-5, -4, -3, -2, -1, 1, 2, 3, 4, 5])


def terminal_classify(g: Germ, seed: int = 0) -> SingularityClass:
    """Name the terminal singularity at the origin of ``g``."""
    act = g.action.reduced()
    if not g.equations:
        if g.ambient_dim != 3:
            raise ClassificationError("a quotient germ without equations needs three variables")
        return _cyclic_quotient_class(act)
    if len(g.equations) != 1 or g.ambient_dim != 4:
        raise ClassificationError("only hypersurface germs in four variables are classified")
    f = g.equations[0]
    if act.r == 1:
        return _gorenstein_class(f, seed)
    keep = _eliminate_linear(g)
    if keep is not None:
        return _cyclic_quotient_class(act.restrict(keep))
    cover = _gorenstein_class(f, seed)
    return _quotient_class(g, act, cover)


def _quotient_class(g: Germ, act: CyclicAction, cover: SingularityClass) -> SingularityClass:
    r = act.r
    f = g.equations[0]
    e = act.character(next(iter(f.terms)))
    chars = act.weights
    meta = {"cover": cover.name, "equation_character": e}
    if cover.kind == "smooth":
        raise ClassificationError("smooth cover was not eliminated")
    if cover.kind == "cA":
        q = _quadratic_matrix(f)
        if e == 0:
            for i, j in itertools.combinations(range(4), 2):
                if (chars[i] + chars[j]) % r or math.gcd(chars[i], r) != 1:
                    continue
                if q[i][i] * q[j][j] - q[i][j] * q[j][i] == 0:
                    continue
                rest = [k for k in range(4) if k not in (i, j)]
                units = [k for k in rest if math.gcd(chars[k], r) == 1]
                zeros = [k for k in rest if chars[k] == 0]
                if len(units) == 1 and len(zeros) == 1:
                    zk, uk = units[0], zeros[0]
                    inv = pow(chars[zk], -1, r)
                    axial = _axis_order(f, uk)
                    meta.update({"axial_weight": chars[i] * inv % r, "axial_multiplicity": axial,
                                 "coordinates": [g.variables[i], g.variables[j], g.variables[zk], g.variables[uk]]})
                    return SingularityClass(f"cA/{r}", r, metadata=meta)
        multiset = sorted(chars)
        if r == 2 and e == 0 and multiset == [0, 1, 1, 1]:
            return SingularityClass("cAx/2", 2, metadata=meta)
        if r == 4 and e == 2 and any(sorted(a * k % 4 for a in chars) == [1, 1, 2, 3] for k in (1, 3)):
            return SingularityClass("cAx/4", 4, metadata=meta)
        raise UnrecognizedError(f"unrecognized quotient of a {cover.name} point by {act}")
    if cover.kind == "cD" and r in (2, 3):
        return SingularityClass(f"cD/{r}", r, metadata=meta)
    if cover.kind == "cE" and r == 2:
        return SingularityClass("cE/2", 2, metadata=meta)
    raise UnrecognizedError(f"unrecognized quotient of a {cover.name} point by {act}")


def _axis_order(f: Polynomial, k: int) -> int | None:
    orders = [e[k] for e in f.terms if all(e[j] == 0 for j in range(len(e)) if j != k)]
    return min(orders) if orders else None


# general elephant


@dataclass(frozen=True)
class ElephantResult:
    surface: Germ | None
    type: DuValType | None

    @property
    def is_smooth(self) -> bool:
        return self.type is None


SMOOTH_SECTION = "smooth section"


def _elephant_draw(g: Germ, rng: random.Random) -> tuple[Germ, DuValType | None]:
    act = g.action.reduced()
    f = g.equations[0]
    V = g.variables
    r = act.r
    e = act.character(next(iter(f.terms))) if r > 1 else 0
    chi = (sum(act.weights) - e) % r if r > 1 else 0
    v = next((i for i in range(4) if act.weights[i] % r == chi), None)
    if v is None:
        raise ClassificationError(f"no coordinate of character {chi}: the elephant is not a graph")
    keep = tuple(x for j, x in enumerate(V) if j != v)
    section = Polynomial.zero(keep)
    bound = max(r, 1) + 1
    for d in range(1, bound + 1):
        for combo in itertools.combinations_with_replacement(range(3), d):
            exp = [0] * 3
            for i in combo:
                exp[i] += 1
            full = list(exp)
            full.insert(v, 0)
            if act.character(full) != chi:
                continue
            if d > 1 and r == 1:
                continue
            section = section + Polynomial.monomial(keep, tuple(exp), _draw(rng))
    assign = {x: Polynomial.variable(keep, x) for x in keep}
    assign[V[v]] = section
    surf = substitute(f, assign, keep)
    surface = Germ(keep, CyclicAction.trivial(3), (surf,))
    if surf.homogeneous_part(1):
        return surface, None
    return surface, duval_classify(surf)


def general_elephant(g: Germ, seed: int = 0, draws: int = 4) -> tuple[Germ | None, DuValType | str]:
    """Generic anticanonical section, classified on the cover.

    Returns the surface germ and its Du Val type, or ``SMOOTH_SECTION``.
    """
    if not g.equations:
        raise ClassificationError("the elephant of a cyclic quotient is not a hypersurface section")
    if len(g.equations) != 1 or g.ambient_dim != 4:
        raise ClassificationError("general_elephant needs a hypersurface germ in four variables")
    f = g.equations[0]
    if f.homogeneous_part(1) and g.action.reduced().r == 1:
        return None, SMOOTH_SECTION
    rng = random.Random(seed)
    seen = []
    for _ in range(draws):
        surface, t = _elephant_draw(g, rng)
        t = SMOOTH_SECTION if t is None else t
        if t in seen:
            return surface, t
        seen.append(t)
    raise ClassificationError(f"elephant draws disagree: {', '.join(map(str, seen))}")


# discrepancy-one weights


def count_discrepancy_one_weights(g: Germ, max_weight: int = 8) -> list[tuple[int, ...]]:
    """Table-G style weights with discrepancy one for a Gorenstein germ.

    Bounded search over the weight shapes ``(a, b, c, 1)`` with entries up to
    ``max_weight`` in every variable order.
    """
    from .blowup import BlowupWeight, discrepancy

    if g.action.reduced().r != 1:
        raise ClassificationError("count_discrepancy_one_weights needs a Gorenstein germ")
    cls = terminal_classify(g)
    if cls.kind not in ("cA", "cD", "cE"):
        raise ClassificationError(f"class {cls.name} is not covered by the discrepancy-one families")
    out = []
    for a, b, c in itertools.product(range(1, max_weight + 1), repeat=3):
        for w in set(itertools.permutations((a, b, c, 1))):
            bw = BlowupWeight(1, w)
            if discrepancy(g, bw) == 1 and w not in out:
                out.append(w)
    return sorted(out, key=lambda w: (sum(w), tuple(-x for x in w)))
