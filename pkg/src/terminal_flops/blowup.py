"""Weighted blow-ups of quotient germs and discrepancy bookkeeping along chains.

A weight ``(1/r)(b_1, ..., b_n)`` on a germ with action ``1/r(a)`` is
compatible when ``b = k a mod r`` for a unit ``k``.  The chart ``U_v`` is
``A^n / mu_{b_v}`` with characters ``-b_j`` (``j != v``) and ``r`` at ``v``,
and the coordinates pull back as ``x_v = y_v^(b_v/r)``,
``x_j = y_j y_v^(b_j/r)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .germ import CoordinateChange, CyclicAction, Germ, GermError, make_germ
from .poly import DEFAULT_TRUNCATION, Polynomial, parse_poly, substitute, truncate


class BlowupError(GermError):
    pass


@dataclass(frozen=True)
class BlowupWeight:
    r: int
    numerators: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "numerators", tuple(int(b) for b in self.numerators))
        if self.r < 1:
            raise BlowupError("weight denominator must be positive")
        if any(b <= 0 for b in self.numerators):
            raise BlowupError(f"weight numerators must be positive: {self.numerators}")

    @classmethod
    def parse(cls, text: str) -> "BlowupWeight":
        """``r:b1,b2,...`` or ``b1,b2,...`` or ``1/r(b1,...)``."""
        text = text.strip()
        m = re.fullmatch(r"1\s*/\s*(\d+)\s*\(([^)]*)\)", text)
        if m:
            return cls(int(m.group(1)), tuple(int(x) for x in m.group(2).split(",")))
        if ":" in text:
            r, nums = text.split(":", 1)
            return cls(int(r), tuple(int(x) for x in nums.split(",")))
        return cls(1, tuple(int(x) for x in text.strip("()").split(",")))

    def values(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(b, self.r) for b in self.numerators)

    def order_numerator(self, f: Polynomial) -> int:
        if f.is_zero():
            raise BlowupError("zero equation has infinite weighted order")
        return min(sum(e * b for e, b in zip(exp, self.numerators)) for exp in f.terms)

    def order(self, f: Polynomial) -> Fraction:
        return Fraction(self.order_numerator(f), self.r)

    def permuted(self, perm: Sequence[int]) -> "BlowupWeight":
        return BlowupWeight(self.r, tuple(self.numerators[i] for i in perm))

    def __str__(self) -> str:
        nums = ",".join(map(str, self.numerators))
        return f"({nums})" if self.r == 1 else f"1/{self.r}({nums})"


def check_compatible(g: Germ, w: BlowupWeight) -> int:
    """Return ``k`` with ``b = k a mod r``; raise when the weight is not in the lattice.

    ``k`` need not be a unit: ``k = 0`` is an integral weight on a quotient
    germ, as in the cD/2 rows with weights like ``(2b, 2b, 1, 1)``.
    """
    if len(w.numerators) != g.ambient_dim:
        raise BlowupError(f"weight {w} has {len(w.numerators)} entries for {g.ambient_dim} variables")
    act = g.action
    if w.r == 1:
        return 0 if act.r > 1 else 1
    if act.r != w.r:
        raise BlowupError(f"incompatible weight: denominator {w.r} but the action has index {act.r}")
    for k in [*act.units(), *range(w.r)]:
        if all((b - k * a) % w.r == 0 for b, a in zip(w.numerators, act.weights)):
            return k
    raise BlowupError(f"incompatible weight: {w} does not reduce to a multiple of {act}")


def discrepancy(g: Germ, w: BlowupWeight) -> Fraction:
    """``sum(w) - sum(wt f_i) - 1`` for the exceptional divisor of the blow-up."""
    if len(w.numerators) != g.ambient_dim:
        raise BlowupError(f"weight {w} has {len(w.numerators)} entries for {g.ambient_dim} variables")
    total = sum(w.numerators) - sum(w.order_numerator(f) for f in g.equations)
    return Fraction(total, w.r) - 1


def chart_action(w: BlowupWeight, v: int, action: CyclicAction | None = None) -> CyclicAction:
    """Residual action on the chart of ``v``.

    The chart group is ``N / N'`` with ``N = Z^n + Z a/r`` and ``N'`` spanned
    by the cone generators ``e_j`` (``j != v``) and the weight.  Characters are
    the coordinates of ``e_v`` and ``a/r`` in that basis.  The chart variable
    is put at character ``-1`` whenever it is a unit.
    """
    b = w.numerators
    n = len(b)
    bv = b[v]
    r = w.r
    gens = [[Fraction(-b[j], bv) if j != v else Fraction(r, bv) for j in range(n)]]
    if action is not None and action.r > 1:
        ra = action.r
        a = [x % ra for x in action.weights]
        gens.append([Fraction(a[j] * bv - a[v] * b[j], ra * bv) if j != v else Fraction(a[v] * r, ra * bv)
                     for j in range(n)])
    den = 1
    for gvec in gens:
        for c in gvec:
            den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [tuple(int(c * den) % den for c in gvec) for gvec in gens]
    group = {tuple([0] * n)}
    frontier = list(group)
    while frontier:
        nxt = []
        for el in frontier:
            for gvec in ints:
                s2 = tuple((x + y) % den for x, y in zip(el, gvec))
                if s2 not in group:
                    group.add(s2)
                    nxt.append(s2)
        frontier = nxt
    order = len(group)
    if order == 1:
        return CyclicAction(1, (0,) * n)
    gen = None
    for el in [*ints, *sorted(group)]:
        k = 1
        cur = el
        while any(cur):
            cur = tuple((x + y) % den for x, y in zip(cur, el))
            k += 1
        if k == order:
            gen = el
            break
    if gen is None:
        raise BlowupError(f"chart group of {w} at {v} is not cyclic")
    act = CyclicAction(order, tuple(x * order // den for x in gen))
    cv = act.weights[v]
    if math.gcd(cv, order) == 1:
        act = act.rescaled((-pow(cv, -1, order)) % order)
    return act


@dataclass(frozen=True)
class ChartResult:
    chart_variable: str
    variables: tuple[str, ...]
    action: CyclicAction
    equations: tuple[Polynomial, ...]
    weight: BlowupWeight
    orders: tuple[int, ...]

    @property
    def exceptional_equation(self) -> str:
        return self.chart_variable

    @property
    def germ(self) -> Germ:
        """The chart at its origin; raises when the origin is off the proper transform."""
        return make_germ(self.variables, self.action, self.equations)

    @property
    def contains_origin(self) -> bool:
        return all(not f.constant_term() for f in self.equations)

    def substitution(self) -> dict[str, dict[str, Fraction]]:
        """Original coordinates as Puiseux monomials in the chart coordinates."""
        v = self.variables.index(self.chart_variable)
        out = {}
        for j, name in enumerate(self.variables):
            exps = {self.chart_variable: Fraction(self.weight.numerators[j], self.weight.r)}
            if j != v:
                exps[name] = Fraction(1)
            out[name] = exps
        return out

    def describe(self) -> str:
        eqs = ", ".join(str(f) for f in self.equations) or "(no equations)"
        if self.action.reduced().r == 1:
            return eqs
        return f"{eqs} / {self.action}"


def _chart_exponent(exp, nums, r, v, m) -> tuple[int, ...]:
    total = sum(e * b for e, b in zip(exp, nums)) - m
    if total % r:
        raise BlowupError("equation is not semi-invariant for the weight")
    out = list(exp)
    out[v] = total // r
    return tuple(out)


def blowup_chart(g: Germ, w: BlowupWeight, chart: str) -> ChartResult:
    """Chart ``U_chart`` of the weighted blow-up of ``g`` with weight ``w``."""
    check_compatible(g, w)
    if chart not in g.variables:
        raise BlowupError(f"unknown chart variable {chart!r}")
    v = g.variables.index(chart)
    nums = w.numerators
    new_eqs = []
    orders = []
    for f in g.equations:
        m = w.order_numerator(f)
        terms = {_chart_exponent(e, nums, w.r, v, m): c for e, c in f.items()}
        new = Polynomial(g.variables, terms)
        if new.is_zero():
            raise BlowupError("zero equation after transform")
        new_eqs.append(new)
        orders.append(m)
    return ChartResult(chart, g.variables, chart_action(w, v, g.action), tuple(new_eqs), w, tuple(orders))


def all_charts(g: Germ, w: BlowupWeight) -> list[ChartResult]:
    return [blowup_chart(g, w, v) for v in g.variables]


# elimination of smooth directions


def eliminate_linear(g: Germ, degree: int = DEFAULT_TRUNCATION) -> tuple[Germ, list[tuple[str, Polynomial]]]:
    """Solve away every variable that appears linearly in an equation.

    Returns the reduced germ and the list of ``(variable, image)`` pairs, each
    image written in the remaining variables.
    """
    variables = list(g.variables)
    eqs = list(g.equations)
    weights = list(g.action.weights)
    solved: list[tuple[str, Polynomial]] = []
    while True:
        hit = None
        for k, f in enumerate(eqs):
            lin = f.homogeneous_part(1)
            for i, name in enumerate(variables):
                c = lin.coefficient(tuple(1 if j == i else 0 for j in range(len(variables))))
                if c:
                    hit = (k, i, c)
                    break
            if hit:
                break
        if hit is None:
            break
        k, i, c = hit
        name = variables[i]
        f = eqs.pop(k)
        rest = f - Polynomial.variable(tuple(variables), name).scale(c)
        phi = Polynomial.zero(tuple(variables))
        for _ in range(degree + 1):
            nxt = substitute(rest, {name: phi}, tuple(variables), bound=degree).scale(-1 / c)
            if nxt == phi:
                break
            phi = nxt
        keep = tuple(v for v in variables if v != name)
        phi_k = _drop_variable(phi, tuple(variables), name)
        eqs = [
            _drop_variable(substitute(e, {name: phi}, tuple(variables), bound=degree), tuple(variables), name)
            for e in eqs
        ]
        solved = [(n, _drop_variable(substitute(p.embed(tuple(variables)), {name: phi}, tuple(variables), bound=degree),
                                     tuple(variables), name)) for n, p in solved]
        solved.append((name, phi_k))
        weights.pop(i)
        variables = list(keep)
    action = CyclicAction(g.action.r, tuple(weights))
    return Germ(tuple(variables), action, tuple(eqs)), solved


def _drop_variable(p: Polynomial, variables: tuple[str, ...], name: str) -> Polynomial:
    i = variables.index(name)
    if any(e[i] for e in p.terms):
        raise BlowupError(f"{name} still occurs after elimination")
    keep = tuple(v for v in variables if v != name)
    return Polynomial(keep, {e[:i] + e[i + 1:]: c for e, c in p.items()})


# chains


@dataclass(frozen=True)
class ChainStep:
    weight: BlowupWeight
    chart: str
    base: int | None = None
    recenter: Mapping[str, str] = field(default_factory=dict)
    base_chart: str | None = None
    restrict: int | None = None


@dataclass(frozen=True)
class BlowupChain:
    steps: tuple[ChainStep, ...]

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class StepResult:
    index: int
    base: int
    germ: Germ
    recentered: Mapping[str, Polynomial]
    eliminated: tuple[tuple[str, Polynomial], ...]
    chart: ChartResult
    discrepancy: Fraction
    base_chart: ChartResult | None = None


_STEP_RE = re.compile(r"^\s*blowup\s*:\s*(.*)$")


def parse_chain_text(text: str) -> BlowupChain:
    """One ``blowup: chart=<v> weight=<r>:<b...> [from=<k>[:<v>]] [recenter: v->expr, ...]`` per line.

    ``from=k:v`` continues from chart ``v`` of step ``k`` instead of the chart
    that step recorded.  ``restrict=d`` keeps only the subgroup of order ``d``
    of the chart group, which is the stabilizer of a point off the origin.
    """
    steps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _STEP_RE.match(line)
        if not m:
            raise BlowupError(f"line {lineno}: expected 'blowup: ...'")
        body = m.group(1)
        recenter: dict[str, str] = {}
        if "recenter:" in body:
            body, rec = body.split("recenter:", 1)
            for item in rec.split(","):
                item = item.strip()
                if not item:
                    continue
                if "->" not in item:
                    raise BlowupError(f"line {lineno}: bad recentring {item!r}")
                var, expr = item.split("->", 1)
                recenter[var.strip()] = expr.strip()
        fields = dict(tok.split("=", 1) for tok in body.split() if "=" in tok)
        try:
            weight = BlowupWeight.parse(fields["weight"])
            chart = fields["chart"]
        except KeyError as exc:
            raise BlowupError(f"line {lineno}: missing {exc.args[0]}=") from None
        base = base_chart = None
        if "from" in fields:
            base_text, _, base_chart = fields["from"].partition(":")
            base = int(base_text)
            base_chart = base_chart or None
        restrict = int(fields["restrict"]) if "restrict" in fields else None
        steps.append(ChainStep(weight, chart, base, recenter, base_chart, restrict))
    return BlowupChain(tuple(steps))


def format_chain(chain: BlowupChain) -> str:
    """Inverse of ``parse_chain_text``."""
    lines = []
    for step in chain.steps:
        w = step.weight
        parts = [f"blowup: chart={step.chart} weight={w.r}:{','.join(map(str, w.numerators))}"]
        if step.base is not None:
            parts.append(f"from={step.base}" + (f":{step.base_chart}" if step.base_chart else ""))
        if step.restrict is not None:
            parts.append(f"restrict={step.restrict}")
        if step.recenter:
            parts.append("recenter: " + ", ".join(f"{v}->{e}" for v, e in step.recenter.items()))
        lines.append(" ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")


def run_chain(g: Germ, chain: BlowupChain, degree: int = DEFAULT_TRUNCATION) -> list[StepResult]:
    """Materialize every step; step ``k`` blows up the origin of its base chart."""
    results: list[StepResult] = []
    for k, step in enumerate(chain.steps, 1):
        base = k - 1 if step.base is None else step.base
        if not 0 <= base < k:
            raise BlowupError(f"step {k}: base step {base} is not an earlier step")
        chart = None
        if base == 0:
            current = g
        else:
            prev = results[base - 1]
            chart = prev.chart
            if step.base_chart and step.base_chart != chart.chart_variable:
                chart = blowup_chart(prev.germ, prev.chart.weight, step.base_chart)
            if not chart.contains_origin and not step.recenter:
                raise BlowupError(f"step {k}: the origin of chart {chart.chart_variable} is not on the proper transform")
            current = Germ(chart.variables, chart.action, chart.equations)
        if step.restrict is not None:
            d = step.restrict
            if d < 1 or current.action.r % d:
                raise BlowupError(f"step {k}: {d} does not divide the order of {current.action}")
            current = Germ(current.variables, CyclicAction(d, current.action.weights), current.equations)
        images: dict[str, Polynomial] = {}
        if step.recenter:
            images = {v: parse_poly(e, current.variables) for v, e in step.recenter.items()}
            change = CoordinateChange(images, degree)
            try:
                change.validate(current)
                new = [substitute(f, change.full(current.variables), current.variables) for f in current.equations]
                current = make_germ(current.variables, current.action, new)
            except GermError as exc:
                raise BlowupError(f"step {k}: recentring point not on the germ ({exc})") from None
        else:
            current = make_germ(current.variables, current.action, current.equations)
        eliminated: tuple = ()
        if len(step.weight.numerators) < current.ambient_dim:
            current, solved = eliminate_linear(current, degree)
            eliminated = tuple(solved)
        base_chart = None if base == 0 else results[base - 1].chart
        if step.base_chart and base:
            base_chart = blowup_chart(results[base - 1].germ, results[base - 1].chart.weight, step.base_chart)
        try:
            new_chart = blowup_chart(current, step.weight, step.chart)
        except BlowupError as exc:
            raise BlowupError(f"step {k}: {exc}") from None
        results.append(StepResult(k, base, current, images, eliminated, new_chart,
                                  discrepancy(current, step.weight), base_chart))
    return results


# valuations along chains


Key = tuple  # sorted (name, exponent) pairs


def _key(d: Mapping[str, Fraction]) -> Key:
    return tuple(sorted((k, Fraction(v)) for k, v in d.items() if v))


class _Puiseux:
    """A product of powers ``P_k^(q_k)`` of polynomials with rational exponents.

    Valuations are multiplicative, so the order of the product is
    ``sum q_k * v(P_k)`` and factors never need to be multiplied out.
    """

    def __init__(self, factors: list[tuple[dict[Key, Fraction], Fraction]]):
        self.factors = factors

    @classmethod
    def variable(cls, name: str) -> "_Puiseux":
        return cls([({((name, Fraction(1)),): Fraction(1)}, Fraction(1))])

    def substitute_monomials(self, images: dict[str, dict[str, Fraction]]) -> "_Puiseux":
        out = []
        for terms, q in self.factors:
            new: dict[Key, Fraction] = {}
            for key, c in terms.items():
                acc: dict[str, Fraction] = {}
                for name, e in key:
                    for n2, e2 in images.get(name, {name: Fraction(1)}).items():
                        acc[n2] = acc.get(n2, Fraction(0)) + e * e2
                k2 = _key(acc)
                new[k2] = new.get(k2, Fraction(0)) + c
            out.append(({k: c for k, c in new.items() if c}, q))
        return _Puiseux(out)

    def substitute_polynomials(self, images: dict[str, Polynomial], degree: int) -> "_Puiseux":
        out = []
        for terms, q in self.factors:
            touched = any(name in images for key in terms for name, _ in key)
            if not touched:
                out.append((terms, q))
                continue
            if len(terms) == 1:
                # split a monomial into one factor per variable
                (key, c), = terms.items()
                rest = {}
                for name, e in key:
                    if name in images:
                        out.append((_poly_terms(images[name]), q * e))
                    else:
                        rest[name] = e
                out.append(({_key(rest): c}, q))
                continue
            new: dict[Key, Fraction] = {}
            for key, c in terms.items():
                term = {(): Fraction(c)}
                for name, e in key:
                    if name not in images:
                        term = {_key({**dict(k), name: dict(k).get(name, Fraction(0)) + e}): v for k, v in term.items()}
                        continue
                    if e.denominator != 1 or e < 0:
                        raise BlowupError(f"valuation evaluation fails: {name} appears with exponent {e}")
                    img = _poly_terms(truncate(images[name] ** int(e), degree))
                    nxt: dict[Key, Fraction] = {}
                    for k, v in term.items():
                        for k2, c2 in img.items():
                            d = dict(k)
                            for n2, x in k2:
                                d[n2] = d.get(n2, Fraction(0)) + x
                            kk = _key(d)
                            nxt[kk] = nxt.get(kk, Fraction(0)) + v * c2
                    term = nxt
                for k, v in term.items():
                    new[k] = new.get(k, Fraction(0)) + v
            out.append(({k: c for k, c in new.items() if c}, q))
        return _Puiseux(out)

    def weighted_order(self, variables: Sequence[str], w: BlowupWeight) -> Fraction:
        wt = dict(zip(variables, w.values()))
        total = Fraction(0)
        for terms, q in self.factors:
            if not terms:
                raise BlowupError("valuation of the zero function")
            best = None
            for key in terms:
                if not all(n in wt for n, _ in key):
                    raise BlowupError("valuation evaluation fails: substitution chain broken")
                val = sum((wt[n] * e for n, e in key), Fraction(0))
                best = val if best is None or val < best else best
            total += q * best
        return total


def _poly_terms(p: Polynomial) -> dict[Key, Fraction]:
    return {_key(dict(zip(p.vars, e))): c for e, c in p.items()}


def _lineage(results: list[StepResult], j: int) -> list[int]:
    """Steps whose chart the base of step ``j`` descends from, oldest first."""
    out = []
    b = results[j - 1].base
    while b:
        out.append(b)
        b = results[b - 1].base
    return out[::-1]


def divisor_valuation(results: list[StepResult], j: int, i: int, degree: int = DEFAULT_TRUNCATION) -> Fraction:
    """``v_{E_j}(E_i)`` for ``i < j``: order of the local equation of ``E_i`` along ``E_j``."""
    lineage = _lineage(results, j)
    if i not in lineage:
        return Fraction(0)
    path = lineage[lineage.index(i) + 1:] + [j]
    func = _Puiseux.variable(results[path[0] - 1].base_chart.chart_variable)
    for k, child in zip(path, path[1:] + [None]):
        step = results[k - 1]
        if step.recentered:
            func = func.substitute_polynomials(dict(step.recentered), degree)
        if step.eliminated:
            func = func.substitute_polynomials(dict(step.eliminated), degree)
        if child is not None:
            func = func.substitute_monomials(results[child - 1].base_chart.substitution())
    step = results[j - 1]
    return func.weighted_order(step.germ.variables, step.chart.weight)


def chain_discrepancy_table(g: Germ, chain: BlowupChain | list[StepResult]) -> dict[tuple[int, int], Fraction]:
    """Entries ``(j, i) -> a(E_j, W_i)`` for ``0 <= i < j``."""
    results = run_chain(g, chain) if isinstance(chain, BlowupChain) else chain
    n = len(results)
    table: dict[tuple[int, int], Fraction] = {}
    for j in range(1, n + 1):
        table[(j, j - 1)] = results[j - 1].discrepancy
        for i in range(j - 2, -1, -1):
            v = divisor_valuation(results, j, i + 1)
            table[(j, i)] = table[(j, i + 1)] + table[(i + 1, i)] * v
    return table
