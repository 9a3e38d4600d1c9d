import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from terminal_flops.germ import (
    CoordinateChange,
    CyclicAction,
    GermError,
    apply_change,
    change_from_text,
    germ,
    make_germ,
    normal_form_cD,
    parse_germ_text,
    singular_locus_dimension_bound,
)
from terminal_flops.poly import Polynomial, parse_poly

V = ("x", "y", "z", "u")
HALF = CyclicAction(2, (1, 1, 1, 0))


def test_make_germ_examples():
    g = make_germ(V, None, ["x^2+y^3+z^5+u^7"])
    assert g.is_hypersurface and g.index == 1
    assert make_germ(V, HALF, ["xy+z^2+u^2"]).index == 2
    make_germ(V, HALF, ["x+z^3"])
    with pytest.raises(GermError, match="equivariance violation.*z\\^2"):
        make_germ(V, HALF, ["x+z^2"])


@pytest.mark.parametrize("eqs, msg", [
    (["1+x"], "does not vanish"),
    (["x", "y", "z"], "at most two"),
    ([], "dimension mismatch"),
])
def test_make_germ_rejects(eqs, msg):
    with pytest.raises(GermError, match=msg):
        make_germ(V, None, eqs)


def test_action_normalisation():
    act = CyclicAction(4, (5, -1, 2, 4))
    assert act.weights == (1, 3, 2, 0)
    assert CyclicAction(4, (2, 2, 0)).reduced() == CyclicAction(2, (1, 1, 0))
    assert CyclicAction(5, (2, 3, 1)).equivalent(CyclicAction(5, (4, 1, 2)))


def test_apply_change_examples():
    g = germ("x^2+y^2*z+y^2*u^2")
    out = apply_change(g, change_from_text(V, {"z": "z-u^2"}))
    assert out.equations[0] == parse_poly("x^2+y^2*z", V)
    assert apply_change(g, CoordinateChange({})) == g
    h = germ("xy+z^2+u^3")
    assert apply_change(h, change_from_text(V, {"x": "y", "y": "x"})) == h


def test_change_validation():
    g = germ("xy+z^2+u^2", r=2, weights=(1, 1, 1, 0))
    with pytest.raises(GermError, match="singular linear part"):
        apply_change(g, change_from_text(V, {"x": "y"}))
    with pytest.raises(GermError, match="semi-invariant"):
        apply_change(g, change_from_text(V, {"x": "x+u"}))


@st.composite
def invertible_matrices(draw):
    """Products of unit lower and upper triangular integer matrices, scaled by a diagonal."""
    entries = st.lists(st.integers(-2, 2), min_size=6, max_size=6)
    low, up = draw(entries), draw(entries)
    diag = draw(st.lists(st.sampled_from([1, -1, 2, 3]), min_size=4, max_size=4))
    L, U = sympy.eye(4), sympy.eye(4)
    pairs = [(i, j) for i in range(4) for j in range(i)]
    for (i, j), a, b in zip(pairs, low, up):
        L[i, j] = a
        U[j, i] = b
    return L * sympy.diag(*diag) * U


@settings(max_examples=25, deadline=None)
@given(invertible_matrices(), st.sampled_from(["x^2+y^3+z^5+u^7", "xy+z^2+u^3", "x^2+y^2*z+z^3+u^4"]))
def test_linear_change_then_inverse(m, eq):
    inv = m.inv()

    def change(mat):
        imgs = {}
        for i, v in enumerate(V):
            terms = {tuple(1 if k == j else 0 for k in range(4)): Fraction(int(mat[i, j].p), int(mat[i, j].q))
                     for j in range(4) if mat[i, j] != 0}
            imgs[v] = Polynomial(V, terms)
        return CoordinateChange(imgs, 40)

    g = germ(eq)
    back = apply_change(apply_change(g, change(m)), change(inv))
    assert back == g


@settings(max_examples=30, deadline=None)
@given(st.permutations(range(4)))
def test_acceptance_independent_of_term_order(perm):
    terms = ["xy", "z^2", "u^2", "z^2*u^2"]
    make_germ(V, HALF, [" + ".join(terms[i] for i in perm)])
    with pytest.raises(GermError):
        make_germ(V, HALF, [" + ".join([terms[i] for i in perm] + ["x*u"])])


def test_germ_file_round_trip():
    text = "ring: x, y, z, u\ngroup: 1/2 (1, 1, 1, 0)\nequation: xy + z^2 + u^2  # cA/2\n"
    g = parse_germ_text(text)
    assert g.action == HALF
    assert parse_germ_text(g.text()) == g
    with pytest.raises(GermError, match="no 'ring:'"):
        parse_germ_text("equation: x")
    with pytest.raises(GermError, match="line 2"):
        parse_germ_text("ring: x, y, z, u\ngroup: 1/2 1,1,1,0\n")


@pytest.mark.parametrize("eq, verdict", [
    ("x^2+y^2+z^2+u^2", "isolated"),
    ("x^2+y^2*z", None),
    ("x^2+y^3+z^5+u^7", "isolated"),
])
def test_singular_locus(eq, verdict):
    ring = ("x", "y", "z") if eq == "x^2+y^2*z" else V
    if verdict is None:
        g = make_germ(("x", "y", "z", "u"), None, [eq])
        assert singular_locus_dimension_bound(g) == "non-isolated"
    else:
        assert singular_locus_dimension_bound(make_germ(ring, None, [eq])) == verdict


@pytest.mark.parametrize("eq, lam, k", [
    ("x^2+y^2*z+z^3+u^4", 0, None),
    ("x^2+y^2*z+y*u^3+u^5", 1, 3),
])
def test_normal_form_fixed_points(eq, lam, k):
    res = normal_form_cD(germ(eq))
    assert res.germ == germ(eq)
    assert res.lam == lam and res.k == k
    assert res.metadata()["truncation_degree"] == 24


def test_normal_form_hand_computed():
    # y^2 z + y^2 u^2 = y^2 (z + u^2): z -> z - u^2 turns z^3 into (z - u^2)^3
    res = normal_form_cD(germ("x^2+y^2*z+y^2*u^2+z^3"))
    assert res.germ.equations[0] == parse_poly("x^2+y^2*z+(z-u^2)^3", V)


def test_normal_form_strict_progress_and_idempotence():
    res = normal_form_cD(germ("x^2+y^2*z+y^3*u+y^4*u^2+z^3+u^7"))
    gaps = [p for p in res.progress if p is not None]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    again = normal_form_cD(res.germ)
    assert again.germ == res.germ
    f = res.germ.equations[0]
    # shape x^2 + y^2 z + lambda y u^k + g(z, u)
    rest = f - parse_poly("x^2+y^2*z", V)
    assert all(e[0] == 0 and (e[1] == 0 or (e[1] == 1 and e[2] == 0 and e[3] == res.k)) for e in rest.terms)


@pytest.mark.parametrize("eq, msg", [
    ("x^2+y^2+z^2+u^2", "not of cD type"),
])
def test_normal_form_errors(eq, msg):
    with pytest.raises(GermError, match=msg):
        normal_form_cD(germ(eq))
    with pytest.raises(GermError, match="trivial action"):
        normal_form_cD(germ("xy+z^2+u^2", r=2, weights=(1, 1, 1, 0)))
