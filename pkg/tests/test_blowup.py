from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import polynomials
from oracles import to_sympy
from terminal_flops.blowup import (
    BlowupChain,
    BlowupError,
    BlowupWeight,
    ChainStep,
    all_charts,
    blowup_chart,
    chain_discrepancy_table,
    discrepancy,
    format_chain,
    parse_chain_text,
    run_chain,
)
from terminal_flops.germ import germ, parse_germ_text

# rows E_1..E_8, columns W, W_1, ..., W_{j-1}
CE8_CHAIN_TABLE = [
    ["1"],
    ["2", "1/2"],
    ["3", "1", "1/3"],
    ["4", "3/2", "2/3", "1/4"],
    ["5", "2", "1", "1/2", "1/5"],
    ["2", "1", "2/3", "1/2", "2/5", "1/3"],
    ["4", "2", "4/3", "1", "4/5", "2/3", "1/2"],
    ["3", "3/2", "1", "3/4", "3/5", "1/2", "1/2", "1/2"],
]


def test_weight_parse_forms():
    assert BlowupWeight.parse("2:1,1,1,2") == BlowupWeight(2, (1, 1, 1, 2))
    assert BlowupWeight.parse("1/2(1,1,1,2)") == BlowupWeight(2, (1, 1, 1, 2))
    assert BlowupWeight.parse("(3,2,2,1)") == BlowupWeight(1, (3, 2, 2, 1))
    assert str(BlowupWeight(2, (3, 2, 3, 1))) == "1/2(3,2,3,1)"
    with pytest.raises(BlowupError):
        BlowupWeight(1, (1, 0, 1))


@pytest.mark.parametrize(
    "text,r,weights,w,expected",
    [
        ("x^2+y^3+z^5+u^7", 1, None, "1:3,2,2,1", Fraction(1)),
        ("x^2+y^2z+z^3+u^3", 1, None, "1:2,1,1,1", Fraction(1)),
        ("xy+z^2+u^2", 2, (1, 1, 1, 0), "2:1,1,1,2", Fraction(1, 2)),
        ("xy+z^2+u^2", 1, None, "1:1,1,1,1", Fraction(1)),
    ],
)
def test_discrepancy_examples(text, r, weights, w, expected):
    assert discrepancy(germ(text, r=r, weights=weights), BlowupWeight.parse(w)) == expected


def test_discrepancy_of_quotient_without_equation():
    g = germ([], ("x", "y", "z"), r=2, weights=(1, 1, 1))
    assert discrepancy(g, BlowupWeight.parse("2:1,1,1")) == Fraction(1, 2)


def test_incompatible_weight_rejected():
    g = germ("xy+z^2+u^2", r=2, weights=(1, 1, 1, 0))
    with pytest.raises(BlowupError):
        blowup_chart(g, BlowupWeight.parse("2:1,2,1,2"), "x")


def test_cE8_chart_z():
    ch = blowup_chart(germ("x^2+y^3+z^5+u^7"), BlowupWeight.parse("3,2,2,1"), "z")
    assert ch.germ.action.r == 2
    assert ch.germ.action.weights == (1, 0, 1, 1)
    assert ch.describe().startswith("x^2 + y^3 + z^4")
    assert ch.contains_origin


def test_ordinary_blowup_chart_by_hand():
    ch = blowup_chart(germ("xy+z^2+u^2"), BlowupWeight.parse("1,1,1,1"), "x")
    # x -> x, y -> xy, z -> xz, u -> xu, then divide by x^2
    assert ch.germ.equations[0] == germ("y+z^2+u^2").equations[0]


def test_cA2_axial_chart_is_smooth():
    g = germ("xy+z^2+u^2", r=2, weights=(1, 1, 1, 0))
    ch = blowup_chart(g, BlowupWeight.parse("2:1,1,1,2"), "u")
    assert ch.germ.equations[0].homogeneous_part(1)


def test_all_charts_cover_every_variable():
    charts = all_charts(germ("x^2+y^3+z^5+u^7"), BlowupWeight.parse("3,2,2,1"))
    assert [c.chart_variable for c in charts] == ["x", "y", "z", "u"]


@settings(max_examples=30, deadline=None)
@given(
    f=polynomials(max_terms=4, max_degree=3),
    w=st.tuples(*[st.integers(1, 3)] * 4),
    chart=st.sampled_from("xyzu"),
)
def test_chart_matches_sympy_substitution(f, w, chart):
    f = f + germ("x^2+y^2+z^2+u^2").equations[0]
    if f.constant_term() or f.homogeneous_part(1):
        return
    bw = BlowupWeight(1, w)
    ch = blowup_chart(germ(f), bw, chart)
    expr, syms = to_sympy(f)
    t = sympy.Symbol("t")
    v = "xyzu".index(chart)
    images = {s: (t ** w[j] if j == v else t ** w[j] * s) for j, s in enumerate(syms)}
    order = bw.order_numerator(f)
    expected = sympy.expand(expr.xreplace(images) / t**order).subs(t, syms[v])
    got, _ = to_sympy(ch.equations[0])
    assert sympy.expand(got - expected) == 0


def test_chain_text_round_trip(data_dir):
    text = (data_dir / "e8.chain").read_text()
    chain = parse_chain_text(text)
    assert len(chain) == 8
    assert parse_chain_text(format_chain(chain)) == chain
    assert chain.steps[7].base == 5 and chain.steps[7].base_chart == "y"


def test_chain_text_options():
    chain = parse_chain_text("blowup: chart=z weight=2:1,1,1,2 from=0 restrict=2 recenter: z->z+u\n# comment\n")
    step = chain.steps[0]
    assert step == ChainStep(BlowupWeight(2, (1, 1, 1, 2)), "z", 0, {"z": "z+u"}, None, 2)
    assert parse_chain_text(format_chain(chain)) == chain


@pytest.mark.parametrize("text", ["chart=z weight=1:1,1,1,1", "blowup: chart=z", "blowup: weight=1:1,1 chart=x recenter: z"])
def test_chain_text_errors(text):
    with pytest.raises(BlowupError):
        parse_chain_text(text)


def test_single_step_chain_equals_blowup_chart():
    g = germ("x^2+y^3+z^5+u^7")
    w = BlowupWeight(1, (3, 2, 2, 1))
    (res,) = run_chain(g, BlowupChain((ChainStep(w, "z"),)))
    assert res.chart.germ == blowup_chart(g, w, "z").germ
    assert res.discrepancy == 1


@pytest.fixture(scope="module")
def ce8_chain():
    from pathlib import Path

    data = Path(__file__).resolve().parent.parent / "data"
    g = parse_germ_text((data / "germ_e8.txt").read_text())
    return g, run_chain(g, parse_chain_text((data / "e8.chain").read_text()))


def test_ce8_chain_table(ce8_chain):
    g, results = ce8_chain
    table = chain_discrepancy_table(g, results)
    assert len(table) == 36
    for j, row in enumerate(CE8_CHAIN_TABLE, 1):
        assert [table[(j, i)] for i in range(j)] == [Fraction(v) for v in row]


def test_ce8_chain_subdiagonal_is_step_discrepancy(ce8_chain):
    g, results = ce8_chain
    table = chain_discrepancy_table(g, results)
    for r in results:
        assert table[(r.index, r.index - 1)] == r.discrepancy


def test_ce8_chain_intermediate_points(ce8_chain):
    from terminal_flops.classify import terminal_classify

    _, results = ce8_chain
    assert terminal_classify(results[0].chart.germ).kind == "cE/2"
    w4 = results[3].chart.germ
    assert terminal_classify(w4).name == "1/5(3,2,1)"
    assert results[-1].discrepancy == Fraction(1, 2)


def test_double_blowup_of_smooth_point():
    # a(E1,W) = 2, a(E2,W1) = 2, and E1 has order 1 along E2, so a(E2,W) = 2 + 2*1
    g = germ([], ("x", "y", "z"))
    chain = parse_chain_text("blowup: chart=x weight=1:1,1,1\nblowup: chart=x weight=1:1,1,1\n")
    table = chain_discrepancy_table(g, run_chain(g, chain))
    assert table == {(1, 0): 2, (2, 1): 2, (2, 0): 4}
