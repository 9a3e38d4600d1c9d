"""Germs used across the invariant and acceptance tests."""

from terminal_flops.germ import germ
from terminal_flops.invariants import TABLE_ROWS


def table_germs():
    """Representatives of every G and N row that is given as a hypersurface."""
    out = {}
    for (table, row), spec in TABLE_ROWS.items():
        if table in ("G", "N") and spec.equation is not None and spec.skip_reason is None:
            out[f"{table}{row}"] = spec.germ()
    return out


EXTRA = {
    "1/2(1,1,1)": germ([], ("x", "y", "z"), r=2, weights=(1, 1, 1)),
    "1/3(1,2,1)": germ([], ("x", "y", "z"), r=3, weights=(1, 2, 1)),
    "1/5(3,2,1)": germ([], ("x", "y", "z"), r=5, weights=(3, 2, 1)),
    "cA2": germ("xy+z^3+u^3"),
    "cA/3": germ("xy+z^3+u^2", r=3, weights=(1, 2, 1, 0)),
}


def corpus():
    return {**table_germs(), **EXTRA}
