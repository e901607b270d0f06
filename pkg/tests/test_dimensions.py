from fractions import Fraction
from itertools import product

import pytest

from qjacobi.algebra import Subalgebra, basis_monomials
from qjacobi import dimensions as dm


def _partitions_with_parts(n, parts):
    # independent brute force over every exponent box
    bounds = [range(n // w + 1) for w in parts]
    return sum(1 for es in product(*bounds) if sum(e * w for e, w in zip(es, parts)) == n)


def test_generator_weights():
    assert dm.generator_weights("JS") == (2, 3, 4)
    assert dm.generator_weights("JS0inf") == (1, 2, 3, 4)
    assert dm.generator_weights("JSinf0") == (2, 2, 3, 4)
    assert dm.generator_weights("JSinf") == (1, 2, 2, 3, 4)


def test_nearest_int_rounds_halves_down():
    assert dm.nearest_int(Fraction(1, 2)) == 0
    assert dm.nearest_int(Fraction(3, 2)) == 1
    assert dm.nearest_int(Fraction(-1, 2)) == -1
    assert dm.nearest_int(Fraction(3, 4)) == 1
    assert dm.nearest_int(Fraction(10, 9)) == 1
    assert dm.nearest_int(Fraction(5)) == 5


def test_js_table():
    table = {0: 1, 1: 0, 2: 1, 4: 2, 6: 3, 8: 4, 10: 5, 12: 7}
    series = dm.dims_by_series("JS", 12)
    for k, v in table.items():
        assert series[k] == v
        assert dm.dims_by_enumeration("JS", k) == v
        assert dm.ds_closed(k) == v


def test_series_js0inf_small():
    assert dm.dims_by_series("JS0inf", 6) == [1, 1, 2, 3, 5, 6, 9]


def test_enumeration_examples():
    assert dm.dims_by_enumeration("JS", 6) == 3
    assert dm.dims_by_enumeration("JS", 5) == 1
    assert dm.dims_by_enumeration("JSinf", 0) == 1
    assert dm.dims_by_enumeration("JS", -3) == 0


@pytest.mark.parametrize("which", list(Subalgebra))
def test_enumeration_matches_independent_count_and_basis(which):
    parts = dm.generator_weights(which)
    for k in range(0, 25):
        n = dm.dims_by_enumeration(which, k)
        assert n == _partitions_with_parts(k, parts)
        assert n == len(basis_monomials(k, which))


def test_ds_closed_examples():
    assert dm.ds_closed(12) == 7
    assert dm.ds_closed(1) == 0
    assert dm.ds_closed(37) == dm.dims_by_enumeration("JS", 37)
    with pytest.raises(ValueError):
        dm.ds_closed(-1)


@pytest.mark.parametrize("which", list(Subalgebra))
def test_closed_form_agrees_with_enumeration(which):
    for k in range(0, 101, 3):
        assert dm.dims_closed_form(which, k) == dm.dims_by_enumeration(which, k)


def test_closed_form_examples():
    assert dm.dims_closed_form("JSinf", 0) == 1
    assert all(dm.dims_closed_form("JS", k) == dm.ds_closed(k) for k in range(101))
    with pytest.raises(ValueError):
        dm.dims_closed_form("JS", -2)


def test_recurrences():
    d = dm.dims_by_series("JS", 13)
    assert d[3] == d[0] == 1
    assert d[13] == d[1] + 5 == 5
    assert dm.ds_recurrences_check(200)


def test_modular_sum_route():
    assert [dm.modular_dim(j) for j in (0, 2, 4, 12, 14, 24)] == [1, 0, 1, 2, 1, 3]
    assert all(dm.ds_via_modular(k) == dm.dims_by_enumeration("JS", k) for k in range(80))


def test_alcuin():
    assert dm.alcuin(3) == 1
    assert dm.alcuin(15) == 7
    assert [dm.alcuin(n) for n in range(3, 13)] == [1, 0, 1, 1, 2, 1, 3, 2, 4, 3]
    assert dm.alcuin_series(15)[15] == 7
    assert dm.ds_vs_alcuin_check(200)


def test_compact_formulas():
    assert dm.compact_factored(0) == 1
    assert dm.compact_factored(1) == 1
    assert dm.compact_formula_check(120)


def test_reports_agree_and_are_ordered():
    for which in Subalgebra:
        reports = dm.dimension_reports(which, 40)
        assert [r.k for r in reports] == list(range(41))
        assert all(r.agree for r in reports)
    js = dm.dimension_reports("JS", 12)[12]
    assert set(js.values) == {"enumeration", "series", "closed", "quadratic", "modular_sum", "alcuin"}
    assert js.values["series"] == 7


def test_inclusions_are_monotone():
    kmax = 60
    js, a, b, full = (dm.dims_by_series(w, kmax) for w in ("JS", "JS0inf", "JSinf0", "JSinf"))
    for k in range(kmax + 1):
        assert 0 <= js[k] <= a[k] <= full[k]
        assert js[k] <= b[k] <= full[k]


def test_series_rejects_negative():
    with pytest.raises(ValueError):
        dm.dims_by_series("JS", -1)
