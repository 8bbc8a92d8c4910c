import csv
import io
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from bottgit.git_stability import (
    MAX_STRATA_N,
    Polarization,
    StrictlySemistableError,
    balanced_subset,
    even_sum_degrees,
    fixed_point_weight_report,
    has_strictly_semistable,
    is_unstable_pattern,
    min_heavy_excess,
    quotient_is_empty,
    scan_degree_claim,
    stable_grid,
    strata,
)


def brute_sss(d):
    total = sum(d)
    return any(2 * sum(c) == total for r in range(len(d) + 1) for c in itertools.combinations(d, r))


def test_sss_examples():
    assert not has_strictly_semistable((1, 1, 1, 1, 1))
    assert has_strictly_semistable((1, 1, 1, 1))
    assert balanced_subset((1, 1, 1, 1)) == (1, 2)
    assert not has_strictly_semistable((2, 2, 2, 2, 2))


def test_strata_examples():
    s = strata((2, 2, 2, 2, 2))
    assert {len(x.heavy_set) for x in s} == {3, 4, 5}
    assert len(s) == 10 + 5 + 1
    for x in s:
        assert x.mu == 4 * len(x.heavy_set) - 10
        assert x.eta == 2 * (len(x.heavy_set) - 1)
    assert [x.mu for x in s] == sorted((x.mu for x in s), reverse=True)
    assert s[0].heavy_set == (1, 2, 3, 4, 5) and s[0].mu == 10 and s[0].eta == 8
    t = strata((1, 1, 1, 1, 1))
    assert all(len(x.heavy_set) >= 3 for x in t)
    assert all(x.mu == 1 and x.eta == 4 for x in t if len(x.heavy_set) == 3)


def test_strata_order_is_colex_within_mu():
    s = [x.heavy_set for x in strata((2, 2, 2, 2, 2)) if x.mu == 2]
    assert s[:4] == [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]


def test_strata_errors():
    with pytest.raises(StrictlySemistableError):
        strata((1, 1, 1, 1))
    with pytest.raises(ValueError):
        strata((1,) * (MAX_STRATA_N + 1))
    with pytest.raises(ValueError):
        Polarization((1, 0, 2))
    with pytest.raises(ValueError):
        Polarization.parse("1,x")


degree_vectors = st.lists(st.integers(1, 9), min_size=1, max_size=8)


@settings(max_examples=200, deadline=None)
@given(degree_vectors, st.randoms(use_true_random=False))
def test_sss_against_brute_force_and_permutations(d, rnd):
    assert has_strictly_semistable(d) == brute_sss(d)
    e = list(d)
    rnd.shuffle(e)
    assert has_strictly_semistable(e) == has_strictly_semistable(d)
    w = balanced_subset(d)
    assert (w is not None) == brute_sss(d)
    if w is not None:
        assert 2 * sum(d[i - 1] for i in w) == sum(d)


@settings(max_examples=100, deadline=None)
@given(degree_vectors, st.data())
def test_strata_cover_the_unstable_locus(d, data):
    if has_strictly_semistable(d):
        return
    s = strata(d)
    total = sum(d)
    for x in s:
        assert x.mu > 0 and x.eta == 2 * (len(x.heavy_set) - 1)
        assert x.mu == 2 * sum(d[i - 1] for i in x.heavy_set) - total
    assert s[0].heavy_set == tuple(range(1, len(d) + 1)) and s[0].mu == total
    heavy = [set(x.heavy_set) for x in s]
    for _ in range(5):
        coincident = set(data.draw(st.sets(st.integers(1, len(d)))))
        by_strata = any(h <= coincident for h in heavy)
        assert is_unstable_pattern(d, coincident) == by_strata


def test_quotient_emptiness_and_excess():
    assert quotient_is_empty((1, 1, 1, 1, 1, 7))
    assert not quotient_is_empty((2, 2, 2, 2, 2))
    assert min_heavy_excess((2, 2, 2, 2, 2)) == 2
    assert min_heavy_excess((1, 1, 1, 1)) == 0


def test_scan_examples():
    rep = scan_degree_claim(5, 2)
    rows = {r.d: r for r in rep.rows}
    assert rows[(2, 2, 2, 2, 2)].stable and rows[(2, 2, 2, 2, 2)].total == 10
    assert not rows[(1, 1, 1, 1)].stable
    assert rep.counterexamples == []
    assert rep.checked == sum(1 for d in even_sum_degrees(5, 2) if not brute_sss(d))


def test_scan_csv():
    rep = scan_degree_claim(3, 3)
    text = rep.to_csv()
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == ["n", "d", "sum", "stable", "sum_ge_2n", "min_heavy_excess"]
    assert all(r["stable"] == "1" for r in rows)
    assert len(rows) == rep.checked
    assert len(list(csv.DictReader(io.StringIO(rep.to_csv(include_unstable=True))))) == len(rep.rows)


def test_stable_grid():
    g = stable_grid(3, 6, 4)
    assert (2, 2, 2, 2, 2) in g and (1, 1, 1, 1) not in g
    assert all(sum(d) % 2 == 0 and not brute_sss(d) for d in g)
    assert len(g) == 23


def test_weight_example():
    rep = fixed_point_weight_report((2, 2, 2, 2, 2), 2)
    assert rep.all_line_bundle_negative
    for s in rep.strata:
        assert s.line_bundle_weight == -s.stratum.mu
        if len(s.stratum.heavy_set) == 3:
            assert s.max_term_weight == 4
            assert s.total_max == 2 < s.stratum.eta == 4
            assert s.below_eta


def test_weight_multisets_have_the_right_size():
    from math import comb

    rep = fixed_point_weight_report((1, 1, 1, 1, 3), 3)
    for s in rep.strata:
        for q, ws in s.term_weights.items():
            assert sum(ws.values()) == comb(5, 3 - q) * comb(q + 2, 2)


def test_weight_j0_always_below_eta():
    for d in even_sum_degrees(6, 4):
        if brute_sss(d):
            continue
        for s in fixed_point_weight_report(d, 0).strata:
            assert s.max_term_weight == 0 and s.below_eta


def test_weight_report_rejects_sss():
    with pytest.raises(StrictlySemistableError):
        fixed_point_weight_report((1, 1, 1, 1), 1)
