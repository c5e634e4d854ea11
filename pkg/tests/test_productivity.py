import math
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fssrank.citations import compute_baselines
from fssrank.errors import UndefinedBaseline
from fssrank.productivity import (
    ProductivityScore,
    field_baselines,
    is_eligible,
    researcher_fss,
    researcher_fss_n,
    score_dataset,
)

from .conftest import build_dataset
from .oracle import oracle

FIELDS = {"S1": ("1", "alphabetical")}


def test_unproductive_researcher_scores_zero():
    ds = build_dataset(FIELDS, [("R1", "S1", "U1", 5), ("R2", "S1", "U1", 5)],
                       [("p", 2010, 4, ["C"], [("R1", "U1")])])
    ss = score_dataset(ds)
    assert ss.scores["R2"].fss == 0.0
    assert not ss.scores["R2"].productive
    assert ss.scores["R2"].fss_n == 0.0


def test_single_author_at_baseline_over_five_years():
    ds = build_dataset(FIELDS, [("R1", "S1", "U1", 5)],
                       [("p", 2010, 4, ["C"], [("R1", "U1")])])
    assert researcher_fss(ds.researchers["R1"], ds, compute_baselines(ds)) == pytest.approx(0.2)


def test_years_active_shortens_denominator():
    ds = build_dataset(FIELDS, [("R1", "S1", "U1", 2)],
                       [("p", 2010, 4, ["C"], [("R1", "U1")])])
    assert researcher_fss(ds.researchers["R1"], ds, compute_baselines(ds)) == pytest.approx(0.5)


def test_field_baseline_ignores_unproductive():
    researchers = [("R0", "S1", "U1", 1), ("R2", "S1", "U1", 1), ("R4", "S1", "U1", 1)]
    pubs = [("a", 2010, 2, ["C"], [("R2", "U1")]), ("b", 2010, 4, ["C"], [("R4", "U1")])]
    ds = build_dataset(FIELDS, researchers, pubs)
    ss = score_dataset(ds)
    # the citation baseline is 3, so FSS are 2/3, 4/3 and the productive mean is 1
    fb = ss.fields["S1"]
    assert fb.productive_count == 2 and fb.total_count == 3
    assert fb.mean_fss_productive == pytest.approx(1.0)
    assert fb.eligible and fb.rankable
    assert ss.scores["R2"].fss_n == pytest.approx(2 / 3)
    assert ss.scores["R0"].fss_n == 0.0


def test_field_baseline_from_raw_scores():
    ds = build_dataset(FIELDS, [(f"R{i}", "S1", "U1", 5) for i in range(3)], [])
    scores = {
        f"R{i}": ProductivityScore(f"R{i}", "S1", "U1", fss, None, fss > 0)
        for i, fss in enumerate([0.0, 2.0, 4.0])
    }
    fb = field_baselines(ds, scores)["S1"]
    assert fb.mean_fss_productive == 3.0
    assert (fb.productive_count, fb.total_count, fb.eligible) == (2, 3, True)


@pytest.mark.parametrize("productive, total, ok", [
    (4, 10, False), (5, 10, True), (10, 10, True), (0, 0, False), (1, 3, False), (2, 3, True),
])
def test_eligibility_threshold(productive, total, ok):
    assert is_eligible(productive, total) is ok


def test_ineligible_field_keeps_scores_but_not_rankable():
    researchers = [(f"R{i}", "S1", "U1", 5) for i in range(10)]
    pubs = [(f"p{i}", 2010, 3, ["C"], [(f"R{i}", "U1")]) for i in range(4)]
    ss = score_dataset(build_dataset(FIELDS, researchers, pubs))
    assert not ss.fields["S1"].eligible
    assert ss.eligible_fields() == []
    assert ss.scores["R0"].fss_n == pytest.approx(1.0)


def test_uniform_dataset_gives_unit_scores():
    researchers = [(f"R{i}", "S1", "U1", 5) for i in range(8)]
    pubs = [(f"p{i}", 2010, 7, ["C"], [(f"R{i}", "U1")]) for i in range(8)]
    ss = score_dataset(build_dataset(FIELDS, researchers, pubs))
    assert all(s.fss_n == pytest.approx(1.0, abs=1e-12) for s in ss.scores.values())


def test_undefined_baseline():
    researchers = [("R1", "S1", "U1", 5), ("R2", "S1", "U1", 5)]
    pubs = [("a", 2010, 0, ["C"], [("R1", "U1")])]  # productive but never cited
    ds = build_dataset(FIELDS, researchers, pubs)
    ss = score_dataset(ds)
    assert ss.scores["R1"].fss_n is None
    assert not ss.fields["S1"].rankable
    with pytest.raises(UndefinedBaseline):
        researcher_fss_n("R1", ss.scores, ss.fields)


def test_scheme_follows_researcher_sds():
    # same 5-author paper; R1 is in an alphabetical SDS, R2 in a byline SDS
    fields = {"A": ("1", "alphabetical"), "B": ("5", "byline")}
    researchers = [("R1", "A", "U1", 1), ("R2", "B", "U1", 1)]
    byline = [("R1", "U1"), (None, "X"), (None, "X"), (None, "X"), ("R2", "U1")]
    ds = build_dataset(fields, researchers, [("p", 2010, 5, ["C"], byline)])
    ss = score_dataset(ds)
    assert ss.scores["R1"].fss == pytest.approx(0.2)
    assert ss.scores["R2"].fss == pytest.approx(0.4)


def test_matches_oracle(tiny_dir, tiny_dataset):
    d, _ = tiny_dir
    o = oracle(d, tiny_dataset.window)
    ss = score_dataset(tiny_dataset)
    for rid, s in ss.scores.items():
        assert s.productive == o["productive"][rid]
        assert math.isclose(s.fss, o["fss"][rid], rel_tol=1e-9, abs_tol=1e-12)
        assert math.isclose(s.fss_n, o["fss_n"][rid], rel_tol=1e-9, abs_tol=1e-12)
    for code, fb in ss.fields.items():
        assert fb.rankable == o["eligible"][code]
        assert math.isclose(fb.mean_fss_productive, o["field_mean"][code], rel_tol=1e-9)


def test_productive_mean_is_one(tiny_dataset):
    ss = score_dataset(tiny_dataset)
    for code in ss.eligible_fields():
        vals = [s.fss_n for s in ss.scores.values() if s.sds_code == code and s.productive]
        assert math.fsum(vals) / len(vals) == pytest.approx(1.0, abs=1e-9)


def test_removing_unproductive_changes_nothing(tiny_dataset):
    ss = score_dataset(tiny_dataset)
    idle = [rid for rid, s in ss.scores.items() if not s.productive]
    assert idle, "fixture should contain unproductive researchers"
    gone = idle[0]
    researchers = {k: v for k, v in tiny_dataset.researchers.items() if k != gone}
    smaller = replace(tiny_dataset, researchers=researchers)
    ss2 = score_dataset(smaller)
    for rid, s in ss2.scores.items():
        assert s.fss_n == ss.scores[rid].fss_n


# random small corpora for homogeneity

@st.composite
def corpora(draw):
    n_res = draw(st.integers(min_value=1, max_value=6))
    researchers = [(f"R{i}", "S1", "U1", draw(st.integers(1, 5))) for i in range(n_res)]
    pubs = []
    for j in range(draw(st.integers(min_value=1, max_value=10))):
        authors = draw(st.lists(st.integers(0, n_res - 1), min_size=1, max_size=n_res, unique=True))
        byline = [(f"R{a}", "U1") for a in authors]
        pubs.append((f"p{j}", draw(st.integers(2008, 2012)), draw(st.integers(0, 40)),
                     draw(st.sets(st.sampled_from("ABC"), min_size=1)), byline))
    return researchers, pubs


@settings(max_examples=100, deadline=None)
@given(corpora(), st.integers(min_value=2, max_value=20))
def test_fss_n_invariant_under_global_citation_scaling(corpus, k):
    researchers, pubs = corpus
    a = score_dataset(build_dataset(FIELDS, researchers, pubs))
    scaled = [(p, y, c * k, cats, b) for p, y, c, cats, b in pubs]
    b = score_dataset(build_dataset(FIELDS, researchers, scaled))
    for rid in a.scores:
        assert b.scores[rid].fss == pytest.approx(a.scores[rid].fss, rel=1e-9, abs=1e-12)
        if a.scores[rid].fss_n is not None:
            assert b.scores[rid].fss_n == pytest.approx(a.scores[rid].fss_n, rel=1e-9, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(corpora())
def test_field_baseline_is_mean_of_productive(corpus):
    researchers, pubs = corpus
    ds = build_dataset(FIELDS, researchers, pubs)
    ss = score_dataset(ds)
    fb = field_baselines(ds, ss.scores)["S1"]
    prod = [s.fss for s in ss.scores.values() if s.productive]
    assert fb.productive_count == len(prod)
    assert fb.mean_fss_productive == pytest.approx(math.fsum(prod) / len(prod))
