import gzip

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scimap import (
    CitationMatrix,
    InputError,
    apply_citation_threshold,
    filter_low_activity,
    matrix_stats,
    parse_citation_csv,
    read_citation_csv,
    transpose,
    write_citation_csv,
)

SAMPLE = """citing,cited,count
A,A,5
A,B,3
B,C,1
C,A,20
"""


def test_parse_basic():
    m = parse_citation_csv(SAMPLE)
    assert m.labels == ("A", "B", "C")
    assert m.entries() == {(0, 0): 5, (0, 1): 3, (1, 2): 1, (2, 0): 20}
    assert m.index_of("C") == 2
    assert [j.label for j in m.journals()] == ["A", "B", "C"]


def test_header_is_optional():
    assert parse_citation_csv(SAMPLE.split("\n", 1)[1]) == parse_citation_csv(SAMPLE)


@pytest.mark.parametrize(
    "text, line",
    [
        ("A,B,x\n", 1),
        ("A,B,1\nA,B,0\n", 2),
        ("A,B,1\nA,B,-3\n", 2),
        ("A,B,1\n,B,2\n", 2),
        ("A,B,1\nA,C,2\nA,B,4\n", 3),
        ("A,B,1,9\n", 1),
    ],
)
def test_malformed_rows_report_line(text, line):
    with pytest.raises(InputError) as exc:
        parse_citation_csv(text)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_gzip(tmp_path):
    p = tmp_path / "m.csv.gz"
    with gzip.open(p, "wt", encoding="utf-8") as fh:
        fh.write(SAMPLE)
    assert read_citation_csv(p) == parse_citation_csv(SAMPLE)


def test_stats():
    st_ = matrix_stats(parse_citation_csv(SAMPLE))
    assert st_.n == 3
    assert st_.nonzero_count == 4
    assert st_.density == pytest.approx(4 / 9)
    assert st_.uncited_count == 0
    assert st_.non_citing_count == 0
    assert st_.self_citation_total == 5
    assert st_.citing_totals == (8, 1, 20)
    assert "journals" in st_.format_text()


def test_stats_uncited_and_silent():
    m = CitationMatrix.from_entries(["A", "B", "C"], {(0, 1): 2})
    st_ = matrix_stats(m)
    assert st_.uncited_count == 2  # A and C are never cited
    assert st_.non_citing_count == 2  # B and C never cite


def test_stats_empty():
    st_ = matrix_stats(CitationMatrix.from_entries([], {}))
    assert st_.to_dict() == {
        "n": 0, "nonzero_count": 0, "density": 0.0,
        "uncited_count": 0, "non_citing_count": 0, "self_citation_total": 0,
    }


def test_citation_threshold():
    m = parse_citation_csv(SAMPLE)
    t = apply_citation_threshold(m, 2)
    assert t.labels == m.labels
    assert t.entries() == {(0, 0): 5, (0, 1): 3, (2, 0): 20}
    assert apply_citation_threshold(m, 1) == m
    with pytest.raises(ValueError):
        apply_citation_threshold(m, 0)


def test_low_activity_filter():
    m = parse_citation_csv(SAMPLE)
    kept, excluded = filter_low_activity(m, 8)
    assert kept.labels == ("A", "C")
    assert kept.entries() == {(0, 0): 5, (1, 0): 20}
    assert [(j.index, j.label) for j in excluded] == [(1, "B")]


def test_transpose():
    m = parse_citation_csv(SAMPLE)
    t = transpose(m)
    assert t.entries() == {(0, 0): 5, (1, 0): 3, (2, 1): 1, (0, 2): 20}
    assert transpose(t) == m


@st.composite
def matrices(draw):
    n = draw(st.integers(0, 8))
    labels = draw(st.lists(st.text("abcxyz ,\"-", min_size=1, max_size=6).map(str.strip).filter(bool),
                           min_size=n, max_size=n, unique=True))
    cells = draw(st.dictionaries(st.tuples(st.integers(0, max(n - 1, 0)), st.integers(0, max(n - 1, 0))),
                                 st.integers(1, 10**6), max_size=20)) if n else {}
    return CitationMatrix.from_entries(labels, cells)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_csv_roundtrip(m):
    back = parse_citation_csv(write_citation_csv(m))
    assert back == m
    assert back.labels == m.labels


def test_row_sums_and_subset():
    m = parse_citation_csv(SAMPLE)
    assert list(m.row_sums()) == [8, 1, 20]
    sub = m.subset([2, 0])
    assert sub.labels == ("A", "C")
    assert np.array_equal(sub.counts.toarray(), [[5, 0], [20, 0]])


def test_low_activity_threshold_definition():
    sums = {"a": 0, "b": 5, "c": 11, "d": 12, "e": 40}
    entries = {}
    labels = list(sums)
    for i, lab in enumerate(labels):
        if sums[lab]:
            entries[(i, (i + 1) % 5)] = sums[lab]
    kept, excluded = filter_low_activity(CitationMatrix.from_entries(labels, entries))
    assert kept.labels == ("d", "e")
    assert [j.label for j in excluded] == ["a", "b", "c"]
