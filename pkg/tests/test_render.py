import xml.etree.ElementTree as ET

import pytest

from scimap import LayoutParams, SimilarityGraph, layout_kamada_kawai, render_svg
from scimap.render import HIGHLIGHT_FILL, PALETTE

NS = "{http://www.w3.org/2000/svg}"


@pytest.fixture
def drawn():
    g = SimilarityGraph.unweighted(["a", "b", "c", "d", "e"], [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
    return g, layout_kamada_kawai(g)


def test_structure(drawn):
    g, lay = drawn
    svg = render_svg(g, lay, [1, 1, 1, 2, 2], highlight=[2], labels=True)
    root = ET.fromstring(svg.split("\n", 1)[1])
    lines = root.findall(f".//{NS}line")
    circles = root.findall(f".//{NS}circle")
    texts = root.findall(f".//{NS}text")
    assert len(lines) == 6 and len(circles) == 5 and len(texts) == 5
    assert [c.find(f"{NS}title").text for c in circles] == list(g.labels)
    assert circles[2].get("fill") == HIGHLIGHT_FILL
    assert circles[0].get("fill") == PALETTE[0] and circles[3].get("fill") == PALETTE[1]
    # lines are emitted before circles
    assert svg.index("<line") < svg.index("<circle")


def test_deterministic(drawn):
    g, lay = drawn
    assert render_svg(g, lay) == render_svg(g, lay)


def test_mismatched_layout(drawn):
    g, lay = drawn
    other = SimilarityGraph.unweighted(["a", "b"], [(0, 1)])
    with pytest.raises(ValueError):
        render_svg(other, lay)
    with pytest.raises(ValueError):
        render_svg(g, lay, partition=[1, 2])


def test_labels_escaped():
    g = SimilarityGraph.unweighted(["A & B", "<C>"], [(0, 1)])
    svg = render_svg(g, layout_kamada_kawai(g, LayoutParams()), labels=True)
    ET.fromstring(svg.split("\n", 1)[1])
    assert "A &amp; B" in svg


def test_butterfly_highlight_counts(drawn):
    g, lay = drawn
    svg = render_svg(g, lay, highlight=[2])
    assert svg.count("<circle") == 5 and svg.count("<line") == 6
    assert svg.count(f'fill="{HIGHLIGHT_FILL}"') == 1


def test_empty_graph():
    g = SimilarityGraph.unweighted(0, [])
    svg = render_svg(g, layout_kamada_kawai(g))
    root = ET.fromstring(svg.split("\n", 1)[1])
    assert root.tag == f"{NS}svg"
    assert "<circle" not in svg and "<line" not in svg


def test_single_component_picture():
    from scimap import connected_components, extract_subgraph, generate_synthetic, pearson_similarity, threshold_graph

    g = threshold_graph(pearson_similarity(generate_synthetic(blocks=(49,), bridge_journals=0).matrix), 0.8)
    comp = max(connected_components(g), key=len)
    sub = extract_subgraph(g, comp)
    svg = render_svg(sub, layout_kamada_kawai(sub))
    assert len(comp) == 49 and svg.count("<circle") == 49
