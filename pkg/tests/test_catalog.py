import jsonschema
import pytest

from gacompact import catalog, models
from gacompact.catalog import Kind
from gacompact.exactalg import DomainError


def row(degree, label, lines=None):
    return catalog.lookup(degree, label, lines)


def test_label_parsing():
    assert catalog.parse_singularities("A3+2A1") == ("A3", "A1", "A1")
    assert catalog.parse_singularities("") == ()
    assert catalog.format_singularities(("A1", "A3", "A1")) == "A3+2A1"
    for bad in ("B2", "D3", "E9", "A0"):
        with pytest.raises(DomainError):
            catalog.parse_singularities(bad)


def test_two_curve_counts():
    assert catalog.two_curve_count(row(4, "D5")) == 5
    assert catalog.two_curve_count(row(4, "A3+A1")) == 4
    assert catalog.two_curve_count(row(8, "F2")) == 1
    assert catalog.two_curve_count(row(6, "Bl3P2")) == 0


def test_picard_ranks():
    assert catalog.picard_rank(row(4, "D5")) == 6
    assert catalog.picard_rank(row(9, "P2")) == 1
    assert catalog.picard_rank(row(8, "F2")) == 2
    assert catalog.picard_rank(row(8, "P1xP1")) == 2
    assert catalog.picard_rank(row(8, "Bl1P2")) == 2


@pytest.mark.parametrize("degree, label, lines, passes, text", [
    (4, "D5", 1, True, "6<=6"),
    (4, "A4", 3, False, "7>6"),
    (9, "P2", 0, True, "0<=1"),
    (3, "3A2", 3, False, "9>7"),
    (6, "Bl3P2", 6, False, "6>4"),
    (5, "A2", 4, False, "6>5"),
])
def test_criterion_examples(degree, label, lines, passes, text):
    t = row(degree, label, lines)
    assert catalog.passes_criterion(t) is passes
    assert catalog.criterion_text(t) == text


@pytest.mark.parametrize("degree, label, lines, flags", [
    (6, "A1", 3, {"toric": False, "additive": True}),
    (6, "A1", 4, {"toric": True, "additive": False}),
    (4, "D4", 2, {"toric": False, "additive": False}),
    (4, "D5", 1, {"toric": False, "additive": True}),
])
def test_classify(degree, label, lines, flags):
    assert catalog.classify(row(degree, label, lines)) == flags


def test_rows_are_unique_by_key():
    keys = [t.key for t in catalog.ROWS]
    assert len(keys) == len(set(keys))


def test_ambiguous_lookup_needs_line_count():
    with pytest.raises(DomainError):
        catalog.lookup(6, "A1")


def test_uncataloged_rows():
    with pytest.raises(catalog.NotCatalogedError):
        catalog.lookup(3, "A1")
    with pytest.raises(catalog.NotCatalogedError):
        catalog.lookup(4, "D5", 2)


def test_type_validation():
    with pytest.raises(DomainError):
        catalog.DelPezzoType(10, Kind.BLOWUP, (), 0, False, False)
    with pytest.raises(DomainError):
        catalog.DelPezzoType(4, Kind.BLOWUP, (), -1, False, False)


def test_additive_rows():
    additive = {t.node_name for t in catalog.ROWS if t.additive}
    # every additive row is a P2, Hirzebruch, P1xP1 or blow-up of P2 in degree >= 4
    assert all(t.degree >= 4 for t in catalog.ROWS if t.additive)
    assert "4/D5" in additive and "5/A3" in additive and "5/A4" in additive
    assert "4/D4" not in additive and "3/E6" not in additive


def test_figure_nodes():
    names = {t.node_name for t in catalog.figure_nodes()}
    assert {"5/A3", "5/A4"} <= names
    assert "6/Bl3P2" not in names and "5/A2" not in names
    assert names == set(catalog.FIGURE_NODE_NAMES)


def test_additive_rows_pass_criterion():
    assert all(catalog.passes_criterion(t) for t in catalog.ROWS if t.additive)


def test_criterion_converse_fails_exactly_on_known_nodes():
    got = {t.node_name for t in catalog.figure_nodes() if not t.additive}
    assert got == {"4/D4", "3/E6", "2/E7", "1/E8"}


def test_graph_edges():
    g = catalog.blowup_graph()
    for src, dst in [("3/E6", "4/D5"), ("4/D5", "5/A4"), ("5/A4", "6/A2+A1"), ("5/A3", "6/2A1"),
                     ("4/D4", "5/A3"), ("2/E7", "3/E6"), ("1/E8", "2/E7"), ("8/Bl1P2", "9/P2"),
                     ("7/Bl2P2", "8/Bl1P2"), ("7/Bl2P2", "8/P1xP1"), ("7/A1", "8/F2"), ("7/A1", "8/Bl1P2")]:
        assert g.has_edge(src, dst), (src, dst)
    assert len(g.edges) == len(catalog.FIGURE_EDGES)


def test_graph_invariants():
    g = catalog.blowup_graph()
    assert g.is_acyclic()
    for a, b in g.edges:
        assert b.degree == a.degree + 1
        assert catalog.picard_rank(a) == catalog.picard_rank(b) + 1
        assert catalog.two_curve_count(b) <= catalog.two_curve_count(a)
        if a.additive:
            assert b.additive


def test_e_chain_is_consistently_non_additive():
    g = catalog.blowup_graph()
    chain = ["1/E8", "2/E7", "3/E6"]
    for src, dst in zip(chain, chain[1:]):
        assert g.has_edge(src, dst)
    assert not any(g.node(n).additive for n in chain)


def test_topological_order_starts_from_minimal_surfaces():
    order = [t.node_name for t in catalog.blowup_graph().topological_order()]
    assert order.index("9/P2") < order.index("8/Bl1P2")
    assert order.index("4/D5") < order.index("3/E6") < order.index("2/E7") < order.index("1/E8")


def test_cycle_is_detected():
    g = catalog.blowup_graph()
    a, b = g.node("9/P2"), g.node("8/Bl1P2")
    looped = catalog.BlowupGraph(g.nodes, g.edges + ((a, b),))
    assert not looped.is_acyclic()


def test_node_count_discrepancy_is_recorded():
    assert len(catalog.FIGURE_NODE_NAMES) == 17
    assert catalog.STATED_TYPE_COUNT == 16


def test_p1xp1_in_degree_eight():
    t = row(8, "P1xP1")
    assert not t.in_table and t.notes


def test_e8_carries_multiplicity_note():
    assert any("two isomorphism classes" in n for n in row(1, "E8").notes)


def test_rho_configuration():
    assert catalog.rho_configuration_compatible(models.d5_surface())
    assert catalog.rho_configuration_compatible(models.e6_surface())
    assert not catalog.rho_configuration_compatible(models.D4_CONFIGURATION)


def test_rho_configuration_requires_data():
    with pytest.raises(DomainError):
        catalog.rho_configuration_compatible(models.a3_surface())


def test_export_matches_schema():
    rows = catalog.export_rows()
    jsonschema.validate(rows, catalog.TABLE_SCHEMA)
    assert len(rows) == len(catalog.ROWS)
    d5 = next(r for r in rows if r["degree"] == 4 and r["type"] == "D5")
    assert d5["criterion"] == {"passes": True, "text": "6<=6"}
