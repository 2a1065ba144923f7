import math

import pytest

import coarsedim as cd


def test_space_generation_and_metric():
    p6 = cd.gen_path(6)
    assert p6.n == 6
    assert p6.dist(0, 5) == 5.0
    c4 = cd.gen_cycle(4)
    assert c4.dist(0, 3) == 1.0
    ds = cd.gen_dirsum([1, 2], 2)
    assert ds.n == 7

    back = cd.Space.from_json(p6.to_json())
    assert back.n == 6 and back.dist(1, 4) == 3.0


def test_entourages():
    p4 = cd.gen_path(4)
    e1 = cd.Entourage.tube(p4, 1)
    e2 = cd.Entourage.tube(p4, 2)
    assert len(e1) == 10
    assert cd.entourage_compose(e1, e1).subset_of(e2)
    assert cd.entourage_invert(e1) == e1


def test_dimension_solvers():
    p6 = cd.gen_path(6)
    value, witness = cd.solve_families(p6, 1, 2)
    assert value == 1
    assert len(witness) == 2

    value_c, _ = cd.solve_coarse(p6, cd.Entourage.tube(p6, 1),
                                 cd.Entourage.tube(p6, 2))
    assert value_c == 1

    one, _ = cd.solve_ad(cd.gen_path(1), 5, 1)
    assert one == 0

    infeasible, _ = cd.solve_ad(p6, 10, 2)
    assert infeasible is None


def test_box_allocate_and_stats():
    p4 = cd.gen_path(4)
    stats = cd.cover_stats(p4, [[0, 1], [2, 3]], R=1)
    assert stats["multiplicity"] == 1
    assert stats["r_multiplicity"] == 2
    assert stats["lebesgue"] == 0.0

    p6 = cd.gen_path(6)
    families = cd.box_allocate(p6, [[0, 1], [1, 2, 3], [4, 5]], 1)
    assert len(families) == 2


def test_dad_and_crosschecks():
    rot = cd.Action.rotation(12)
    value, cover, exact = cd.dad_action(rot, [0, 1, 11], B=3)
    assert value == 1 and exact
    value6, _, _ = cd.dad_action(rot, [0, 1, 11], B=6)
    assert value6 == 0

    rep = cd.crosscheck_lemma412(rot, 2, 3)
    assert rep["ok"] and rep["action_value"] == 1

    rep416 = cd.crosscheck_thm416(cd.gen_path(6), 1, 2)
    assert rep416["ok"]
    assert rep416["values"] == [1, 1, 1]


def test_groupoid_surface():
    g = cd.pair_groupoid(cd.gen_path(3))
    assert g.n_arrows == 9
    g.validate()
    closure, overflow = cd.generate_subgroupoid(g, g.arrows_below(2))
    assert not overflow
    assert len(closure) == 9

    t = cd.transformation_groupoid(cd.Action.rotation(12))
    assert t.n_arrows == 144
    back = cd.Groupoid.from_json(t.to_json())
    assert back.n_arrows == 144


def test_growth_tools():
    lin = {x: x for x in range(1, 101)}
    sq = {x: x * x for x in range(1, 101)}
    assert cd.preceq_witness(lin, sq, 5)[0] == 1
    assert cd.classify({x: 2 for x in range(1, 20)})["kind"] == "constant"
    deg = cd.classify({x: math.ceil(math.sqrt(x)) for x in range(1, 65)})
    assert deg["kind"] == "polynomial"
    assert abs(deg["estimate"] - 0.5) <= 0.1


def test_amenability_pipeline():
    g = cd.transformation_groupoid(cd.Action.rotation(12))
    res = cd.amenability_pipeline(g, 2, 0.5, alpha=0.5)
    assert res["failed_stage"] == ""
    assert res["pass"]
    assert res["report"]["pass"]
    assert res["pou_report"]["pass"]

    flat = cd.amenability_pipeline(g, 2, 0.5)
    assert flat["pass"]

    mu, support = cd.exact_witness(g)
    rep = cd.check_amenability(g, mu, g.arrows_below(2), 1e-9)
    assert rep["pass"]


def test_error_paths():
    with pytest.raises(ValueError):
        cd.gen_path(0)
    with pytest.raises(ValueError):
        cd.solve_families(cd.gen_path(20), 1, 2)  # beyond the exact cap
