import pytest

from stspkit import Arc, GeneratorConfig, Instance, compute_threshold, generate_instance, reduce_instance
from stspkit.pmra import PmraError


def test_threshold_examples():
    assert compute_threshold([20, 30, 40]) == (30.0, pytest.approx(33.0))
    assert compute_threshold([50]) == (50.0, pytest.approx(55.0))
    m, alpha = compute_threshold([25, 30, 20, 20, 22, 21])
    assert m == 23.0
    assert alpha == pytest.approx(25.3)
    assert alpha == 1.1 * m


def test_threshold_empty_raises():
    with pytest.raises(PmraError):
        compute_threshold([])


def test_t1_unchanged(t1):
    reduced, report = reduce_instance(t1)
    assert reduced.arcs == t1.arcs
    assert reduced.nodes == t1.nodes
    assert report.mean_cost == 23.0
    assert report.threshold == pytest.approx(25.3)
    assert report.removed_step1 == []
    assert report.removed_step3 == []
    assert report.removed_nodes_step4 == {}
    assert not report.feasibility_fallback


def test_t2_extra_steiner_removed(t1):
    t2 = Instance(
        nodes=t1.nodes + (3,),
        coords={**t1.coords, 3: (5.0, 5.0)},
        terminals=t1.terminals,
        arcs=t1.arcs + (Arc(6, 2, 3, 40), Arc(7, 3, 2, 45)),
    )
    t2.validate()
    reduced, report = reduce_instance(t2)
    assert sorted(report.removed_step1) == [6, 7]
    assert 3 in report.removed_nodes_step4
    assert reduced.arcs == t1.arcs
    assert reduced.nodes == t1.nodes


def test_all_terminals_cheap_costs_identity():
    inst = Instance(
        nodes=(0, 1, 2),
        coords={},
        terminals=frozenset({1, 2}),
        arcs=(Arc(0, 0, 1, 10), Arc(1, 1, 2, 10), Arc(2, 2, 0, 10)),
    )
    reduced, report = reduce_instance(inst)
    assert reduced.arcs == inst.arcs
    assert report.removed_step1 == [] and report.removed_step3 == []


def test_step1_disconnection_is_hard_error():
    # The only path to terminal 1 runs through a steiner-steiner arc.
    inst = Instance(
        nodes=(0, 1, 2, 3),
        coords={},
        terminals=frozenset({1}),
        arcs=(Arc(0, 0, 2, 10), Arc(1, 2, 3, 10), Arc(2, 3, 1, 10), Arc(3, 1, 0, 10)),
    )
    with pytest.raises(PmraError, match="step 1"):
        reduce_instance(inst)


def test_feasibility_fallback():
    # Removing the single expensive arc into terminal 1 passes the local
    # degree guard but disconnects the terminal.
    inst = Instance(
        nodes=(0, 1, 2),
        coords={},
        terminals=frozenset({1}),
        arcs=(Arc(0, 0, 2, 10), Arc(1, 2, 1, 1000), Arc(2, 1, 0, 10), Arc(3, 1, 2, 10)),
    )
    reduced, report = reduce_instance(inst)
    assert report.feasibility_fallback
    assert report.removed_step3 == []
    assert report.removed_nodes_step4 == {}
    assert len(reduced.arcs) == 4


def test_exempt_arcs_between_required_nodes(t1):
    # Arc 1 (1 -> 0, cost 30) exceeds the threshold but joins two
    # required nodes, so it survives.
    reduced, _ = reduce_instance(t1)
    assert any(a.id == 1 for a in reduced.arcs)


def _connected(inst):
    def reach(forward):
        adj = {}
        for a in inst.arcs:
            u, v = (a.tail, a.head) if forward else (a.head, a.tail)
            adj.setdefault(u, []).append(v)
        seen, stack = {0}, [0]
        while stack:
            u = stack.pop()
            for v in adj.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    return all(t in reach(True) and t in reach(False) for t in inst.terminals)


@pytest.mark.parametrize("seed", range(15))
def test_reduction_invariants_random(seed):
    inst = generate_instance(3 + seed % 6, seed=seed, config=GeneratorConfig(density=0.4))
    reduced, report = reduce_instance(inst)
    original_ids = {a.id for a in inst.arcs}
    reduced_ids = {a.id for a in reduced.arcs}
    assert reduced_ids <= original_ids
    assert report.arcs_after <= report.arcs_before
    removed = (len(report.removed_step1) + len(report.removed_step3)
               + sum(len(v) for v in report.removed_nodes_step4.values()))
    assert report.arcs_after == report.arcs_before - removed
    # removed sets are disjoint
    all_removed = (report.removed_step1 + report.removed_step3
                   + [k for v in report.removed_nodes_step4.values() for k in v])
    assert len(all_removed) == len(set(all_removed))
    assert reduced.terminals == inst.terminals
    assert 0 in reduced.nodes
    assert inst.terminals <= set(reduced.nodes)
    assert _connected(reduced)
    # step-4 fixed point: no surviving steiner node lacks in- or out-arcs
    indeg = {v: 0 for v in reduced.nodes}
    outdeg = {v: 0 for v in reduced.nodes}
    for a in reduced.arcs:
        outdeg[a.tail] += 1
        indeg[a.head] += 1
    for v in reduced.steiner_nodes:
        assert indeg[v] > 0 and outdeg[v] > 0
