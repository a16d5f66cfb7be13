import itertools

import pytest

from fninv.errors import MalformedTree, SparsityViolation
from fninv.field import FnTable, make_field
from fninv.inverters import AffineDecoderSpec, AffineForm, eval_affine_decoder
from fninv.trees import AffineDecisionTree, Leaf, Node, affine_form_tree, constant_tree, eval_decision_tree, tree_inverter

GF2 = make_field(2)


def and_tree():
    inner = Node({2: 1}, {0: Leaf(0), 1: Leaf(1)})
    return AffineDecisionTree(GF2, Node({1: 1}, {0: Leaf(0), 1: inner}), depth=2)


def test_and_tree_outputs():
    tree = and_tree()
    outs = [eval_decision_tree(tree, FnTable(2, w)).leaf_value for w in [(1, 1), (1, 2), (2, 1), (2, 2)]]
    assert outs == [0, 0, 0, 1]


def test_paths_are_recorded():
    ev = eval_decision_tree(and_tree(), FnTable(2, (2, 2)))
    assert ev.edge_path == (1, 1)
    assert len(ev.node_path) == 3 and ev.node_path[0] == 0
    assert ev.output == 2


def test_constant_tree():
    ev = eval_decision_tree(constant_tree(make_field(3), 2), FnTable(3, (1, 2, 3)))
    assert ev.node_path == (0,) and ev.edge_path == () and ev.output == 3


@pytest.mark.parametrize("p", [2, 3, 5])
def test_depth_one_tree_equals_affine_decoder(p):
    gf = make_field(p)
    tail = (1,) * (p - 2)
    for a1, a2, beta in itertools.product(range(p), repeat=3):
        form = AffineForm({1: a1, 2: a2}, beta)
        tree = affine_form_tree(gf, form)
        spec = AffineDecoderSpec(gf, 2, lambda y, a, form=form: form)
        for w in itertools.product(range(1, p + 1), repeat=2):
            f = FnTable(p, w + tail)
            assert eval_decision_tree(tree, f).output == eval_affine_decoder(spec, 1, "", f)


def test_missing_edge_rejected():
    with pytest.raises(MalformedTree):
        AffineDecisionTree(GF2, Node({1: 1}, {0: Leaf(0)}), depth=1)


def test_depth_overflow_rejected():
    with pytest.raises(MalformedTree):
        AffineDecisionTree(GF2, and_tree().root, depth=1)


def test_path_sparsity_enforced():
    with pytest.raises(SparsityViolation):
        AffineDecisionTree(GF2, and_tree().root, depth=2, q=1)


def test_tree_reads_beyond_input():
    with pytest.raises(MalformedTree):
        eval_decision_tree(affine_form_tree(GF2, AffineForm({3: 1}, 0)), FnTable(2, (1, 1)))


def test_tree_inverter_uses_only_queried_positions():
    gf = make_field(3)
    tree = affine_form_tree(gf, AffineForm({1: 1}, 0))
    inv = tree_inverter(gf, lambda y: tree, lambda y: (1,), 1)
    f = FnTable(3, (3, 1, 2))
    assert inv.invert(2, f, "")[0] == 3
    sneaky = tree_inverter(gf, lambda y: tree, lambda y: (2,), 1)
    with pytest.raises(SparsityViolation):
        sneaky.invert(2, f, "")
