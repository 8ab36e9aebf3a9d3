import pytest

from conftest import NAMED_POSETS, closure_oracle, named_poset, random_poset
from posetsys.errors import CycleError, IndexOutOfRange
from posetsys.poset import (
    block_triangular_relabel,
    build_poset,
    derived_set,
    dual_poset,
    hasse_edges,
    level_sets,
    ultra_transitivity,
)

EXAMPLE_EDGES = [(1, 2), (3, 2), (2, 4)]


def test_build_closes_transitively():
    poset = build_poset(4, EXAMPLE_EDGES)
    assert poset.geq(1, 4) and poset.geq(3, 4)
    assert poset.relation == closure_oracle(4, EXAMPLE_EDGES)


def test_build_antichain():
    poset = build_poset(3, [])
    assert poset.relation == {(i, i) for i in (1, 2, 3)}


def test_build_rejects_cycle_with_witness():
    with pytest.raises(CycleError) as info:
        build_poset(2, [(1, 2), (2, 1)])
    assert set(info.value.cycle) == {1, 2}


def test_build_rejects_bad_labels():
    with pytest.raises(IndexOutOfRange):
        build_poset(2, [(1, 3)])


def test_derived_sets_on_example():
    poset = build_poset(4, EXAMPLE_EDGES)
    assert derived_set(poset, {1}, "down") == {1, 2, 4}
    assert derived_set(poset, {2}, "strict_up") == {1, 3}
    assert derived_set(poset, {1}, "strict_down") == {2, 4}
    assert derived_set(poset, set(), "up") == frozenset()


def test_derived_set_idempotent_and_adjoint(rng):
    for _ in range(20):
        poset = random_poset(rng, rng.randint(1, 7))
        members = {j for j in poset.nodes if rng.random() < 0.4}
        down = derived_set(poset, members, "down")
        up = derived_set(poset, members, "up")
        assert derived_set(poset, down, "down") == down
        assert derived_set(poset, up, "up") == up
        for i in poset.nodes:
            for j in poset.nodes:
                assert (i in derived_set(poset, {j}, "up")) == (
                    j in derived_set(poset, {i}, "down")
                )


def test_dual_poset_involution_and_swap(rng):
    poset = build_poset(4, EXAMPLE_EDGES)
    dual = dual_poset(poset)
    assert dual.geq(2, 1) and not dual.geq(1, 2)
    assert dual_poset(dual) == poset
    for _ in range(10):
        p = random_poset(rng, rng.randint(1, 6))
        members = {j for j in p.nodes if rng.random() < 0.5}
        assert derived_set(dual_poset(p), members, "up") == derived_set(p, members, "down")


def test_dual_swaps_ultra_transitivity(rng):
    for name in NAMED_POSETS:
        poset = named_poset(name)
        in_u, out_u = ultra_transitivity(poset)
        din, dout = ultra_transitivity(dual_poset(poset))
        assert (in_u, out_u) == (dout, din)


def test_hasse_edges_examples():
    assert hasse_edges(build_poset(4, EXAMPLE_EDGES)) == {(1, 2), (3, 2), (2, 4)}
    assert hasse_edges(build_poset(3, [])) == frozenset()
    assert hasse_edges(build_poset(3, [(1, 2), (2, 3)])) == {(1, 2), (2, 3)}


def test_hasse_round_trip(rng):
    for _ in range(25):
        poset = random_poset(rng, rng.randint(1, 7))
        assert build_poset(poset.p, hasse_edges(poset)) == poset


def test_ultra_transitivity_named_cases():
    assert ultra_transitivity(named_poset("p2")) == (True, False)
    assert ultra_transitivity(named_poset("p3")) == (False, True)
    assert ultra_transitivity(named_poset("p5")) == (False, False)
    assert ultra_transitivity(named_poset("p6")) == (True, True)


def _up_size(poset, j):
    return len(derived_set(poset, {j}, "up"))


def test_level_sets_total_order():
    poset = build_poset(3, [(1, 2), (2, 3)])
    levels, rings = level_sets(poset)
    assert levels == [frozenset({1}), frozenset({1, 2}), frozenset({1, 2, 3})]
    assert rings == [frozenset({2}), frozenset({3}), frozenset()]


def test_level_sets_antichain():
    levels, rings = level_sets(build_poset(4, []))
    assert levels[0] == frozenset({1, 2, 3, 4})
    assert all(not r for r in rings)


def test_level_sets_match_up_set_sizes(rng):
    # oracle: recompute the filtration from the raw up-set sizes
    cases = [build_poset(4, EXAMPLE_EDGES)] + [random_poset(rng, rng.randint(1, 7)) for _ in range(10)]
    for poset in cases:
        levels, rings = level_sets(poset)
        for k in range(1, poset.p + 1):
            assert levels[k - 1] == {j for j in poset.nodes if _up_size(poset, j) <= k}
        assert levels[-1] == frozenset(poset.nodes)
        assert rings[-1] == frozenset()
        for k in range(poset.p - 1):
            assert rings[k] == levels[k + 1] - levels[k]
            for i in rings[k]:
                assert derived_set(poset, {i}, "strict_up") <= levels[k]


def test_level_sets_example_poset():
    # up-set sizes here are 1, 3, 1, 4, so node 2 enters at level three
    levels, _ = level_sets(build_poset(4, EXAMPLE_EDGES))
    assert levels[0] == {1, 3}
    assert levels[1] == {1, 3}
    assert levels[2] == {1, 2, 3}
    assert levels[3] == {1, 2, 3, 4}


def test_relabel_identity_cases():
    assert block_triangular_relabel(build_poset(3, [(1, 2), (2, 3)])) == {1: 1, 2: 2, 3: 3}
    assert block_triangular_relabel(build_poset(3, [])) == {1: 1, 2: 2, 3: 3}


def test_relabel_is_linear_extension(rng):
    cases = [named_poset(n) for n in NAMED_POSETS] + [
        random_poset(rng, rng.randint(1, 7)) for _ in range(15)
    ]
    for poset in cases:
        perm = block_triangular_relabel(poset)
        assert sorted(perm.values()) == list(poset.nodes)
        for j, i in poset.relation:
            assert perm[j] <= perm[i]


def test_relabel_permutation_triangularizes_patterns(rng):
    # permuting blocks by the relabeling turns any pattern matrix into a
    # block lower triangle
    from conftest import structured_random_matrix

    for _ in range(10):
        poset = random_poset(rng, rng.randint(1, 6))
        perm = block_triangular_relabel(poset)
        sizes = [rng.randint(1, 2) for _ in range(poset.p)]
        m = structured_random_matrix(rng, poset, sizes, sizes)
        new_sizes = [0] * poset.p
        for old, new in perm.items():
            new_sizes[new - 1] = sizes[old - 1]
        off = [sum(sizes[:k]) for k in range(poset.p + 1)]
        noff = [sum(new_sizes[:k]) for k in range(poset.p + 1)]
        relabeled = [[0] * sum(sizes) for _ in range(sum(sizes))]
        for old_i in poset.nodes:
            for old_j in poset.nodes:
                ni, nj = perm[old_i], perm[old_j]
                for a in range(sizes[old_i - 1]):
                    for b in range(sizes[old_j - 1]):
                        relabeled[noff[ni - 1] + a][noff[nj - 1] + b] = m[off[old_i - 1] + a, off[old_j - 1] + b]
        for bi in range(poset.p):
            for bj in range(bi + 1, poset.p):
                for a in range(noff[bi], noff[bi + 1]):
                    for b in range(noff[bj], noff[bj + 1]):
                        assert relabeled[a][b] == 0
