import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from masseyfp import groups as gr
from masseyfp.errors import HomomorphismError, NotAGroupError, NotASubgroupError

SMALL = gr.small_groups(9)


def brute_homs(G, H):
    """All maps G -> H respecting multiplication, by exhaustion."""
    out = []
    for imgs in itertools.product(range(H.order), repeat=G.order):
        f = np.array(imgs)
        if np.array_equal(f[G.mul], H.mul[np.ix_(f, f)]):
            out.append(tuple(imgs))
    return out


@pytest.mark.parametrize("G", SMALL, ids=lambda G: G.name)
def test_group_axioms(G):
    n = G.order
    M = G.mul
    assert np.array_equal(M[G.identity], np.arange(n))
    assert all(M[g, G.inv[g]] == G.identity for g in range(n))
    assert np.array_equal(M[M], M[:, M].transpose(1, 0, 2)) or all(
        M[M[a, b], c] == M[a, M[b, c]] for a in range(n) for b in range(n) for c in range(n))
    assert len(G.closure(G.gens)) == n


def test_catalog_types_are_distinct():
    # OEIS A000001: number of groups of order 1..9
    counts = Counter(G.order for G in SMALL)
    assert [counts[n] for n in range(1, 10)] == [1, 1, 1, 2, 1, 2, 1, 5, 2]
    for G, H in itertools.combinations(SMALL, 2):
        if G.order == H.order:
            assert not gr.is_isomorphic_brute(G, H), (G.name, H.name)


def test_quaternion_and_dihedral_invariants():
    Q, D = gr.quaternion(), gr.dihedral(4)
    # Q8: one involution; D4: five
    assert sum(Q.element_order(g) == 2 for g in range(8)) == 1
    assert sum(D.element_order(g) == 2 for g in range(8)) == 5
    assert not Q.is_abelian() and not D.is_abelian()


@pytest.mark.parametrize("pair", [(2, 2), (4, 2), (2, 4), (3, 3), (4, 6), (6, 4)])
def test_hom_count_cyclic(pair):
    G, H = gr.cyclic(pair[0]), gr.cyclic(pair[1])
    assert len(gr.all_homs(G, H)) == len(brute_homs(G, H))


@pytest.mark.parametrize("G,H", [(gr.elementary_abelian(2, 2), gr.cyclic(2)),
                                 (gr.symmetric3(), gr.cyclic(2)),
                                 (gr.cyclic(4), gr.elementary_abelian(2, 2))])
def test_hom_search_matches_exhaustion(G, H):
    found = {tuple(h.images.tolist()) for h in gr.all_homs(G, H)}
    assert found == set(brute_homs(G, H))


def test_search_order_is_lexicographic():
    G, H = gr.cyclic(4), gr.cyclic(4)
    images = [h(1) for h in gr.search_homs(G, H, gens=[1])]
    assert images == sorted(images)


def test_hom_rejects_bad_relation():
    with pytest.raises(HomomorphismError):
        gr.hom(gr.cyclic(3), gr.cyclic(2), [1])


def test_bad_table_rejected():
    with pytest.raises(NotAGroupError):
        gr.from_mul_table([[0, 1], [1, 1]])
    with pytest.raises(NotAGroupError):
        gr.from_mul_table([[0, 1, 2], [1, 0, 2], [2, 2, 0]])


def test_direct_product_indexing():
    G = gr.direct_product(gr.cyclic(2), gr.cyclic(3))
    for a, b, c, d in itertools.product(range(2), range(3), range(2), range(3)):
        assert G.mul[a * 3 + b, c * 3 + d] == ((a + c) % 2) * 3 + (b + d) % 3
    assert gr.is_isomorphic_brute(G, gr.cyclic(6))


def test_matrix_group_closure():
    G, M = gr.from_matrix_generators(2, 2, [[[1, 1], [0, 1]], [[0, 1], [1, 0]]])
    assert G.order == 6
    for a in range(6):
        for b in range(6):
            assert np.array_equal(M[a] @ M[b] % 2, M[G.mul[a, b]])


@given(st.sampled_from(SMALL), st.data())
def test_subgroup_closure_and_embedding(G, data):
    gens = data.draw(st.lists(st.integers(0, G.order - 1), max_size=2))
    S = gr.subgroup(G, gens)
    assert G.order % len(S) == 0
    assert G.is_subgroup(S.members)
    emb = S.embedding
    assert emb.source.order == len(S)
    assert sorted(emb.images.tolist()) == sorted(S.members)


def test_kernel_image_and_restriction():
    G = gr.cyclic(8)
    h = gr.hom(G, gr.cyclic(4), [1])
    assert h.kernel().members == (0, 4)
    assert gr.is_surjective(h)
    S = gr.subgroup(G, [2])
    r = h.restrict(S)
    assert sorted(r.images.tolist()) == [0, 0, 2, 2]
    with pytest.raises(NotASubgroupError):
        h.restrict(gr.subgroup(gr.cyclic(4), [1]))


def test_cyclic_subgroups_of_klein_four():
    subs = gr.cyclic_subgroups(gr.elementary_abelian(2, 2))
    assert sorted(len(S) for S in subs) == [1, 2, 2, 2]
