import pytest

from gmtwist.construct import (
    Parameters,
    block_graph,
    block_intersection_sizes,
    design_lambda,
    distorted_block,
    grassmann,
    intersect_hyperplane,
    jt_design,
    canonical_grassmann,
    pg_design,
    phi_map,
    psi_map,
    split_A_B,
    switching_partition,
    twisted_grassmann,
    verify_2_design,
    verify_lemma1_counts,
    verify_ta_rule,
)
from gmtwist.errors import DomainError, ParameterError
from gmtwist.graph import check_equitable, check_isomorphism, gm_switch, validate_gm
from gmtwist.subspace import (
    apply_polarity,
    contains,
    dim_intersection,
    enumerate_subspaces,
    gaussian_binomial,
)


def test_parameters_validation():
    p = Parameters(2, 2)
    assert p.n == 5 and p.vertex_count == 155
    assert Parameters(3, 2).vertex_count == 1210
    with pytest.raises(ParameterError):
        Parameters(6, 2)
    with pytest.raises(ParameterError):
        Parameters(2, 0)


def test_grassmann_small():
    G = grassmann(4, 2, 2)
    assert G.n == 35 and G.is_regular() and G.degree(0) == 18
    # sanity against the closed-form valency q [k,1] [n-k,1]
    assert G.degree(0) == 2 * gaussian_binomial(2, 1, 2) * gaussian_binomial(2, 1, 2)
    # k = 1: any two distinct points meet in dim 0, so the graph is complete
    K = grassmann(3, 1, 2)
    assert K.n == 7 and all(K.degree(v) == 6 for v in range(7))


def test_canonical_grassmann_matches_generic(params22):
    G = canonical_grassmann(params22)
    H = grassmann(5, 3, 2)
    assert G.n == H.n == 155 and list(G.adj) == list(H.adj)
    assert G.is_regular() and G.degree(0) == 42


def test_split_counts(params22):
    A, B, D = split_A_B(params22)
    assert (len(A), len(B), len(D)) == (140, 15, 15)
    # A members meet H in dimension e; D members lie inside H
    for W in A[:20]:
        assert intersect_hyperplane(W).dim == 2
    for W in D:
        assert intersect_hyperplane(W) == W
    A3, B3, D3 = split_A_B(Parameters(3, 2))
    assert (len(A3), len(B3), len(D3)) == (1170, 40, 40)


def test_intersect_hyperplane_properties(params22):
    A, _, _ = split_A_B(params22)
    for W in A[:30]:
        U = intersect_hyperplane(W)
        assert contains(W, U)
        assert all(r[-1] == 0 for r in U.basis)
        assert U.dim == W.dim - 1


def test_switching_partition_census(params22, sigma22, info22):
    hist = info22.cell_size_histogram()
    assert hist == {4: 15, 8: 10}
    assert len(info22.partition.cells) == 25
    assert len(info22.partition.exempt) == 15
    # size-4 cells come from isotropic U (sigma-fixed), size-8 from true pairs
    fixed = sum(1 for U, sU in info22.pairs if U == sU)
    assert fixed == 15 and len(info22.pairs) == 25
    info3 = switching_partition(Parameters(3, 2), standard_polarity_3())
    assert info3.cell_size_histogram() == {9: 40, 18: 45}


def standard_polarity_3():
    from gmtwist.construct import standard_polarity

    return standard_polarity(Parameters(3, 2))


def test_gm_hypothesis_and_tallies(G22, info22):
    rep = validate_gm(G22, info22.partition)
    assert rep.passed
    assert rep.tallies == {"zero": 270, "half": 60, "full": 45}
    assert rep.tallies["half"] > 0  # the switch is not the identity


def test_lemma1_singleton_cells(params22):
    # singleton cells are trivially equitable; diagonal lift is q*0 + q^e - 1
    subs = enumerate_subspaces(params22.ctx, 4, 2)
    embedded = [
        U for U in switching_partition(params22, standard_polarity_22()).cells_by_U
    ]
    cells = [[U] for U in sorted(embedded)]
    rep = verify_lemma1_counts(params22, cells)
    assert rep.ok
    for i in range(len(cells)):
        assert rep.lifted_quotient[i][i] == 2 * rep.small_quotient[i][i] + 3
    assert len(subs) == len(embedded) == 35


def standard_polarity_22():
    from gmtwist.construct import standard_polarity

    return standard_polarity(Parameters(2, 2))


def test_lemma1_one_cell(params22, info22):
    # the whole of J_q(2e,e) as one cell: lifted degree q*18 + 3 = 39
    all_U = sorted(info22.cells_by_U)
    rep = verify_lemma1_counts(params22, [all_U])
    assert rep.ok
    assert rep.small_quotient == [[18]] and rep.lifted_quotient == [[39]]


def test_lemma1_pair_cells(params22, sigma22, info22):
    # cells {U, sigma(U)}: equitable because sigma preserves intersection dims
    cells = []
    for U, sU in info22.pairs:
        cells.append([U] if U == sU else [U, sU])
    rep = verify_lemma1_counts(params22, cells)
    assert rep.ok and not rep.mismatches


def test_lemma1_rejects_non_equitable(params22, info22):
    all_U = sorted(info22.cells_by_U)
    lopsided = [all_U[:1] + all_U[2:], [all_U[1]]]
    # {everything-but-one, one} is not equitable for J_2(4,2)
    with pytest.raises(ParameterError):
        verify_lemma1_counts(params22, lopsided)


def test_pre_switch_rule(G22, params22, sigma22, info22):
    # before switching, W1 in C_U is adjacent to W2 in D exactly when W2
    # contains U itself (not sigma(U))
    from gmtwist.subspace import mask_contains, vector_mask

    d_masks = {i: vector_mask(G22.labels[i]) for i in info22.d_indices}
    for U, members in info22.cells_by_U.items():
        u_mask = vector_mask(U)
        for w1 in members:
            for w2, m2 in d_masks.items():
                assert bool(G22.adj[w1] >> w2 & 1) == mask_contains(m2, u_mask)


def test_ta_rule_after_switching(switched22, params22, sigma22):
    rep = verify_ta_rule(switched22, params22, sigma22)
    assert rep.ok and rep.pairs_checked == 140 * 15 and not rep.violations


def test_ta_rule_fails_before_switching(G22, params22, sigma22):
    rep = verify_ta_rule(G22, params22, sigma22)
    assert not rep.ok


def test_twisted_grassmann_structure(params22):
    T = twisted_grassmann(params22)
    assert T.n == 155 and T.is_regular() and T.degree(0) == 42
    A, B, _ = split_A_B(params22)
    na = len(A)
    # A-B adjacency is containment, B-B adjacency is meeting in dim e-2
    for i in range(na, T.n):
        for j in range(na, T.n):
            if i < j:
                expect = dim_intersection(T.labels[i], T.labels[j]) == 0
                assert T.has_edge(i, j) == expect
        for j in range(na):
            assert T.has_edge(i, j) == contains(T.labels[j], T.labels[i])
    with pytest.raises(DomainError):
        twisted_grassmann(Parameters(2, 1))


def test_switched_equals_neither_original(G22, switched22):
    assert switched22 != G22
    assert gm_switch(switched22, switching_partition(Parameters(2, 2), standard_polarity_22()).partition) == G22


# ---------------------------------------------------------------------------
# designs


def test_pg_design(params22):
    D = pg_design(params22)
    chk = verify_2_design(D)
    assert chk.ok and (chk.v, chk.k, chk.lam) == (31, 7, 7)
    assert chk.lam == design_lambda(params22)
    assert len(D.blocks) == 155


def test_jt_design(params22, sigma22):
    D = jt_design(params22, sigma22)
    chk = verify_2_design(D)
    assert chk.ok and (chk.v, chk.k, chk.lam) == (31, 7, 7)
    assert len(D.blocks) == 155
    # the distortion is real: some block is not the point set of any subspace
    geometric_blocks = set(pg_design(params22).blocks)
    assert any(b not in geometric_blocks for b in D.blocks)
    # blocks are canonically sorted by point set
    assert list(D.blocks) == sorted(D.blocks)


def test_designs_at_q3():
    params = Parameters(3, 2)
    from gmtwist.construct import standard_polarity

    sigma = standard_polarity(params)
    for D in (pg_design(params), jt_design(params, sigma)):
        chk = verify_2_design(D)
        assert chk.ok and (chk.v, chk.k, chk.lam) == (121, 13, 13)
        assert chk.lam == design_lambda(params)


def test_verify_2_design_catches_mutations(params22):
    D = pg_design(params22)
    from gmtwist.construct import Design

    # dropping a block breaks pair-count constancy
    broken = Design(D.params, D.points, D.blocks[1:], D.provenance)
    assert not verify_2_design(broken).ok
    # a short block breaks size uniformity
    ragged = Design(D.params, D.points, D.blocks[:-1] + (D.blocks[-1][:-1],), D.provenance)
    assert not verify_2_design(ragged).ok


def test_block_intersection_sizes(params22, sigma22):
    for D in (pg_design(params22), jt_design(params22, sigma22)):
        hist = block_intersection_sizes(D)
        assert set(hist) == {1, 3}
        assert sum(hist.values()) == 155 * 154 // 2


def test_block_graph_identity(params22, sigma22):
    # blocks of the geometric design in generating-subspace order: the
    # size-3 intersection graph is literally the Grassmann graph
    D = pg_design(params22)
    BG = block_graph(D, 3)
    assert list(BG.adj) == list(canonical_grassmann(params22).adj)
    # s larger than the block size gives an edgeless graph
    assert all(m == 0 for m in block_graph(D, 8).adj)


def test_phi_is_isomorphism(params22, sigma22, switched22):
    phi = phi_map(params22, sigma22)
    assert phi.injective
    D = jt_design(params22, sigma22)
    BG = block_graph(D, 3)
    # phi carries the switched graph onto the distorted design's block graph
    assert check_isomorphism(switched22, BG, phi.mapping).ok
    # but it does not carry the unswitched graph there
    assert not check_isomorphism(canonical_grassmann(params22), BG, phi.mapping).ok
    # phi moves some vertex: the two designs differ
    identity_like = all(
        D.blocks[phi.mapping[i]] == pg_design(params22).blocks[i] for i in range(155)
    )
    assert not identity_like


def test_psi_is_isomorphism(params22, sigma22):
    psi = psi_map(params22, sigma22)
    assert psi.injective
    D = jt_design(params22, sigma22)
    BG = block_graph(D, 3)
    assert check_isomorphism(twisted_grassmann(params22), BG, psi.mapping).ok


def test_psi_restricted_to_A_matches_phi(params22, sigma22):
    phi = phi_map(params22, sigma22)
    psi = psi_map(params22, sigma22)
    A, _, _ = split_A_B(params22)
    from gmtwist.construct import _all_vertices

    verts = list(_all_vertices(params22))
    a_positions = [i for i, W in enumerate(verts) if W in set(A)]
    for k, i in enumerate(a_positions):
        assert psi.mapping[k] == phi.mapping[i]


def test_distorted_block_shape(params22, sigma22):
    A, _, _ = split_A_B(params22)
    for W in A[:25]:
        b = distorted_block(params22, sigma22, W)
        assert len(b) == 7 and b == tuple(sorted(b))
