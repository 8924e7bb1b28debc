import itertools

import numpy as np
import pytest

from reltilt import exactlin as el
from reltilt import fixtures as fx
from reltilt.quiverrep import is_isomorphic, tau
from reltilt.quiverrep.module import direct_sum, hom_dim, standard_module
from reltilt.relclust import RelClustError, make_context
from reltilt.tautilt import TauPair
from reltilt.tricat import TriObject, hom_space_dim, ideal_basis, obj, rigidity, shift, tri_hom


def C(name):
    return fx.context(name)


def O(ctx, labels):
    return obj(ctx.B, labels)


# construction of Lambda

def test_lambda_of_stable_fixture_is_lam_prime():
    ctx = C("ST")
    L = ctx.Lambda
    assert L.n_vertices == 2 and L.dim == 4 and len(ctx.arrows) == 2
    assert sorted((s, t) for _, s, t in ctx.arrows) == [("a", "b"), ("b", "a")]


def test_lambda_of_repetitive_fixture_is_two_A2():
    ctx = C("RC2")
    L = ctx.Lambda
    assert L.n_vertices == 4 and L.dim == 6
    assert sorted((s, t) for _, s, t in ctx.arrows) == [("a", "b"), ("c", "d")]


def test_lambda_of_3cc3_is_seven_cycle():
    ctx = C("3CC3")
    L = ctx.Lambda
    assert L.n_vertices == 7 and L.dim == 14
    succ = {s: t for _, s, t in ctx.arrows}
    v, seen = "1", []
    for _ in range(7):
        seen.append(v)
        v = succ[v]
    assert v == "1" and sorted(seen) == sorted(L.vertices)


def test_make_context_rejects_non_cluster_tilting():
    B = fx.backend("ST")
    with pytest.raises(RelClustError):
        make_context(B, ["2"])


# bar

@pytest.mark.parametrize("name", ["ST", "RC2", "3CC3", "CC3"])
def test_bar_of_T_is_regular_and_bar_kills_T_shift(name):
    ctx = C(name)
    L = ctx.Lambda
    reg = direct_sum([standard_module(L, "projective", v) for v in L.vertices], L)[0]
    assert is_isomorphic(ctx.bar(ctx.T), reg)
    assert ctx.bar(ctx.T1).dim == 0


def test_bar_of_rc2_row_one_is_regular():
    ctx = C("RC2")
    X = O(ctx, ["1/2[2]", "1[2]", "1", "2[1]"])
    L = ctx.Lambda
    reg = direct_sum([standard_module(L, "projective", v) for v in L.vertices], L)[0]
    assert is_isomorphic(ctx.bar(X), reg)


@pytest.mark.parametrize("name", ["ST", "RC2", "CC3"])
def test_bar_is_a_functor(name):
    ctx = C(name)
    B = ctx.B
    rng = np.random.default_rng(5)
    for _ in range(30):
        x, y, z = (TriObject((int(rng.integers(B.n)),)) for _ in range(3))
        fs, gs = tri_hom(B, x, y), tri_hom(B, y, z)
        if not fs or not gs:
            continue
        f, g = fs[rng.integers(len(fs))], gs[rng.integers(len(gs))]
        lhs = ctx.bar(g.compose(f))
        rhs = ctx.bar(g).compose(ctx.bar(f))
        assert all((a == b).all() for a, b in zip(lhs.maps, rhs.maps))
        assert ctx.bar(f).is_homomorphism()


# tilde

@pytest.mark.parametrize("name", ["ST", "RC2", "3CC3"])
def test_tilde_round_trip(name):
    ctx = C(name)
    for p in ctx.tt.enumerate(check_bruteforce=False).nodes:
        X = ctx.tilde_inv(p)
        assert ctx.tilde(X) == p
    assert ctx.tilde(ctx.T1) == TauPair.of((), ctx.Lambda.vertices)


def test_tilde_rc2_row_seven_is_zero_module():
    ctx = C("RC2")
    p = ctx.tilde(O(ctx, ["1/2", "1[1]", "2", "2[2]"]))
    assert not p.M and len(p.P) == 4


def test_tilde_of_W():
    ctx = C("3CC3")
    W = O(ctx, fx.golden("example-2.15")["W"])
    assert ctx.module_labels(ctx.tilde(W)) == ["4/5", "5", "5/6"]


# ghost ideal

def test_ghost_ideal_vanishes_without_maps_to_T_shift():
    ctx = C("RC2")
    B = ctx.B
    for x, y in itertools.product(range(B.n), repeat=2):
        X, Y = TriObject((x,)), TriObject((y,))
        if hom_space_dim(B, X, ctx.T1) == 0:
            assert ctx.ghost_dim(X, Y) == 0
        assert ctx.ghost_dim(X, Y) <= B.hom_dim(x, y)


def test_W_has_self_extensions_outside_the_ghost_ideal():
    ctx = C("3CC3")
    W = O(ctx, fx.golden("example-2.15")["W"])
    W1 = shift(ctx.B, W)
    assert hom_space_dim(ctx.B, W, W1) != 0
    assert ctx.ghost_dim(W, W1) == 0
    flags = ctx.classify_T1(W)
    assert flags.t1_cluster_tilting and not rigidity(ctx.B, W, "rigid")


def test_ghost_dimension_identity_on_random_rc2_objects():
    # dim [T[1]](X', X[1]) = dim Hom(bar X', tau bar X')
    ctx = C("RC2")
    B = ctx.B
    rng = np.random.default_rng(2)
    for _ in range(10):
        X = TriObject(tuple(sorted({int(v) for v in rng.integers(B.n, size=int(rng.integers(1, 5)))})))
        Xp, _ = ctx.split(X)
        if not Xp.summands:
            continue
        M = ctx.bar(Xp)
        assert ctx.ghost_dim(Xp, shift(B, X)) == hom_dim(M, tau(M))


# classify_T1

@pytest.mark.parametrize("name", list(fx.BACKENDS))
def test_T_is_T1_cluster_tilting(name):
    ctx = C(name)
    assert ctx.classify_T1(ctx.T).t1_cluster_tilting


@pytest.mark.parametrize("name", ["CC2", "CC3"])
def test_2cy_rigid_collapse(name):
    ctx = C(name)
    B = ctx.B
    for k in range(1, len(ctx.T) + 1):
        for c in itertools.combinations(range(B.n), k):
            X = TriObject(c)
            assert ctx.classify_T1(X).t1_rigid == rigidity(B, X, "rigid")


@pytest.mark.parametrize("name", list(fx.BACKENDS))
def test_ghost_vanishing_criterion_for_rigidity(name):
    # [T[1]](M, N[1]) = 0 and [T[1]](N, tau M) = 0 iff Hom(M, N[1]) = 0
    ctx = C(name)
    B = ctx.B
    for m, n in itertools.product(range(B.n), repeat=2):
        M, N = TriObject((m,)), TriObject((n,))
        lhs = ctx.ghost_dim(M, shift(B, N)) == 0 and ctx.ghost_dim(N, TriObject((B.tau_label(m),))) == 0
        assert lhs == (hom_space_dim(B, M, shift(B, N)) == 0)


# star order

def test_star_contains_examples():
    ctx = C("ST")
    top, bottom = O(ctx, ["2/1/2", "2"]), O(ctx, ["1", "1/2/1"])
    assert not ctx.star_contains(bottom, top, cross_check=True)
    assert ctx.star_contains(top, bottom, cross_check=True)
    for M in (top, bottom):
        assert ctx.star_contains(M, M, cross_check=True)
        assert ctx.star_contains(M, ctx.T1, cross_check=True)


@pytest.mark.parametrize("name", ["ST", "RC2"])
def test_star_criterion_matches_triangle_search(name):
    ctx = C(name)
    objs = [ctx.tilde_inv(p) for p in ctx.tt.enumerate(check_bruteforce=False).nodes]
    for M in objs[:8]:
        for x in range(ctx.B.n):
            ctx.star_contains(M, TriObject((x,)), cross_check=True)


def test_rel_poset_stable_fixture():
    ctx = C("ST")
    P = ctx.rel_poset()
    assert len(P) == 6 and sum(P.cluster_tilting) == 2
    labels = [ctx.object_labels(X) for X in P.objects]
    top = labels.index(sorted(["2/1/2", "2"]))
    bottom = labels.index(sorted(["1", "1/2/1"]))
    assert all(P.order[top, j] for j in range(6)) and all(P.order[i, bottom] for i in range(6))
    # hexagon: 6 covers, every element covers or is covered by exactly two others
    assert len(P.edges()) == 6
    deg = [sum(i in e for e in P.edges()) for i in range(6)]
    assert deg == [2] * 6


@pytest.mark.parametrize("name,n,ct", [("RC2", 25, 5), ("CC2", 5, 5), ("CC3", 14, 14)])
def test_rel_poset_counts(name, n, ct):
    P = C(name).rel_poset()
    assert len(P) == n and sum(P.cluster_tilting) == ct


# T[1]-projectives

def test_t1_projectives_examples():
    ctx = C("ST")
    assert ctx.t1_projectives(ctx.T).multiset() == ctx.T.multiset()
    M = O(ctx, ["1", "1/2/1"])
    assert ctx.t1_projectives(M).multiset() == M.multiset()


def test_t1_projectives_rc2_all_objects():
    ctx = C("RC2")
    for p in ctx.tt.enumerate(check_bruteforce=False).nodes:
        X = ctx.tilde_inv(p)
        assert ctx.t1_projectives(X).multiset() == X.multiset()


# mutation

def test_mutation_examples_stable():
    ctx = C("ST")
    top = O(ctx, ["2/1/2", "2"])
    m = ctx.mutate_t1(top, "2")
    assert ctx.B.name(m.y) == "2/1" and m.direction == "left"
    m2 = ctx.mutate_t1(top, "2/1/2")
    assert ctx.B.name(m2.y) == "1/2"


@pytest.mark.parametrize("name", ["ST", "RC2"])
def test_mutation_involution(name):
    ctx = C(name)
    for p in ctx.tt.enumerate(check_bruteforce=False).nodes:
        M = ctx.tilde_inv(p)
        for x in M.summands:
            m = ctx.mutate_t1(M, x)
            back = ctx.mutate_t1(m.N, m.y)
            assert back.N.multiset() == M.multiset() and back.y == x
            assert {m.direction, back.direction} == {"left", "right"}


def test_mutation_rejects_non_summand():
    ctx = C("ST")
    with pytest.raises(RelClustError):
        ctx.mutate_t1(O(ctx, ["2/1/2", "2"]), "1")


@pytest.mark.parametrize("name", ["ST", "RC2"])
def test_exchange_triangle_matches_module_sequence(name):
    ctx = C(name)
    compared = 0
    for p in ctx.tt.enumerate(check_bruteforce=False).nodes:
        M = ctx.tilde_inv(p)
        for x in M.summands:
            m = ctx.mutate_t1(M, x)
            if m.direction != "left":
                continue
            try:
                cmp = ctx.exchange_triangle_to_sequence(m)
            except RelClustError:
                continue
            compared += 1
            assert cmp.left_approximation and cmp.minimal and cmp.exact and cmp.matches
            if cmp.module_side.sincere:
                assert cmp.multiplicity == 1
    assert compared > 0


def test_exchange_from_top_of_rc2():
    ctx = C("RC2")
    top = ctx.tilde_inv(ctx.tt.top())
    for x in top.summands:
        m = ctx.mutate_t1(top, x)
        assert m.direction == "left"
        assert ctx.exchange_triangle_to_sequence(m).matches


def test_exchange_requires_left_triangle():
    ctx = C("ST")
    bottom = O(ctx, ["1", "1/2/1"])
    m = ctx.mutate_t1(bottom, "1")
    assert m.direction == "right"
    with pytest.raises(RelClustError):
        ctx.exchange_triangle_to_sequence(m)


# factorization ideal and projective dimension

def test_factorization_ideal_trivial_cases():
    ctx = C("RC2")
    d, zero = ctx.factorization_ideal(ctx.T1)
    assert d == hom_space_dim(ctx.B, ctx.T1, ctx.T1) and not zero
    for x in range(ctx.B.n):
        X = TriObject((x,))
        if hom_space_dim(ctx.B, ctx.T1, X) == 0:
            assert ctx.factorization_ideal(X) == (0, True)


def test_factorization_ideal_is_additive():
    # I_{X+Y} = I_X + I_Y as subspaces of End(T[1])
    ctx = C("3CC3")
    B = ctx.B
    F = B.field
    rng = np.random.default_rng(4)
    for _ in range(15):
        x, y = (int(v) for v in rng.integers(B.n, size=2))
        vx = [f.vector() for f in ideal_basis(B, ctx.T1, ctx.T1, (x,))]
        vy = [f.vector() for f in ideal_basis(B, ctx.T1, ctx.T1, (y,))]
        joint = el.rank(F, np.stack(vx + vy, axis=1)) if vx + vy else 0
        assert ctx.factorization_ideal(TriObject((x, y)))[0] == joint


def test_infinite_pd_iff_nonzero_factorization_ideal():
    ctx = C("3CC3")
    for x in range(ctx.B.n):
        if ctx.in_T1(x):
            continue
        X = TriObject((x,))
        assert (ctx.pd(ctx.bar(X)) == float("inf")) == (ctx.factorization_ideal(X)[0] != 0)


@pytest.mark.parametrize("name", list(fx.BACKENDS))
def test_injectives_have_pd_at_most_one(name):
    ctx = C(name)
    L = ctx.Lambda
    for v in L.vertices:
        assert ctx.pd(standard_module(L, "injective", v)) <= 1


# filtered sets

@pytest.mark.parametrize("name,sizes", [("ST", (13, 6, 3, 1)), ("RC2", (121, 25, 4, 4))])
def test_filtered_sets(name, sizes):
    # each set is checked inside filtered_sets to be a bijection onto its Lambda-side image
    fs = C(name).filtered_sets()
    assert tuple(len(fs[k]) for k in ("rigid", "tilt", "tilt_T", "tilt_T0")) == sizes


def test_filtered_sets_2cy():
    ctx = C("CC2")
    fs = ctx.filtered_sets()
    ct = {c for c in itertools.combinations(range(ctx.B.n), 2) if rigidity(ctx.B, TriObject(c), "cluster_tilting")}
    assert {X.multiset() for X, _ in fs["tilt"]} == ct


# output

def test_rel_poset_serializations_are_deterministic():
    a = C("ST").rel_poset()
    b = make_context(fx.backend("ST"), fx.BACKENDS["ST"][1], names=C("ST").names).rel_poset()
    assert a.dumps() == b.dumps() and a.to_dot() == b.to_dot()
