import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reltilt import fixtures as fx
from reltilt.quiverrep import Quiver, build_algebra, tau
from reltilt.quiverrep.module import direct_sum, hom_dim
from reltilt.tautilt import TauPair, TauTilting, TauTiltError


def two_A2():
    q = Quiver.from_lists(["1", "2", "3", "4"], [("a", "1", "2"), ("b", "3", "4")])
    return build_algebra(q, [], name="A2xA2")


TT = {
    "A2": TauTilting(fx.ALGEBRAS["A2"]()),
    "A3": TauTilting(fx.ALGEBRAS["A3"]()),
    "LAM'": TauTilting(fx.lam_prime()),
    "SELF": TauTilting(fx.self_injective()),
    "A2xA2": TauTilting(two_A2()),
}


def oracle_count(tt):
    """Count support tau-tilting pairs from raw Hom computations on direct sums.

    A pair (M, P) with |M| + |P| = n basic summands is counted when Hom(M, tau M) = 0
    and Hom(P, M) = 0, i.e. M has no composition factor at a vertex of P.
    """
    A = tt.algebra
    mods = tt.cat.modules
    n = A.n_vertices
    count = 0
    for k in range(n + 1):
        for ids in itertools.combinations(range(len(mods)), k):
            if ids:
                M = direct_sum([mods[i] for i in ids], A)[0]
                if hom_dim(M, tau(M)):
                    continue
                support = {A.vertices[v] for v in range(n) if M.dims[v]}
            else:
                support = set()
            free = [v for v in A.vertices if v not in support]
            if len(free) >= n - k:
                count += len(list(itertools.combinations(free, n - k)))
    return count


@pytest.mark.parametrize("name,count", [("A2", 5), ("A3", 14), ("LAM'", 6), ("SELF", 6), ("A2xA2", 25)])
def test_counts(name, count):
    # A_n: Catalan numbers; LAM' and SELF: hexagon; disjoint union: product 5 x 5
    poset = TT[name].enumerate()
    assert len(poset) == count


@pytest.mark.parametrize("name", ["A2", "A3", "LAM'", "A2xA2"])
def test_counts_against_raw_hom_oracle(name):
    assert len(TT[name].enumerate(check_bruteforce=False)) == oracle_count(TT[name])


def test_nakayama_seven_count():
    # |stau-tilt| of the rad^2 = 0 cyclic Nakayama algebras: 14, 34, 82 for n = 3, 4, 5 and 478 for n = 7
    tt = TauTilting(fx.nakayama_cycle(7))
    assert len(tt.enumerate()) == 478


@pytest.mark.parametrize("n,count", [(3, 14), (4, 34), (5, 82)])
def test_nakayama_small_counts(n, count):
    tt = TauTilting(fx.nakayama_cycle(n))
    assert len(tt.enumerate(check_bruteforce=False)) == count == oracle_count(tt)


def test_a2_examples():
    tt = TT["A2"]
    cat = tt.cat
    top = tt.top()
    assert sorted(tt.module_names(top)) == ["1/2", "2"]
    assert tt.is_stau_tilting_pair(TauPair.of([cat.id_of("1")], ["2"]))
    assert not tt.is_tau_rigid_pair(TauPair.of([cat.id_of("1"), cat.id_of("2")]))
    assert not tt.is_tau_rigid_pair(TauPair.of([cat.id_of("2")], ["2"]))


def test_mutation_examples_a2():
    tt = TT["A2"]
    cat = tt.cat
    P = TauPair.of([cat.id_of("1/2"), cat.id_of("2")])
    Q = tt.mutate_pair(P, cat.id_of("2"))
    assert sorted(tt.module_names(Q)) == ["1", "1/2"]
    assert tt.mutation_is_down(P, cat.id_of("2"))
    R = tt.mutate_pair(P, cat.id_of("1/2"))
    assert tt.module_names(R) == ["2"] and R.P == frozenset({"1"})


@pytest.mark.parametrize("name", list(TT))
def test_mutation_is_involution_and_two_completions(name):
    tt = TT[name]
    poset = tt.enumerate(check_bruteforce=False)
    for pair in poset.nodes:
        assert pair.size() == tt.n
        for at in tt.summands(pair):
            other = tt.mutate_pair(pair, at)
            almost = tt.remove(pair, at)
            assert set(tt.completions(almost)) == {pair, other}
            back_at = next(a for a in tt.summands(other) if a not in tt.summands(pair))
            assert tt.mutate_pair(other, back_at) == pair


@pytest.mark.parametrize("name", list(TT))
def test_hasse_edges_are_covers(name):
    poset = TT[name].enumerate(check_bruteforce=False)
    assert {(a, b) for a, b, _ in poset.edges} == poset.covers()
    top = poset.index(TT[name].top())
    bottom = poset.index(TT[name].bottom())
    assert all(poset.order[top, j] for j in range(len(poset)))
    assert all(poset.order[i, bottom] for i in range(len(poset)))


@pytest.mark.parametrize("name", ["A2", "A3", "LAM'", "SELF"])
def test_bongartz_is_maximal_completion(name):
    tt = TT[name]
    for U in {frozenset(p.M) - {x} for p in tt.enumerate(check_bruteforce=False).nodes for x in p.M}:
        if not tt.is_tau_rigid_pair(TauPair.of(U)):
            continue
        B = tt.bongartz_completion(U)
        assert U <= B.M and tt.is_stau_tilting_pair(B)
        for C in tt.completions(TauPair.of(U)):
            if not C.P and U <= C.M:
                assert tt.pair_leq(B, C)


@pytest.mark.parametrize("name", ["A2", "A3", "LAM'", "SELF", "A2xA2"])
def test_ext_projectives_of_fac_recovers_M(name):
    tt = TT[name]
    for p in tt.enumerate(check_bruteforce=False).nodes:
        if not p.P and len(p.M) == tt.n:
            assert tt.ext_projectives_of_fac(p.M) == p.M


def test_exchange_sequence_a3():
    tt = TT["A3"]
    cat = tt.cat
    # projective tilting module 1/2/3 + 2/3 + 3; replacing 3 gives 0 -> 3 -> 2/3 -> 2 -> 0
    P = TauPair.of([cat.id_of("1/2/3"), cat.id_of("2/3"), cat.id_of("3")])
    seq = tt.exchange_sequence(P, cat.id_of("3"))
    assert [cat.name(i) for i in seq.middle] == ["2/3"]
    assert [cat.name(i) for i in seq.cokernel_ids] == ["2"]
    assert seq.multiplicity == 1 and seq.sincere
    assert seq.result == tt.mutate_pair(P, cat.id_of("3"))


def test_exchange_sequence_preconditions():
    tt = TT["A2"]
    cat = tt.cat
    with pytest.raises(TauTiltError):
        tt.exchange_sequence(TauPair.of([cat.id_of("1")], ["2"]), cat.id_of("1"))
    # the Bongartz completion of 1/2 is 1/2 + 2, not 1/2 + 1
    with pytest.raises(TauTiltError):
        tt.exchange_sequence(TauPair.of([cat.id_of("1/2"), cat.id_of("1")]), cat.id_of("1"))


def test_mutate_rejects_non_summand():
    tt = TT["A2"]
    cat = tt.cat
    with pytest.raises(TauTiltError):
        tt.mutate_pair(tt.top(), cat.id_of("1"))


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_random_mutation_walk_stays_in_poset(data):
    tt = TT["A3"]
    nodes = set(tt.enumerate(check_bruteforce=False).nodes)
    cur = tt.top()
    for _ in range(data.draw(st.integers(1, 8))):
        at = data.draw(st.sampled_from(tt.summands(cur)))
        nxt = tt.mutate_pair(cur, at)
        assert nxt in nodes
        assert tt.mutation_is_down(cur, at) == (tt.pair_leq(cur, nxt) and cur != nxt)
        cur = nxt


def test_json_and_dot_are_deterministic():
    a = TT["LAM'"].enumerate()
    b = TauTilting(fx.lam_prime()).enumerate()
    assert a.dumps() == b.dumps()
    assert a.to_dot() == b.to_dot()
    assert a.to_dot().startswith("digraph")


def test_bongartz_examples_a2():
    tt = TT["A2"]
    cat = tt.cat
    assert sorted(tt.module_names(tt.bongartz_completion([cat.id_of("1")]))) == ["1", "1/2"]
    assert tt.bongartz_completion([cat.id_of("1/2")]) == tt.top()
    assert tt.bongartz_completion(tt.top().M) == tt.top()


def test_exchange_sequence_not_sincere():
    tt = TT["A2"]
    cat = tt.cat
    seq = tt.exchange_sequence(TauPair.of([cat.id_of("1/2"), cat.id_of("1")]), cat.id_of("1/2"))
    assert seq.cokernel.dim == 0 and not seq.sincere
    assert seq.result == TauPair.of([cat.id_of("1")], ["2"])


def test_lam_prime_examples():
    tt = TT["LAM'"]
    cat = tt.cat
    top = TauPair.of([cat.id_of("a/b"), cat.id_of("b/a")])
    assert top == tt.top()
    assert tt.mutate_pair(top, cat.id_of("b/a")) == TauPair.of([cat.id_of("a/b"), cat.id_of("a")])
    lower = TauPair.of([cat.id_of("b/a"), cat.id_of("b")])
    assert tt.pair_leq(top, lower) and not tt.pair_leq(lower, top)


def test_order_extremes():
    tt = TT["A3"]
    for p in tt.enumerate(check_bruteforce=False).nodes:
        assert tt.pair_leq(tt.top(), p) and tt.pair_leq(p, tt.bottom())


def test_nakayama_support_tau_tilting_pair():
    tt = TauTilting(fx.nakayama_cycle(7))
    cat = tt.cat
    M = [cat.id_of(x) for x in ("4/5", "5", "5/6")]
    P = [v for v in tt.algebra.vertices if v not in ("4", "5", "6")]
    assert tt.is_tau_rigid_pair(TauPair.of(M))
    assert tt.is_stau_tilting_pair(TauPair.of(M, P))
    assert not tt.is_stau_tilting_pair(TauPair.of(M, P[:-1]))


def test_trivial_pairs():
    tt = TT["SELF"]
    assert tt.is_stau_tilting_pair(tt.top()) and tt.is_stau_tilting_pair(tt.bottom())
    assert tt.ext_projectives_of_fac(frozenset()) == frozenset()
