import itertools

import pytest
from hypothesis import given, settings

from bases import guillotine_basis, pinwheel_basis, random_tiling_basis
from opbkit import corpus, linalg
from opbkit.core import NotOrthogonalError, ProductState, StateSet, same_directions, state_overlap
from opbkit.discrimination import ProtocolSearch, Verdict, is_upb, replay_protocol, search_protocol
from opbkit.measurement import Projector
from opbkit.report import tree_obj
from oracles import upb_oracle
from strategies import rngs


def e(d, *ks):
    return [tuple(1 if i == k else 0 for i in range(d)) for k in ks]


def test_s1_protocol(s1):
    v = search_protocol(s1, 6)
    assert v.verdict is Verdict.DISTINGUISHABLE
    root = v.tree
    assert root.pvm.party == 0
    assert root.pvm.elements == (Projector(0, e(3, 0)), Projector(0, e(3, 1, 2)))
    assert replay_protocol(root)
    assert sorted(leaf.identified for leaf in root.leaves()) == sorted(s1.labels)
    for node in root.walk():
        for st in node.candidates.states:
            assert same_directions(st, s1.state(st.label))


def test_s1_depth_budget(s1):
    v = search_protocol(s1, 1)
    assert v.verdict is Verdict.UNKNOWN_DEPTH_EXCEEDED
    assert search_protocol(s1, 4).verdict is Verdict.DISTINGUISHABLE
    assert search_protocol(s1, 3).verdict is Verdict.UNKNOWN_DEPTH_EXCEEDED


def test_s2_protocol(s2):
    v = search_protocol(s2, 8)
    assert v.verdict is Verdict.DISTINGUISHABLE
    assert v.depth_used == 2
    assert v.tree.pvm.party == 0
    assert [p.rank for p in v.tree.pvm.elements] == [1, 1, 1]
    assert replay_protocol(v.tree)


def test_tiles_indistinguishable(tiles):
    v = search_protocol(tiles, 8)
    assert v.verdict is Verdict.INDISTINGUISHABLE_PROJECTIVE
    assert v.blocking is not None and set(v.blocking.labels) == set(tiles.labels)


def test_pinwheel_indistinguishable():
    assert search_protocol(pinwheel_basis()).verdict is Verdict.INDISTINGUISHABLE_PROJECTIVE


def test_trivial_sets(s1):
    one = s1.subset(["2,2"])
    v = search_protocol(one)
    assert v.verdict is Verdict.DISTINGUISHABLE and v.depth_used == 0 and v.tree.identified == "2,2"
    empty = s1.subset([])
    assert search_protocol(empty).verdict is Verdict.DISTINGUISHABLE


def test_requires_orthogonality():
    s = StateSet((2, 2), [ProductState.of("a", (1, 0), (1, 0)), ProductState.of("b", (1, 1), (1, 0))])
    with pytest.raises(NotOrthogonalError):
        search_protocol(s)


def test_deterministic(s1, s2):
    for s in (s1, s2):
        assert tree_obj(search_protocol(s).tree) == tree_obj(search_protocol(s).tree)


def test_memo_hits_replay_exactly(s1):
    search = ProtocolSearch()
    search.run(s1)
    # same geometry, different scale: the memoized tree must be rebound to the new coordinates
    scaled = s1.with_states(
        ProductState.of(st.label, linalg.scale(linalg.Scalar(3), st.coords(0)), st.coords(1)) for st in s1.states
    )
    v = search.run(scaled)
    assert v.tree.candidates is scaled
    assert replay_protocol(v.tree)


@settings(max_examples=25)
@given(rngs)
def test_guillotine_bases_are_distinguished(rng):
    dims = rng.choice([(2, 2), (3, 2), (3, 3), (2, 2, 2)])
    s = guillotine_basis(dims, rng)
    v = search_protocol(s)
    assert v.verdict is Verdict.DISTINGUISHABLE
    assert replay_protocol(v.tree)
    assert sorted(leaf.identified for leaf in v.tree.leaves()) == sorted(s.labels)


# -- unextendibility ---------------------------------------------------------


def _witness_ok(s, w) -> bool:
    return all(not state_overlap(w, st) for st in s.states)


def test_tiles_is_upb(tiles):
    assert is_upb(tiles).unextendible
    assert is_upb(corpus.load("tiles_kb2")).unextendible


def test_s1_eight_subsets_extendible(s1):
    for drop in s1.labels:
        sub = s1.subset([x for x in s1.labels if x != drop])
        r = is_upb(sub)
        assert not r.unextendible
        assert _witness_ok(sub, r.witness)
        # the only product state left is the one removed
        assert same_directions(r.witness, s1.state(drop))


def test_complete_basis_admits_no_extension(s1):
    assert is_upb(s1).unextendible


def test_s2_extendible(s2):
    r = is_upb(s2)
    assert not r.unextendible and _witness_ok(s2, r.witness)


@settings(max_examples=30)
@given(rngs)
def test_upb_matches_numeric_oracle(rng):
    s = random_tiling_basis(rng.randint(2, 3), rng.randint(2, 3), rng)
    keep = [x.label for x in s.states if rng.random() < 0.7]
    sub = s.subset(keep)
    r = is_upb(sub)
    assert r.unextendible == upb_oracle(sub)
    if not r.unextendible:
        assert _witness_ok(sub, r.witness)


def test_upb_three_parties():
    # Shifts UPB in 2x2x2
    s = StateSet(
        (2, 2, 2),
        [
            ProductState.of("a", (1, 0), (1, 0), (1, 0)),
            ProductState.of("b", (0, 1), (1, 1), (1, -1)),
            ProductState.of("c", (1, -1), (0, 1), (1, 1)),
            ProductState.of("d", (1, 1), (1, -1), (0, 1)),
        ],
    )
    assert is_upb(s).unextendible and upb_oracle(s)
    r = is_upb(s.subset(["a", "b", "c"]))
    assert not r.unextendible and _witness_ok(s.subset(["a", "b", "c"]), r.witness)


def test_assignment_enumeration_exhaustive_small():
    # every subset of the 2x2 standard basis except the full set is extendible
    base = [ProductState.of(f"{i}{j}", e(2, i)[0], e(2, j)[0]) for i in range(2) for j in range(2)]
    for r in range(0, 4):
        for sub in itertools.combinations(base, r):
            assert not is_upb(StateSet((2, 2), sub)).unextendible
