import pytest
from hypothesis import given

from bases import guillotine_basis, pinwheel_basis, random_tiling_basis
from opbkit import linalg
from opbkit.core import classify_completeness, is_orthogonal_set, same_directions
from opbkit.fileformat import serialize_state_set
from opbkit.linalg import Scalar
from opbkit.measurement import (
    PVM,
    Closure,
    Projector,
    PVMError,
    apply_projector,
    apply_pvm,
    enumerate_op_pvms,
    enumerate_op_pvms_report,
    is_op_projector,
    is_orthogonality_preserving,
    splits_candidates,
)
from strategies import rngs


def e(d, *ks):
    return [tuple(1 if i == k else 0 for i in range(d)) for k in ks]


K_B1 = Projector(1, e(6, 0, 1, 2))
K_B2 = Projector(1, e(6, 3, 4, 5))


def test_projector_identity_independent_of_spanning_set():
    a = Projector(0, [(1, 1, 0), (1, -1, 0)])
    b = Projector(0, e(3, 0, 1))
    assert a == b and hash(a) == hash(b)
    m = a.matrix
    assert linalg.matmul(m, m) == m and linalg.trace(m) == Scalar(2)


def test_pvm_validation():
    with pytest.raises(PVMError, match="orthogonal"):
        PVM(0, (Projector(0, [(1, 0)]), Projector(0, [(1, 1)])))
    with pytest.raises(PVMError, match="ranks sum"):
        PVM(0, (Projector(0, e(3, 0)), Projector(0, e(3, 1))))
    done = PVM.completed(0, [Projector(0, e(3, 0))], 3)
    assert [p.rank for p in done.elements] == [1, 2]


def test_s1_alice_enumeration_is_the_single_coarse_graining(s1):
    rep = enumerate_op_pvms_report(s1, 0)
    assert rep.complete
    assert len(rep.pvms) == 1
    assert rep.pvms[0].elements == (Projector(0, e(3, 0)), Projector(0, e(3, 1, 2)))


def test_s1_bob_has_no_move(s1):
    assert enumerate_op_pvms(s1, 1) == []


def test_s2_block_measurement(s2):
    m = PVM(1, (K_B1, K_B2))
    assert is_orthogonality_preserving(s2, m)
    assert splits_candidates(s2, m)
    for out in apply_pvm(s2, m):
        assert out.closure is Closure.NEW_DIRECTIONS
        assert len(out.survivors) == 5 and out.eliminated_labels == ()
        assert is_orthogonal_set(out.survivors)[0]


def test_s2_enumeration_contains_block_measurement(s2):
    rep = enumerate_op_pvms_report(s2, 1)
    assert not rep.complete
    assert any(n.startswith("INCOMPLETE_ENUMERATION") for n in rep.notes)
    assert PVM(1, (K_B1, K_B2)) in rep.pvms
    # outcome 0 is the low block
    assert next(m for m in rep.pvms if m == PVM(1, (K_B1, K_B2))).elements[0] == K_B1


def test_projector_on_wrong_party(s1):
    with pytest.raises(ValueError):
        apply_projector(s1, Projector(0, e(4, 0)))


def _random_complete(rng):
    if rng.random() < 0.5:
        return random_tiling_basis(rng.randint(2, 4), rng.randint(2, 4), rng)
    return guillotine_basis((rng.randint(2, 3), rng.randint(2, 3)), rng)


@given(rngs)
def test_closure_on_complete_bases(rng):
    s = _random_complete(rng)
    for p in range(2):
        for m in enumerate_op_pvms(s, p):
            for out in apply_pvm(s, m):
                assert out.closure is Closure.SUBSET
                assert len(out.survivors) < len(s)
                for st in out.survivors.states:
                    assert same_directions(st, s.state(st.label))


@given(rngs)
def test_enumerated_pvms_are_sound(rng):
    s = _random_complete(rng)
    keep = [x.label for x in s.states if rng.random() < 0.7]
    sub = s.subset(keep)
    for p in range(2):
        for m in enumerate_op_pvms(sub, p):
            assert sum(el.rank for el in m.elements) == s.dims[p]
            assert is_orthogonality_preserving(sub, m)
            assert splits_candidates(sub, m)
            assert all(is_op_projector(sub, el) for el in m.elements)


@given(rngs)
def test_projection_idempotent(rng):
    s = _random_complete(rng)
    for p in range(2):
        for m in enumerate_op_pvms(s, p):
            for el in m.elements:
                once = apply_projector(s, el).survivors
                twice = apply_projector(once, el).survivors
                assert serialize_state_set(once) == serialize_state_set(twice)


def test_pinwheel_has_no_move():
    s = pinwheel_basis()
    assert classify_completeness(s).tag.value == "COMPLETE"
    assert enumerate_op_pvms(s, 0) == [] and enumerate_op_pvms(s, 1) == []
