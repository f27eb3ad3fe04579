import math

import numpy as np
import pytest

from ghzgen import entanglement as ent
from ghzgen.states import SparseState

from refvals import ENTANGLEMENT_TABLE


def random_pure3(rng):
    vec = rng.normal(size=8) + 1j * rng.normal(size=8)
    vec /= np.linalg.norm(vec)
    return ent.PureState3(vec.reshape(2, 2, 2))


def random_unitary2(rng):
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(m)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def conditional_state(pipeline, pair):
    for out in pipeline.outcomes:
        if out.pair == pair:
            return ent.PureState3.from_sparse(out.state)
    raise KeyError(pair)


def test_reduction_of_maximally_entangled_outcome(pipeline):
    rho = ent.reduce_single(conditional_state(pipeline, ("D1", "D3")), keep=1)
    assert np.allclose(rho, np.eye(2) / 2, atol=1e-12)


def test_reduction_of_second_outcome_is_diagonal(pipeline):
    rho = ent.reduce_single(conditional_state(pipeline, ("D1", "D4")), keep=1)
    assert np.allclose(rho, np.diag([0.1, 0.9]), atol=1e-12)


def test_reduction_of_product_state():
    state = ent.PureState3.from_sparse(SparseState((1, 3, 5), {("A", "A", "A"): 1.0}))
    rho = ent.reduce_single(state, keep=5)
    assert np.allclose(rho, np.diag([1.0, 0.0]), atol=1e-12)


def test_reduce_rejects_unknown_photon(pipeline):
    with pytest.raises(ValueError):
        ent.reduce_single(conditional_state(pipeline, ("D1", "D3")), keep=2)


def test_entropy_of_maximally_mixed_qubit():
    assert ent.entropy_bits(np.eye(2) / 2) == pytest.approx(1.0, abs=1e-12)


def test_entropy_values_of_second_outcome(pipeline):
    state = conditional_state(pipeline, ("D1", "D4"))
    assert ent.entropy_bits(ent.reduce_single(state, 1)) == pytest.approx(0.469, abs=5e-4)
    # photon 5's reduction carries off-diagonal coherence
    rho5 = ent.reduce_single(state, 5)
    eig = np.linalg.eigvalsh(rho5)
    assert sorted(eig) == pytest.approx([0.5 - math.sqrt(0.24), 0.5 + math.sqrt(0.24)], abs=1e-12)
    assert ent.entropy_bits(rho5) == pytest.approx(0.081, abs=5e-4)


def test_entropy_rejects_bad_trace():
    with pytest.raises(ValueError):
        ent.entropy_bits(np.eye(2))


def test_entropy_rejects_negative_matrix():
    with pytest.raises(ValueError):
        ent.entropy_bits(np.diag([1.5, -0.5]))


def test_tangle_of_reference_states():
    assert ent.three_tangle(ent.PureState3.from_sparse(ent.ghz_sparse())) == pytest.approx(
        1.0, abs=1e-12
    )
    assert ent.three_tangle(ent.PureState3.from_sparse(ent.w_sparse())) == pytest.approx(
        0.0, abs=1e-12
    )


def test_tangle_of_second_outcome(pipeline):
    state = conditional_state(pipeline, ("D1", "D4"))
    assert ent.three_tangle(state) == pytest.approx(0.04, abs=1e-10)


def test_tangle_vanishes_on_biseparable_states():
    rng = np.random.default_rng(5)
    for _ in range(50):
        pair = rng.normal(size=4) + 1j * rng.normal(size=4)
        pair /= np.linalg.norm(pair)
        single = rng.normal(size=2) + 1j * rng.normal(size=2)
        single /= np.linalg.norm(single)
        amps = np.einsum("ij,k->ijk", pair.reshape(2, 2), single)
        assert ent.three_tangle(ent.PureState3(amps)) == pytest.approx(0.0, abs=1e-10)


def test_tangle_local_unitary_invariance():
    rng = np.random.default_rng(17)
    for _ in range(60):
        state = random_pure3(rng)
        tau = ent.three_tangle(state)
        rotated = state.amplitudes
        rotated = np.einsum("ai,ijk->ajk", random_unitary2(rng), rotated)
        rotated = np.einsum("bj,ajk->abk", random_unitary2(rng), rotated)
        rotated = np.einsum("ck,abk->abc", random_unitary2(rng), rotated)
        assert ent.three_tangle(ent.PureState3(rotated)) == pytest.approx(tau, abs=1e-10)


def test_tangle_stays_within_unit_interval():
    rng = np.random.default_rng(23)
    for _ in range(200):
        tau = ent.three_tangle(random_pure3(rng))
        assert 0.0 <= tau <= 1.0


def test_classification_table(pipeline):
    for out in pipeline.outcomes:
        s1, s3, s5, tau, label = ENTANGLEMENT_TABLE[out.pair]
        report = ent.classify(ent.PureState3.from_sparse(out.state))
        assert report.s1 == pytest.approx(s1, abs=5e-4)
        assert report.s3 == pytest.approx(s3, abs=5e-4)
        assert report.s5 == pytest.approx(s5, abs=5e-4)
        assert report.tau == pytest.approx(tau, abs=5e-4)
        assert report.label == label


def test_classify_product_state():
    report = ent.classify(ent.PureState3.from_sparse(SparseState((1, 3, 5), {("A", "A", "A"): 1.0})))
    assert report.label == "PRODUCT"
    assert report.tau == pytest.approx(0.0, abs=1e-12)


def test_classify_biseparable_state():
    s = 1 / math.sqrt(2)
    state = SparseState((1, 3, 5), {("A", "A", "A"): s, ("B", "B", "A"): s})
    report = ent.classify(ent.PureState3.from_sparse(state))
    assert report.label == "BISEPARABLE_5|13"
    assert report.s5 == pytest.approx(0.0, abs=1e-12)
    assert report.s1 == pytest.approx(1.0, abs=1e-12)


def test_classify_w_state():
    report = ent.classify(ent.PureState3.from_sparse(ent.w_sparse()))
    assert report.label == "W_CLASS"
    assert report.tau == pytest.approx(0.0, abs=1e-12)


def test_entropy_symmetry_of_pure_bipartitions():
    # entropy of the kept qubit equals the entropy of the traced-out pair
    rng = np.random.default_rng(31)
    for _ in range(60):
        state = random_pure3(rng)
        for keep, axis in ((1, 0), (3, 1), (5, 2)):
            s_single = ent.entropy_bits(ent.reduce_single(state, keep))
            psi = np.moveaxis(state.amplitudes, axis, 0).reshape(2, 4)
            rho_pair = psi.conj().T @ psi
            eig = np.clip(np.linalg.eigvalsh(rho_pair), 0.0, None)
            s_pair = float(-sum(l * math.log2(l) for l in eig if l > 0))
            assert s_single == pytest.approx(s_pair, abs=1e-10)


def test_tangle_invariant_under_arm_phase_plate(pipeline):
    from ghzgen.ideal import upper_arm_phase

    state = pipeline.outcomes[0].state
    tau = ent.three_tangle(ent.PureState3.from_sparse(state))
    gated = upper_arm_phase(state, 5, -math.pi / 2)
    tau_gated = ent.three_tangle(ent.PureState3.from_sparse(gated))
    assert tau_gated == pytest.approx(tau, abs=1e-12)


def test_pure_state_requires_normalization():
    with pytest.raises(ValueError):
        ent.PureState3(np.ones((2, 2, 2)))
    renormalized = ent.PureState3.from_sparse(
        SparseState((1, 3, 5), {("A", "A", "A"): 2.0}), renormalize=True
    )
    assert renormalized.amplitudes[0, 0, 0] == pytest.approx(1.0)
