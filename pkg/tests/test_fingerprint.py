import math

import numpy as np
import pytest

from qobdd import fingerprint as fp, good_sets as gs, zoo
from qobdd.errors import InputError, UnverifiedGoodSetError
from qobdd.qbp import HadamardLayer, accept_probability, input_matrix, is_read_once, run, sweep
from qobdd.zmod_poly import Characteristic, LinearPoly, all_inputs


def single(p):
    return Characteristic(p.m, (p,))


def test_closed_form_examples():
    K = gs.GoodSet(8, 0.5, (1, 3))
    assert abs(fp.closed_form_single(LinearPoly(8, 2, (1,)), K, "0")) < 1e-15
    K1 = gs.GoodSet(4, 0.5, (1,))
    assert fp.closed_form_single(LinearPoly(4, 2, (1,)), K1, "0") == pytest.approx(1.0, abs=1e-15)


def test_parity_on_z2_with_override():
    p = zoo.mod_m(2, 2).poly
    K = gs.GoodSet(2, 0.5, (1,))
    with pytest.raises(UnverifiedGoodSetError):
        fp.build_single(p, K)
    Q = fp.build_single(p, K, allow_unverified=True)
    assert accept_probability(Q, "11") == pytest.approx(1.0, abs=1e-12)
    # g = 1 over Z_2 gives cos(pi)^2 = 1: Z_2 cannot separate, hence lifting
    assert accept_probability(Q, "10") == pytest.approx(fp.closed_form_single(p, K, "10"), abs=1e-12)
    assert fp.closed_form_single(p, K, "10") == pytest.approx(1.0)


def test_parity_via_lifting():
    e = zoo.mod_m(5, 2)
    spec = fp.plan(e.characteristic(), 0.25)
    assert spec.chi.m % 2 == 0 and spec.chi.m > 2
    Q = fp.build(spec)
    for s in all_inputs(5):
        p = accept_probability(Q, s)
        if e.oracle(s):
            assert p == pytest.approx(1.0, abs=1e-9)
        else:
            assert p < 0.25


def test_zero_polynomial_accepts_everything():
    p = LinearPoly(5, 0, (0, 0, 0))
    Q = fp.build_single(p, gs.sample_good_set(5, 0.5))
    _, probs, _ = sweep(Q)
    assert np.allclose(probs, 1.0, atol=1e-12)


def test_eq4_one_sided():
    e = zoo.eq(4)
    spec = fp.plan(e.characteristic(), 0.25, seed=3)
    Q = fp.build(spec)
    X, probs, _ = sweep(Q)
    for bits, p in zip(X, probs):
        s = tuple(int(b) for b in bits)
        assert p == pytest.approx(fp.closed_form(spec, s), abs=1e-9)
        if e.oracle(s):
            assert p >= 1 - 1e-9
        else:
            assert p < 0.25


def test_single_closed_form_against_numpy():
    rng = np.random.default_rng(0)
    m = 97
    p = LinearPoly(m, 11, tuple(int(c) for c in rng.integers(0, m, size=6)))
    K = gs.sample_good_set(m, 0.3, seed=2)
    ks = np.array(K.ks)
    for s in all_inputs(6):
        ref = np.mean(np.cos(2 * np.pi * ks * p(s) / m)) ** 2
        assert fp.closed_form_single(p, K, s) == pytest.approx(ref, abs=1e-12)


def test_general_with_one_polynomial():
    p = LinearPoly(11, 3, (1, 2, 5))
    K = gs.sample_good_set(11, 0.3, seed=1)
    chi = single(p)
    Q = fp.build_general(chi, K)
    for s in all_inputs(3):
        g = p(s)
        ref = sum((1 + math.cos(2 * math.pi * k * g / 11)) / 2 for k in K.ks) / K.t
        assert fp.closed_form_general(chi, K, s) == pytest.approx(ref, abs=1e-12)
        assert accept_probability(Q, s) == pytest.approx(ref, abs=1e-9)


def test_fingerprint_state_matches_program():
    p = LinearPoly(13, 4, (1, 7, 12, 5))
    spec = fp.FingerprintSpec(single(p), gs.sample_good_set(13, 0.3), (1, 2, 3, 4))
    Q = fp.build(spec)
    H = HadamardLayer(spec.t, 2).dense()
    for s in all_inputs(4):
        # the program ends with a Hadamard layer, which is its own inverse
        assert np.allclose(H @ run(Q, s), fp.fingerprint_state(spec, s), atol=1e-12)

    chi = zoo.zoo_conjunction([zoo.mod_m(4, 2), zoo.mod_m(4, 3)])
    gen = fp.plan(chi, 0.3, general=True)
    G = fp.build(gen)
    for s in all_inputs(4):
        assert np.allclose(run(G, s), fp.fingerprint_state(gen, s), atol=1e-12)


def test_order_does_not_change_probabilities():
    e = zoo.mod_m_weighted(5, 7)
    K = gs.sample_good_set(7, 0.3)
    a = fp.build_single(e.poly, K)
    b = fp.build_single(e.poly, K, order=(5, 3, 1, 4, 2))
    assert [ins.var for ins in b.instructions] == [5, 3, 1, 4, 2]
    X = input_matrix(5)
    assert np.allclose(sweep(a)[1], sweep(b)[1], atol=1e-12)
    assert X.shape[0] == 32


def test_structure():
    p = LinearPoly(16, 1, (1, 2, 4, 8))
    spec = fp.plan(single(p), 0.25)
    Q = fp.build(spec)
    assert Q.d == 2 * spec.t and Q.length == 4 and is_read_once(Q)
    assert Q.accept == (0,)
    assert fp.width_qubits_report(spec) == {"width": 2 * spec.t, "qubits": spec.t.bit_length(), "t": spec.t, "l": 1}


def test_image_scope_must_cover_reachable_values():
    p = LinearPoly(2**64, 3, (5, 9))
    K = gs.sample_good_set(2**64, 0.3, residues=[3])
    with pytest.raises(UnverifiedGoodSetError):
        fp.build_single(p, K)
    K = gs.sample_good_set(2**64, 0.3, residues=fp.reachable_residues(p))
    Q = fp.build_single(p, K)
    for s in all_inputs(2):
        assert accept_probability(Q, s) < 0.3


def test_reachable_residues():
    assert fp.reachable_residues(LinearPoly(8, 1, (2, 2))) == {1, 3, 5}


def test_spec_validation_and_json():
    with pytest.raises(InputError):
        fp.FingerprintSpec(single(LinearPoly(5, 0, (1,))), gs.GoodSet(7, 0.5, (1,)), (1,))
    with pytest.raises(InputError):
        fp.FingerprintSpec(single(LinearPoly(5, 0, (1,))), gs.GoodSet(5, 0.5, (1, 2, 3)), (1,))
    with pytest.raises(InputError):
        fp.FingerprintSpec(single(LinearPoly(5, 0, (1, 1))), gs.GoodSet(5, 0.5, (1,)), (1, 1))
    spec = fp.plan(zoo.eq(2).characteristic(), 0.3)
    assert fp.spec_from_json(fp.spec_to_json(spec)) == spec
