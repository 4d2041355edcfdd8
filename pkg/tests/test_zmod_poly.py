import random

import pytest
from hypothesis import given, strategies as st

from qobdd.errors import CapExceededError, InputError
from qobdd.zmod_poly import (
    Characteristic,
    DnfFormula,
    LinearPoly,
    MultilinearPoly,
    all_inputs,
    as_bits,
    common_modulus,
    conjoin_characteristics,
    dnf_to_char_poly,
    is_characteristic,
    linear_from_json,
    linear_to_json,
    multilinear_from_json,
    multilinear_to_json,
    try_as_linear,
    verify_characteristic_set,
)


def test_linear_eval_example():
    p = LinearPoly(7, 1, (3, 5))
    assert p("10") == 4
    assert p((1, 1)) == (1 + 3 + 5) % 7


def test_coefficients_reduced_and_lifted_value():
    p = LinearPoly(5, -1, (7, -3))
    assert p.c0 == 4 and p.coeffs == (2, 2)
    assert p.lifted_value("11") == 8


def test_bad_inputs_rejected():
    with pytest.raises(InputError):
        LinearPoly(1, 0, (1,))
    with pytest.raises(InputError):
        as_bits("102", 3)
    with pytest.raises(InputError):
        LinearPoly(3, 0, (1, 1))("1")


@given(
    m=st.integers(2, 2**80),
    c0=st.integers(-(2**90), 2**90),
    coeffs=st.lists(st.integers(-(2**90), 2**90), min_size=1, max_size=8),
    data=st.data(),
)
def test_eval_equals_reduced_integer_sum(m, c0, coeffs, data):
    sigma = data.draw(st.lists(st.integers(0, 1), min_size=len(coeffs), max_size=len(coeffs)))
    p = LinearPoly(m, c0, tuple(coeffs))
    assert p(sigma) == (c0 + sum(c * s for c, s in zip(coeffs, sigma))) % m
    assert 0 <= p(sigma) < m


def test_lift_keeps_zero_set():
    p = LinearPoly(3, 0, (1, 1, 1, 1))
    q = p.lift(12)
    assert q.m == 12
    assert all((p(s) == 0) == (q(s) == 0) for s in all_inputs(4))
    with pytest.raises(InputError):
        p.lift(10)


def test_dnf_example_nand():
    # not f = (not x1) or (not x2), so f = x1 and x2
    dnf = DnfFormula(2, (((1, False),), ((2, False),)))
    g = dnf_to_char_poly(dnf)
    assert g.m == 4
    assert try_as_linear(g) == LinearPoly(4, 2, (-1, -1))
    assert g("11") == 0 and g("00") == 2
    assert is_characteristic(g, lambda s: s == (1, 1), 2)


def test_dnf_empty_list_and_empty_clause():
    g = dnf_to_char_poly(DnfFormula(3, ()))
    assert all(g(s) == 0 for s in all_inputs(3))
    with pytest.raises(InputError):
        dnf_to_char_poly(DnfFormula(2, ((),)))


def test_dnf_duplicate_clauses_do_not_wrap():
    dnf = DnfFormula(1, (((1, True),), ((1, True),)))
    g = dnf_to_char_poly(dnf)
    assert is_characteristic(g, lambda s: s == (0,), 1)


def test_dnf_repeated_variable_rejected():
    with pytest.raises(InputError):
        DnfFormula(2, (((1, True), (1, False)),))


def test_random_dnfs_are_characteristic():
    rng = random.Random(11)
    for _ in range(50):
        n = rng.randint(1, 7)
        clauses = tuple(
            tuple((i, rng.random() < 0.5) for i in rng.sample(range(1, n + 1), rng.randint(1, n)))
            for _ in range(rng.randint(1, 5))
        )
        dnf = DnfFormula(n, clauses)
        g = dnf_to_char_poly(dnf)
        for s in all_inputs(n):
            assert (g(s) == 0) == (not dnf(s))


def test_term_cap():
    dnf = DnfFormula(8, (tuple((i, False) for i in range(1, 9)),))
    with pytest.raises(CapExceededError):
        dnf_to_char_poly(dnf, term_cap=100)


def test_multilinear_from_linear_and_degree():
    p = LinearPoly(9, 4, (1, 0, 8))
    q = MultilinearPoly.from_linear(p)
    assert q.degree() == 1
    assert all(p(s) == q(s) for s in all_inputs(3))
    assert try_as_linear(q) == p


def test_characteristic_set_and_conjunction():
    a = Characteristic(6, (LinearPoly(2, 0, (1, 1, 1)).lift(6),))
    b = Characteristic(6, (LinearPoly(3, 0, (1, 1, 1)).lift(6),))
    both = conjoin_characteristics([a, b, a])
    assert both.m == 6 and len(both) == 2
    assert verify_characteristic_set(both, lambda s: sum(s) % 6 == 0)
    assert common_modulus([4, 6, 10]) == 60
    with pytest.raises(InputError):
        conjoin_characteristics([a, Characteristic(3, (LinearPoly(3, 0, (1, 1, 1)),))])


def test_enumeration_cap():
    with pytest.raises(CapExceededError):
        is_characteristic(lambda s: 0, lambda s: True, 30)


def test_json_round_trips():
    p = LinearPoly(2**100 + 7, 5, (2**99, 3))
    obj = linear_to_json(p)
    assert all(isinstance(c, str) for c in obj["coeffs"])
    assert linear_from_json(obj) == p
    g = dnf_to_char_poly(DnfFormula(3, (((1, True), (2, False)), ((3, True),))))
    h = multilinear_from_json(multilinear_to_json(g))
    assert all(g(s) == h(s) for s in all_inputs(3))
