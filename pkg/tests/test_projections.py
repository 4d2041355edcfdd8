import pytest
from hypothesis import given, settings, strategies as st

from qobdd import projections as pj, zoo
from qobdd.errors import InputError
from qobdd.zmod_poly import LinearPoly, all_inputs


def test_substitution_examples():
    g = LinearPoly(3, 0, (1, 1))
    h = pj.apply_to_poly(g, pj.from_literals(2, 1, ["1", "x1"]))
    assert h == LinearPoly(3, 1, (1,))

    g = LinearPoly(4, 0, (2,))
    h = pj.apply_to_poly(g, pj.from_literals(1, 1, ["!x1"]))
    assert h == LinearPoly(4, 2, (2,))


def test_eq_collapses_to_zero():
    e = zoo.eq(3)
    pi = pj.from_literals(6, 3, ["x1", "x2", "x3", "x1", "x2", "x3"])
    h = pj.apply_to_poly(e.poly, pi)
    assert h.is_zero()
    assert pj.projection_keeps_characteristic(e.oracle, e.characteristic(), pi)
    assert not pj.is_read_once_projection(pi)
    assert pj.multiplicity(pi, 2) == 2


def test_read_once_projection_of_palindrome():
    e = zoo.palindrome(4)
    pi = pj.from_literals(4, 3, ["x1", "0", "1", "!x3"])
    assert pj.is_read_once_projection(pi)
    assert pj.projection_keeps_characteristic(e.oracle, e.characteristic(), pi)


literal = st.one_of(
    st.sampled_from([(pj.Lit.CONST0, None), (pj.Lit.CONST1, None)]),
    st.tuples(st.sampled_from([pj.Lit.VAR, pj.Lit.NEGVAR]), st.integers(1, 4)),
)


@st.composite
def projection(draw, p_n, n):
    mapping = []
    for _ in range(p_n):
        kind, i = draw(literal)
        mapping.append((kind, None if i is None else (i - 1) % n + 1))
    return pj.Projection(p_n, n, tuple(mapping))


@settings(max_examples=80, deadline=None)
@given(
    m=st.integers(2, 2**64),
    coeffs=st.lists(st.integers(0, 2**70), min_size=1, max_size=5),
    c0=st.integers(0, 2**70),
    data=st.data(),
)
def test_commutation_and_composition(m, coeffs, c0, data):
    g = LinearPoly(m, c0, tuple(coeffs))
    mid = data.draw(st.integers(1, 4))
    n = data.draw(st.integers(1, 4))
    a = data.draw(projection(len(coeffs), mid))
    b = data.draw(projection(mid, n))
    h = pj.apply_to_poly(g, a)
    for s in all_inputs(mid):
        assert h(s) == g(a(s))
    ab = pj.compose(a, b)
    assert pj.apply_to_poly(g, ab) == pj.apply_to_poly(h, b)
    for s in all_inputs(n):
        assert ab(s) == a(b(s))


def test_identity_and_json():
    g = LinearPoly(7, 3, (1, 2, 3))
    assert pj.apply_to_poly(g, pj.identity(3)) == g
    pi = pj.from_literals(3, 2, ["x2", "!x1", "1"])
    assert pj.projection_from_json(pj.projection_to_json(pi)) == pi


def test_validation():
    with pytest.raises(InputError):
        pj.from_literals(1, 2, ["x3"])
    with pytest.raises(InputError):
        pj.from_literals(2, 2, ["x1"])
    with pytest.raises(InputError):
        pj.from_literals(1, 1, ["y1"])
    with pytest.raises(InputError):
        pj.apply_to_poly(LinearPoly(3, 0, (1,)), pj.identity(2))
