import pytest

from qobdd import zoo
from qobdd.errors import InputError
from qobdd.zmod_poly import all_inputs, is_characteristic, verify_characteristic_set

CASES = (
    [zoo.mod_m(n, m) for n in (1, 5, 12) for m in (2, 3, 5)]
    + [zoo.mod_m_weighted(n, m) for n in (1, 6, 12) for m in (3, 5, 7)]
    + [zoo.eq(n) for n in range(1, 7)]
    + [zoo.palindrome(n) for n in range(2, 13)]
    + [zoo.perm(2), zoo.perm(3)]
)


@pytest.mark.parametrize("entry", CASES, ids=lambda e: e.name)
def test_polynomial_is_characteristic(entry):
    assert is_characteristic(entry.poly, entry.oracle, entry.n)


def test_examples():
    assert zoo.mod_m(4, 3).oracle((1, 1, 1, 0))
    assert zoo.mod_m_weighted(3, 5).oracle((1, 0, 1))  # 1 + 4
    assert not zoo.mod_m_weighted(3, 5).oracle((0, 0, 1))
    assert zoo.eq(2).oracle((1, 0, 1, 0)) and not zoo.eq(2).oracle((1, 0, 0, 1))
    assert zoo.palindrome(5).oracle((1, 0, 1, 0, 1))
    assert zoo.palindrome(5).m == 4


def test_perm_counts():
    assert sum(zoo.perm(2).oracle(s) for s in all_inputs(4)) == 2
    assert sum(zoo.perm(3).oracle(s) for s in all_inputs(9)) == 6
    assert zoo.perm(3).m == 4**6


def test_eq_is_symmetric_in_halves():
    e = zoo.eq(3)
    for s in all_inputs(6):
        assert e.poly(s) == 0 or e.poly(s[3:] + s[:3]) != 0
        assert (e.poly(s) == 0) == (e.poly(s[3:] + s[:3]) == 0)


def test_conjunction_lifts_to_lcm():
    entries = [zoo.mod_m(6, 2), zoo.mod_m(6, 3)]
    chi = zoo.zoo_conjunction(entries)
    assert chi.m == 6 and len(chi) == 2
    assert verify_characteristic_set(chi, zoo.conjunction_oracle(entries))


def test_bad_arguments():
    with pytest.raises(InputError):
        zoo.palindrome(1)
    with pytest.raises(InputError):
        zoo.perm(1)
    with pytest.raises(InputError):
        zoo.make("mod", 4)
    with pytest.raises(InputError):
        zoo.make("majority", 4)
    with pytest.raises(InputError):
        zoo.zoo_conjunction([zoo.mod_m(3, 2), zoo.mod_m(4, 2)])
