"""Boolean functions with known linear characteristic polynomials.

Each entry pairs a truth oracle with a linear polynomial that vanishes exactly
on the accepted inputs:

    mod         MOD_m         sum x_i                       over Z_m
    modw        MOD'_m        sum x_i 2^(i-1)                over Z_m
    eq          EQ_n          sum x_i 2^(i-1) - sum y_i 2^(i-1)   over Z_{2^n}
    palindrome  Palindrome_n  sum_{i<=n/2} x_i 2^(i-1) - sum_{i>=ceil(n/2)} x_i 2^(n-i)
                              over Z_{2^floor(n/2)}
    perm        PERM_n        row/column sums packed as base-(n+1) digits,
                              minus the all-ones digit string, over Z_{(n+1)^(2n)}

EQ_n reads ``x_1..x_n`` as variables 1..n and ``y_1..y_n`` as n+1..2n.  PERM_n
serializes the matrix row-major: ``x_ij`` is variable ``(i-1)*n + j``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import InputError
from .zmod_poly import Characteristic, LinearPoly, TruthOracle, common_modulus


@dataclass(frozen=True)
class ZooEntry:
    name: str
    n: int
    oracle: TruthOracle
    poly: LinearPoly

    @property
    def m(self) -> int:
        return self.poly.m

    def characteristic(self) -> Characteristic:
        return Characteristic(self.poly.m, (self.poly,))


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise InputError(msg)


def mod_m(n: int, m: int) -> ZooEntry:
    _need(n >= 1, "MOD_m needs n >= 1")
    _need(m >= 2, "MOD_m needs m >= 2")
    return ZooEntry(f"mod_{m}({n})", n, lambda s: sum(s) % m == 0, LinearPoly(m, 0, (1,) * n))


def mod_m_weighted(n: int, m: int) -> ZooEntry:
    _need(n >= 1, "MOD'_m needs n >= 1")
    _need(m >= 2, "MOD'_m needs m >= 2")

    def oracle(s):
        return sum(b << i for i, b in enumerate(s)) % m == 0

    return ZooEntry(f"modw_{m}({n})", n, oracle, LinearPoly(m, 0, tuple(2**i for i in range(n))))


def eq(n: int) -> ZooEntry:
    _need(n >= 1, "EQ_n needs n >= 1")
    m = 2**n
    coeffs = tuple(2**i for i in range(n)) + tuple(-(2**i) for i in range(n))
    return ZooEntry(f"eq({n})", 2 * n, lambda s: tuple(s[:n]) == tuple(s[n:]), LinearPoly(m, 0, coeffs))


def palindrome(n: int) -> ZooEntry:
    # n = 1 would need Z_1
    _need(n >= 2, "Palindrome_n needs n >= 2")
    half, upper = n // 2, (n + 1) // 2
    m = 2**half
    coeffs = [0] * n
    for i in range(1, half + 1):
        coeffs[i - 1] += 2 ** (i - 1)
    for i in range(upper, n + 1):
        coeffs[i - 1] -= 2 ** (n - i)
    return ZooEntry(f"palindrome({n})", n, lambda s: tuple(s) == tuple(reversed(s)), LinearPoly(m, 0, tuple(coeffs)))


def perm(n: int) -> ZooEntry:
    _need(n >= 2, "PERM_n needs n >= 2")
    base = n + 1
    m = base ** (2 * n)
    coeffs = tuple(base ** (i - 1) + base ** (n + j - 1) for i in range(1, n + 1) for j in range(1, n + 1))
    c0 = -sum(base ** (i - 1) for i in range(1, 2 * n + 1))

    def oracle(s):
        rows = [s[i * n:(i + 1) * n] for i in range(n)]
        return all(sum(r) == 1 for r in rows) and all(sum(col) == 1 for col in zip(*rows))

    return ZooEntry(f"perm({n})", n * n, oracle, LinearPoly(m, c0, coeffs))


REGISTRY: dict[str, Callable[..., ZooEntry]] = {
    "mod": mod_m,
    "modw": mod_m_weighted,
    "eq": eq,
    "palindrome": palindrome,
    "perm": perm,
}


def make(name: str, n: int, m: int | None = None) -> ZooEntry:
    """Look an entry up by its CLI name; ``mod`` and ``modw`` need ``m``."""
    if name not in REGISTRY:
        raise InputError(f"unknown function {name!r}; choose from {sorted(REGISTRY)}")
    if name in ("mod", "modw"):
        if m is None:
            raise InputError(f"{name} needs a modulus")
        return REGISTRY[name](n, m)
    return REGISTRY[name](n)


def zoo_conjunction(entries: Sequence[ZooEntry]) -> Characteristic:
    """Characteristic of the conjunction, all polynomials lifted to the lcm modulus.

    For a disjunction ``f_1 or ... or f_s`` pass entries for the negations
    ``not f_i``: the result is a characteristic of ``not f``.
    """
    if not entries:
        raise InputError("nothing to conjoin")
    n = entries[0].n
    if any(e.n != n for e in entries):
        raise InputError("entries must share the variable count")
    m = common_modulus(e.m for e in entries)
    polys: list[LinearPoly] = []
    for e in entries:
        lifted = e.poly.lift(m)
        if lifted not in polys:
            polys.append(lifted)
    return Characteristic(m, tuple(polys))


def conjunction_oracle(entries: Sequence[ZooEntry]) -> TruthOracle:
    oracles = [e.oracle for e in entries]
    return lambda s: all(f(s) for f in oracles)
