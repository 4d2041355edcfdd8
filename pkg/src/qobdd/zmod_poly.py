"""Linear and multilinear polynomials over Z_m with exact integer arithmetic.

Coefficients are kept as canonical residues in ``[0, m)``; a negative
coefficient such as ``-y_i 2^(i-1)`` is stored as ``m - 2^(i-1)``.  Python
integers are unbounded, so moduli like ``(n+1)^(2n)`` need no special care.

Inputs ``sigma`` are bit sequences where ``sigma[i-1]`` is the value of
variable ``x_i``; a string such as ``"0110"`` is accepted as well.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence, Union

from .errors import CapExceededError, InputError

Bits = Sequence[int]
TruthOracle = Callable[[tuple], Union[bool, int]]

ENUMERATION_CAP = 22
TERM_CAP = 2**20


def as_bits(sigma: Union[str, Iterable[int]], n: int | None = None) -> tuple[int, ...]:
    """Normalize ``sigma`` to a tuple of 0/1 ints, checking its length against ``n``."""
    if isinstance(sigma, str):
        if any(ch not in "01" for ch in sigma):
            raise InputError(f"not a bitstring: {sigma!r}")
        bits = tuple(int(ch) for ch in sigma)
    else:
        bits = tuple(int(b) for b in sigma)
        if any(b not in (0, 1) for b in bits):
            raise InputError(f"input bits must be 0/1, got {bits}")
    if n is not None and len(bits) != n:
        raise InputError(f"input has {len(bits)} bits, expected {n}")
    return bits


def bitstring(sigma: Bits) -> str:
    return "".join(str(int(b)) for b in sigma)


def all_inputs(n: int) -> Iterator[tuple[int, ...]]:
    """All of {0,1}^n, x_1 most significant."""
    return itertools.product((0, 1), repeat=n)


def _check_modulus(m: int) -> int:
    if isinstance(m, bool) or not isinstance(m, int):
        raise InputError(f"modulus must be an int, got {type(m).__name__}")
    if m < 2:
        raise InputError(f"modulus must be >= 2, got {m}")
    return m


def check_cap(n: int, cap: int | None) -> None:
    cap = ENUMERATION_CAP if cap is None else cap
    if n > cap:
        raise CapExceededError(f"exhaustive enumeration over {n} variables exceeds cap {cap}")


@dataclass(frozen=True)
class LinearPoly:
    """``c0 + c_1 x_1 + ... + c_n x_n`` over Z_m."""

    m: int
    c0: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        _check_modulus(self.m)
        object.__setattr__(self, "c0", int(self.c0) % self.m)
        object.__setattr__(self, "coeffs", tuple(int(c) % self.m for c in self.coeffs))

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def lifted_value(self, sigma: Bits) -> int:
        """``c0 + sum c_i sigma_i`` over the integers, from the canonical residues."""
        bits = as_bits(sigma, self.n)
        return self.c0 + sum(c for c, b in zip(self.coeffs, bits) if b)

    def __call__(self, sigma: Bits) -> int:
        return self.lifted_value(sigma) % self.m

    def lift(self, new_m: int) -> LinearPoly:
        """Embed into Z_new_m (``m`` must divide ``new_m``) keeping the zero set."""
        if new_m % self.m:
            raise InputError(f"cannot lift from Z_{self.m} to Z_{new_m}")
        s = new_m // self.m
        return LinearPoly(new_m, self.c0 * s, tuple(c * s for c in self.coeffs))

    def is_zero(self) -> bool:
        return self.c0 == 0 and not any(self.coeffs)


def eval_linear(p: LinearPoly, sigma: Bits) -> int:
    return p(sigma)


@dataclass(frozen=True)
class MultilinearPoly:
    """Sum of ``coeff * prod_{i in vars} x_i`` over Z_m.

    ``terms`` holds ``(coeff, frozenset_of_indices)`` pairs with distinct
    index sets and nonzero reduced coefficients; use :meth:`from_terms` to
    build one from arbitrary (possibly repeated, unreduced) terms.
    """

    m: int
    n: int
    terms: tuple[tuple[int, frozenset], ...]

    def __post_init__(self):
        _check_modulus(self.m)
        seen = set()
        for coeff, vs in self.terms:
            if vs in seen:
                raise InputError(f"repeated monomial {sorted(vs)}")
            seen.add(vs)
            if not 0 < coeff < self.m:
                raise InputError(f"coefficient {coeff} is not a nonzero residue mod {self.m}")
            if any(not 1 <= i <= self.n for i in vs):
                raise InputError(f"variable index out of range in {sorted(vs)}")

    @classmethod
    def from_terms(cls, m: int, n: int, terms: Iterable[tuple[int, Iterable[int]]]) -> MultilinearPoly:
        acc: dict[frozenset, int] = {}
        for coeff, vs in terms:
            key = frozenset(vs)
            acc[key] = (acc.get(key, 0) + coeff) % m
        ordered = sorted(((c, k) for k, c in acc.items() if c), key=lambda t: (len(t[1]), sorted(t[1])))
        return cls(m, n, tuple(ordered))

    @classmethod
    def from_linear(cls, p: LinearPoly) -> MultilinearPoly:
        terms = [(p.c0, ())] + [(c, (i,)) for i, c in enumerate(p.coeffs, start=1)]
        return cls.from_terms(p.m, p.n, terms)

    def __call__(self, sigma: Bits) -> int:
        bits = as_bits(sigma, self.n)
        total = 0
        for coeff, vs in self.terms:
            if all(bits[i - 1] for i in vs):
                total += coeff
        return total % self.m

    def degree(self) -> int:
        return max((len(vs) for _, vs in self.terms), default=0)


def eval_multilinear(p: MultilinearPoly, sigma: Bits) -> int:
    return p(sigma)


def try_as_linear(p: MultilinearPoly) -> LinearPoly | None:
    if p.degree() > 1:
        return None
    coeffs = [0] * p.n
    c0 = 0
    for coeff, vs in p.terms:
        if vs:
            (i,) = vs
            coeffs[i - 1] = coeff
        else:
            c0 = coeff
    return LinearPoly(p.m, c0, tuple(coeffs))


@dataclass(frozen=True)
class DnfFormula:
    """Disjunction of conjunctive clauses; a literal is ``(index, polarity)``.

    ``polarity`` True means ``x_i``, False means ``not x_i``.
    """

    n: int
    clauses: tuple[tuple[tuple[int, bool], ...], ...]

    def __post_init__(self):
        clauses = []
        for clause in self.clauses:
            lits = tuple((int(i), bool(pol)) for i, pol in clause)
            idx = [i for i, _ in lits]
            if len(set(idx)) != len(idx):
                raise InputError(f"clause {lits} tests a variable twice")
            if any(not 1 <= i <= self.n for i in idx):
                raise InputError(f"clause {lits} has an index outside [1, {self.n}]")
            clauses.append(lits)
        object.__setattr__(self, "clauses", tuple(clauses))

    def __call__(self, sigma: Bits) -> bool:
        bits = as_bits(sigma, self.n)
        return any(all(bits[i - 1] == pol for i, pol in clause) for clause in self.clauses)


def dnf_to_char_poly(dnf: DnfFormula, n: int | None = None, term_cap: int = TERM_CAP) -> MultilinearPoly:
    """Characteristic polynomial over Z_{2^n} of ``f``, given a DNF of ``not f``.

    Each clause becomes the product of ``x_j`` / ``1 - x_j`` and the products
    are summed.  Duplicate clauses are merged first: with no empty clause at
    most ``2^n - 1`` distinct clauses hold at once, so the sum cannot wrap to
    0 mod 2^n.  An empty clause (``not f`` identically true) is rejected; an
    empty clause list gives the zero polynomial of the constant-1 function.
    """
    n = dnf.n if n is None else n
    if n != dnf.n:
        raise InputError(f"DNF is over {dnf.n} variables, not {n}")
    if n < 1:
        raise InputError("need at least one variable")
    m = 2**n
    distinct = {frozenset(clause) for clause in dnf.clauses}
    if frozenset() in distinct:
        raise InputError("empty clause: not f is constant true, refusing constant f = 0")

    acc: dict[frozenset, int] = {}
    for clause in sorted(distinct, key=sorted):
        # expand prod over positives x_i * prod over negatives (1 - x_j)
        pos = frozenset(i for i, pol in clause if pol)
        neg = sorted(i for i, pol in clause if not pol)
        for r in range(len(neg) + 1):
            for subset in itertools.combinations(neg, r):
                key = pos | frozenset(subset)
                acc[key] = (acc.get(key, 0) + (-1) ** r) % m
                if len(acc) > term_cap:
                    raise CapExceededError(f"expansion exceeds {term_cap} terms")
    return MultilinearPoly.from_terms(m, n, [(c, k) for k, c in acc.items()])


def is_characteristic(g: Callable[[Bits], int], f: TruthOracle, n: int, cap: int | None = None) -> bool:
    """True iff ``g(sigma) == 0`` exactly when ``f(sigma)`` holds, over all of {0,1}^n."""
    check_cap(n, cap)
    return all((g(s) == 0) == bool(f(s)) for s in all_inputs(n))


@dataclass(frozen=True)
class Characteristic:
    """Polynomials over one modulus that vanish together exactly on f^{-1}(1)."""

    m: int
    polys: tuple[LinearPoly, ...]

    def __post_init__(self):
        _check_modulus(self.m)
        polys = tuple(self.polys)
        if not polys:
            raise InputError("a characteristic needs at least one polynomial")
        if any(p.m != self.m for p in polys):
            raise InputError("all polynomials must share the modulus")
        if len({p.n for p in polys}) != 1:
            raise InputError("all polynomials must share the variable count")
        object.__setattr__(self, "polys", polys)

    @property
    def n(self) -> int:
        return self.polys[0].n

    def __len__(self) -> int:
        return len(self.polys)

    def all_zero(self, sigma: Bits) -> bool:
        return all(p(sigma) == 0 for p in self.polys)


def verify_characteristic_set(chi: Characteristic, f: TruthOracle, cap: int | None = None) -> bool:
    check_cap(chi.n, cap)
    return all(chi.all_zero(s) == bool(f(s)) for s in all_inputs(chi.n))


def conjoin_characteristics(chis: Sequence[Characteristic], n: int | None = None) -> Characteristic:
    """Union of characteristic sets: a characteristic of the conjunction."""
    if not chis:
        raise InputError("nothing to conjoin")
    m = chis[0].m
    n = chis[0].n if n is None else n
    for chi in chis:
        if chi.m != m:
            raise InputError(f"modulus mismatch: {chi.m} != {m}")
        if chi.n != n:
            raise InputError(f"variable count mismatch: {chi.n} != {n}")
    polys: list[LinearPoly] = []
    for chi in chis:
        polys.extend(p for p in chi.polys if p not in polys)
    return Characteristic(m, tuple(polys))


def common_modulus(moduli: Iterable[int]) -> int:
    return math.lcm(*moduli)


def linear_to_json(p: LinearPoly) -> dict:
    return {"m": str(p.m), "c0": str(p.c0), "coeffs": [str(c) for c in p.coeffs]}


def linear_from_json(obj: dict) -> LinearPoly:
    try:
        return LinearPoly(int(obj["m"]), int(obj.get("c0", "0")), tuple(int(c) for c in obj["coeffs"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad linear polynomial JSON: {exc}") from exc


def multilinear_to_json(p: MultilinearPoly) -> dict:
    return {
        "m": str(p.m),
        "n": p.n,
        "terms": [{"coeff": str(c), "vars": sorted(vs)} for c, vs in p.terms],
    }


def multilinear_from_json(obj: dict) -> MultilinearPoly:
    try:
        m = int(obj["m"])
        terms = [(int(t["coeff"]), t["vars"]) for t in obj["terms"]]
        return MultilinearPoly.from_terms(m, int(obj["n"]), terms)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad multilinear polynomial JSON: {exc}") from exc
