"""Good parameter sets K = {k_1..k_t} for the fingerprint rotations.

K is good for a residue b != 0 (mod m) when

    ((1/t) * sum_i cos(2*pi*k_i*b/m))**2 < epsilon

and a program built from K misaccepts an input with g(sigma) = b with exactly
that probability.  ``verify_full`` checks every b in [1, m); ``verify_image``
checks only the residues a particular polynomial can actually reach.
"""
from __future__ import annotations

import dataclasses
import enum
import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceededError, GoodSetSearchError, InputError

FULL_SCAN_CAP = 10**6
EXHAUSTIVE_M_CAP = 64
EXHAUSTIVE_T_CAP = 4
# a squared average must clear epsilon by this much to count as good;
# e.g. m = 3 gives exactly 1/4 but evaluates to 0.2499999999999998 in floats
STRICT_MARGIN = 1e-12


class Scope(enum.Enum):
    FULL_RANGE = "full"
    IMAGE = "image"
    UNVERIFIED = "none"


@dataclass(frozen=True)
class GoodSet:
    m: int
    epsilon: float
    ks: tuple[int, ...]
    scope: Scope = Scope.UNVERIFIED
    image: tuple[int, ...] = ()
    seed: int | None = None

    def __post_init__(self):
        if self.m < 2:
            raise InputError(f"modulus must be >= 2, got {self.m}")
        if not 0 < self.epsilon < 1:
            raise InputError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        ks = tuple(int(k) for k in self.ks)
        if not ks:
            raise InputError("a good set needs at least one parameter")
        if any(not 1 <= k < self.m for k in ks):
            raise InputError(f"parameters must lie in [1, {self.m})")
        object.__setattr__(self, "ks", ks)

    @property
    def t(self) -> int:
        return len(self.ks)

    @property
    def verified(self) -> bool:
        return self.scope is not Scope.UNVERIFIED


def turn_cos(r: int, m: int) -> float:
    """cos(2*pi*r/m) for an exactly reduced residue ``r``.

    ``r / m`` on Python ints is correctly rounded even past 2**53, so the
    angle never suffers argument-reduction loss.
    """
    r %= m
    if 2 * r > m:
        r = m - r
    return math.cos(2.0 * math.pi * (r / m))


def cosine_average(K: GoodSet, b: int) -> float:
    """(1/t) * sum_i cos(2*pi*k_i*b/m)."""
    m = K.m
    return math.fsum(turn_cos(k * b % m, m) for k in K.ks) / K.t


def below(value: float, epsilon: float) -> bool:
    return value < epsilon - STRICT_MARGIN


def is_good_for(K: GoodSet, b: int, epsilon: float | None = None) -> bool:
    eps = K.epsilon if epsilon is None else epsilon
    return below(cosine_average(K, b) ** 2, eps)


def _squared_averages(ks: Sequence[int], m: int, bs: np.ndarray) -> np.ndarray:
    # k*b < m**2 <= 10**12 stays exact in int64 under the scan cap
    k = np.asarray(ks, dtype=np.int64)
    r = np.outer(bs, k) % m
    avg = np.cos(2.0 * np.pi * (r / m)).mean(axis=1)
    return avg * avg


def max_squared_average(K: GoodSet, residues: Iterable[int] | None = None, cap: int = FULL_SCAN_CAP) -> float:
    """Worst squared cosine average over ``residues`` (default: all of [1, m))."""
    if residues is not None:
        bs = sorted({int(b) % K.m for b in residues} - {0})
        return max((cosine_average(K, b) ** 2 for b in bs), default=0.0)
    if K.m > cap:
        raise CapExceededError(f"full scan of modulus {K.m} exceeds cap {cap}")
    # cos is even, so b and m - b give the same average
    half = K.m // 2
    worst = 0.0
    chunk = max(1, 2**22 // K.t)
    for lo in range(1, half + 1, chunk):
        bs = np.arange(lo, min(half, lo + chunk - 1) + 1, dtype=np.int64)
        worst = max(worst, float(_squared_averages(K.ks, K.m, bs).max()))
    return worst


def verify_full(K: GoodSet, epsilon: float | None = None, cap: int = FULL_SCAN_CAP) -> bool:
    eps = K.epsilon if epsilon is None else epsilon
    return below(max_squared_average(K, cap=cap), eps)


def verify_image(K: GoodSet, residues: Iterable[int], epsilon: float | None = None) -> bool:
    eps = K.epsilon if epsilon is None else epsilon
    return below(max_squared_average(K, residues), eps)


def certify(K: GoodSet, residues: Iterable[int] | None = None, cap: int = FULL_SCAN_CAP) -> GoodSet:
    """Return a copy of ``K`` stamped with the scope it verifies over, or raise."""
    if residues is None:
        if not verify_full(K, cap=cap):
            raise InputError(f"parameter set is not good for every b in [1, {K.m})")
        return dataclasses.replace(K, scope=Scope.FULL_RANGE, image=())
    image = tuple(sorted({int(b) % K.m for b in residues} - {0}))
    if not verify_image(K, image):
        raise InputError("parameter set is not good over the supplied residues")
    return dataclasses.replace(K, scope=Scope.IMAGE, image=image)


def _next_pow2(x: int) -> int:
    return 1 << max(0, (x - 1).bit_length())


def recommended_size(m: int, epsilon: float) -> int:
    """ceil((2/epsilon) * ln(2m)), rounded up to a power of two.

    Hoeffding on each average plus a union bound over b in [1, m) makes a
    random K of this size good with positive probability.
    """
    if not 0 < epsilon < 1:
        raise InputError(f"epsilon must lie in (0, 1), got {epsilon}")
    return _next_pow2(math.ceil((2.0 / epsilon) * math.log(2 * m)))


def sample_good_set(
    m: int,
    epsilon: float,
    seed: int = 0,
    max_attempts: int = 64,
    residues: Iterable[int] | None = None,
    cap: int = FULL_SCAN_CAP,
    t: int | None = None,
) -> GoodSet:
    """Draw K uniformly (with replacement) from [1, m) until it verifies.

    Full-range verification is used when ``m <= cap``; larger moduli need
    ``residues``, the reachable values of the polynomial, and are verified
    over those only.
    """
    if m < 2:
        raise InputError(f"modulus must be >= 2, got {m}")
    t = recommended_size(m, epsilon) if t is None else t
    image = None if residues is None else tuple(sorted({int(b) % m for b in residues} - {0}))
    if image is None and m > cap:
        raise CapExceededError(f"modulus {m} exceeds the full-scan cap {cap}; pass the reachable residues")
    use_full = m <= cap
    rng = random.Random(seed)
    best = 1.0
    for _ in range(max_attempts):
        K = GoodSet(m, epsilon, tuple(rng.randrange(1, m) for _ in range(t)), seed=seed)
        worst = max_squared_average(K, cap=cap) if use_full else max_squared_average(K, image)
        best = min(best, worst)
        if below(worst, epsilon):
            if use_full:
                return dataclasses.replace(K, scope=Scope.FULL_RANGE)
            return dataclasses.replace(K, scope=Scope.IMAGE, image=image)
    raise GoodSetSearchError(
        f"no good set of size {t} for m={m}, epsilon={epsilon} in {max_attempts} attempts "
        f"(best worst-case squared average {best:.6g})",
        best,
    )


def exhaustive_smallest_good_set(m: int, epsilon: float, t_max: int = EXHAUSTIVE_T_CAP) -> GoodSet | None:
    """Smallest K (a set of distinct parameters) good for every b != 0, or None."""
    if m > EXHAUSTIVE_M_CAP or t_max > EXHAUSTIVE_T_CAP:
        raise CapExceededError(f"exhaustive search is limited to m <= {EXHAUSTIVE_M_CAP}, t <= {EXHAUSTIVE_T_CAP}")
    bs = np.arange(1, m, dtype=np.int64)
    ks = np.arange(1, m, dtype=np.int64)
    table = np.cos(2.0 * np.pi * ((np.outer(ks, bs) % m) / m))  # table[k-1, b-1]
    for t in range(1, t_max + 1):
        combos = itertools.combinations(range(m - 1), t)
        while True:
            block = np.array(list(itertools.islice(combos, 20000)), dtype=np.int64)
            if block.size == 0:
                break
            avg = table[block].mean(axis=1)
            ok = np.flatnonzero((avg * avg).max(axis=1) < epsilon - STRICT_MARGIN)
            if ok.size:
                chosen = tuple(int(i) + 1 for i in block[ok[0]])
                return GoodSet(m, epsilon, chosen, scope=Scope.FULL_RANGE)
    return None


def goodset_to_json(K: GoodSet) -> dict:
    obj = {
        "m": str(K.m),
        "epsilon": K.epsilon,
        "ks": [str(k) for k in K.ks],
        "verified": K.scope.value,
        "seed": K.seed,
    }
    if K.scope is Scope.IMAGE:
        obj["image"] = [str(b) for b in K.image]
    return obj


def goodset_from_json(obj: dict) -> GoodSet:
    try:
        return GoodSet(
            int(obj["m"]),
            float(obj["epsilon"]),
            tuple(int(k) for k in obj["ks"]),
            scope=Scope(obj.get("verified", "none")),
            image=tuple(int(b) for b in obj.get("image", ())),
            seed=obj.get("seed"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad good-set JSON: {exc}") from exc
