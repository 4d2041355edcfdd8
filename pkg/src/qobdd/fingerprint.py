"""Fingerprinting quantum OBDDs for functions with linear characteristics.

Single polynomial ``g`` over Z_m with a good set K of size t (a power of two):
``log t`` control qubits and one target.  Reading ``x_j = 1`` rotates the
target by R_y(4*pi*k_i*c_j/m) in control subspace ``i``; after the constant
term and a Hadamard layer on the controls, index 0 carries amplitude
``(1/t) * sum_i cos(2*pi*k_i*g(sigma)/m)``.

Characteristic ``{g_1..g_l}``: ``l`` targets, rotation R_y(2*pi*k_i*c_j/m) on
target ``r``, no final Hadamard layer, accept when every target reads 0, which
happens with probability ``(1/t) * sum_i prod_r cos^2(pi*k_i*g_r(sigma)/m)``.

A branching program only has variable-labelled instructions, so the uniform
superposition over controls is the initial state and the input-independent
tail (constant rotation, Hadamards) is folded into both branches of the last
instruction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import good_sets as gs
from .errors import CapExceededError, GoodSetSearchError, InputError, UnverifiedGoodSetError
from .good_sets import GoodSet, Scope
from .qbp import BlockDiag, HadamardLayer, Identity, Instruction, Product, QbpProgram
from .zmod_poly import Characteristic, LinearPoly, as_bits, linear_from_json, linear_to_json

IMAGE_CAP = 2**20


@dataclass(frozen=True)
class FingerprintSpec:
    chi: Characteristic
    goodset: GoodSet
    order: tuple[int, ...]
    general: bool = False

    def __post_init__(self):
        if self.goodset.m != self.chi.m:
            raise InputError(f"good set is over Z_{self.goodset.m}, polynomials over Z_{self.chi.m}")
        t = self.goodset.t
        if t & (t - 1):
            raise InputError(f"good-set size {t} is not a power of two")
        order = tuple(int(v) for v in self.order)
        if sorted(order) != list(range(1, self.chi.n + 1)):
            raise InputError(f"order {order} is not a permutation of 1..{self.chi.n}")
        if not self.general and len(self.chi) != 1:
            raise InputError("the single-polynomial construction takes exactly one polynomial")
        object.__setattr__(self, "order", order)

    @property
    def t(self) -> int:
        return self.goodset.t

    @property
    def l(self) -> int:
        return len(self.chi)


def reachable_residues(p: LinearPoly, cap: int = IMAGE_CAP) -> frozenset[int]:
    """Every value ``p`` takes on {0,1}^n, by subset-sum over residues."""
    values = {p.c0}
    for c in p.coeffs:
        if c:
            values |= {(v + c) % p.m for v in values}
            if len(values) > cap:
                raise CapExceededError(f"image of the polynomial exceeds {cap} residues")
    return frozenset(values)


def _ry_block(num: int, den: int) -> np.ndarray:
    """R_y with half-angle 2*pi*num/den."""
    a = 2.0 * math.pi * (num / den)
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s], [s, c]])


def _rotations(spec: FingerprintSpec, column: Sequence[int]) -> BlockDiag | None:
    """Per-control rotation blocks for one coefficient per polynomial, or None if trivial."""
    if not any(column):
        return None
    m = spec.chi.m
    blocks = []
    for k in spec.goodset.ks:
        if spec.general:
            # half-angle pi*k*c/m; reduce k*c mod 2m so the sign is kept exactly
            parts = [_ry_block(k * c % (2 * m), 2 * m) for c in column]
            block = parts[0]
            for part in parts[1:]:
                block = np.kron(block, part)
        else:
            block = _ry_block(k * column[0] % m, m)
        blocks.append(block)
    return BlockDiag(np.array(blocks))


def _compose(factors) -> object:
    factors = [f for f in factors if f is not None]
    if not factors:
        return None
    return factors[0] if len(factors) == 1 else Product(factors)


def _check_goodset(spec: FingerprintSpec, allow_unverified: bool) -> None:
    if allow_unverified:
        return
    K = spec.goodset
    if K.scope is Scope.UNVERIFIED:
        raise UnverifiedGoodSetError("good set is unverified; pass allow_unverified=True to build anyway")
    if K.scope is Scope.IMAGE:
        needed = set()
        for p in spec.chi.polys:
            needed |= reachable_residues(p)
        missing = needed - {0} - set(K.image)
        if missing:
            raise UnverifiedGoodSetError(
                f"good set was verified over a different image; {len(missing)} reachable residues unchecked"
            )


def build(spec: FingerprintSpec, allow_unverified: bool = False) -> QbpProgram:
    if spec.chi.n < 1:
        raise InputError("need at least one variable")
    _check_goodset(spec, allow_unverified)
    t, l = spec.t, (spec.l if spec.general else 1)
    b = 2**l
    d = t * b
    psi0 = np.zeros(d, dtype=complex)
    psi0[::b] = 1.0 / math.sqrt(t)

    polys = spec.chi.polys
    const = _rotations(spec, [p.c0 for p in polys])
    final = None if spec.general else (HadamardLayer(t, b) if t > 1 else None)

    instructions = []
    last = len(spec.order) - 1
    for pos, var in enumerate(spec.order):
        rot = _rotations(spec, [p.coeffs[var - 1] for p in polys])
        if pos < last:
            u0, u1 = Identity(d), rot or Identity(d)
        else:
            u0 = _compose([const, final]) or Identity(d)
            u1 = _compose([rot, const, final]) or Identity(d)
        instructions.append(Instruction(var, u0, u1))
    accept = (0,) if not spec.general else tuple(range(0, d, b))
    return QbpProgram(d, spec.chi.n, psi0, tuple(instructions), accept)


def build_single(p: LinearPoly, K: GoodSet, order: Sequence[int] | None = None, allow_unverified: bool = False) -> QbpProgram:
    order = tuple(range(1, p.n + 1)) if order is None else tuple(order)
    return build(FingerprintSpec(Characteristic(p.m, (p,)), K, order), allow_unverified)


def build_general(chi: Characteristic, K: GoodSet, order: Sequence[int] | None = None, allow_unverified: bool = False) -> QbpProgram:
    order = tuple(range(1, chi.n + 1)) if order is None else tuple(order)
    return build(FingerprintSpec(chi, K, order, general=True), allow_unverified)


def closed_form_single(p: LinearPoly, K: GoodSet, sigma) -> float:
    return gs.cosine_average(K, p(sigma)) ** 2


def closed_form_general(chi: Characteristic, K: GoodSet, sigma) -> float:
    m = chi.m
    values = [p(sigma) for p in chi.polys]
    total = 0.0
    for k in K.ks:
        term = 1.0
        for g in values:
            # cos^2(pi*x) = (1 + cos(2*pi*x)) / 2
            term *= 0.5 * (1.0 + gs.turn_cos(k * g % m, m))
        total += term
    return total / K.t


def closed_form(spec: FingerprintSpec, sigma) -> float:
    if spec.general:
        return closed_form_general(spec.chi, spec.goodset, sigma)
    return closed_form_single(spec.chi.polys[0], spec.goodset, sigma)


def fingerprint_state(spec: FingerprintSpec, sigma) -> np.ndarray:
    """The fingerprint |h_sigma> built directly from its trigonometric form.

    Single polynomial: ``(1/sqrt t) sum_i |i>(cos a_i|0> + sin a_i|1>)`` with
    ``a_i = 2*pi*k_i*g(sigma)/m``; this is the program state before the final
    Hadamard layer.  Characteristic: per-target angles ``pi*k_i*g_r/m`` with
    ``g_r`` taken as the integer ``c0 + sum c_j sigma_j`` over canonical
    residues, which fixes the sign the rotations actually produce.
    """
    bits = as_bits(sigma, spec.chi.n)
    m, t = spec.chi.m, spec.t
    rows = []
    for k in spec.goodset.ks:
        if spec.general:
            vec = np.ones(1)
            for p in spec.chi.polys:
                a = 2.0 * math.pi * ((k * p.lifted_value(bits) % (2 * m)) / (2 * m))
                vec = np.kron(vec, [math.cos(a), math.sin(a)])
        else:
            a = 2.0 * math.pi * ((k * spec.chi.polys[0](bits) % m) / m)
            vec = np.array([math.cos(a), math.sin(a)])
        rows.append(vec)
    return (np.concatenate(rows) / math.sqrt(t)).astype(complex)


def width_qubits_report(spec: FingerprintSpec) -> dict:
    l = spec.l if spec.general else 1
    log_t = spec.t.bit_length() - 1
    return {"width": spec.t * 2**l, "qubits": log_t + l, "t": spec.t, "l": l}


def lift_characteristic(chi: Characteristic, factor: int) -> Characteristic:
    m = chi.m * factor
    return Characteristic(m, tuple(p.lift(m) for p in chi.polys))


def plan(
    chi: Characteristic,
    epsilon: float,
    seed: int = 0,
    general: bool = False,
    order: Sequence[int] | None = None,
    max_lift: int = 8,
    max_attempts: int = 64,
    cap: int = gs.FULL_SCAN_CAP,
) -> FingerprintSpec:
    """Sample a verified good set, lifting the modulus if the native one admits none.

    Small moduli can be hopeless: over Z_3 every parameter gives
    cos(2*pi*k*b/3) = -1/2, so no K beats epsilon = 1/4, and over Z_2 none
    beats anything.  Lifting g to ``s*g`` over Z_{s*m} keeps the zero set
    and lets parameters that are multiples of ``s`` balance the average.
    """
    order = tuple(range(1, chi.n + 1)) if order is None else tuple(order)
    last_error: GoodSetSearchError | None = None
    for factor in range(1, max_lift + 1):
        lifted = chi if factor == 1 else lift_characteristic(chi, factor)
        residues = None
        if lifted.m > cap:
            residues = set()
            for p in lifted.polys:
                residues |= reachable_residues(p)
        try:
            K = gs.sample_good_set(lifted.m, epsilon, seed=seed, max_attempts=max_attempts, residues=residues, cap=cap)
        except GoodSetSearchError as exc:
            last_error = exc
            continue
        return FingerprintSpec(lifted, K, order, general=general)
    raise GoodSetSearchError(
        f"no good set found for m={chi.m} with lift factors up to {max_lift}: {last_error}",
        last_error.best if last_error else 1.0,
    )


def spec_to_json(spec: FingerprintSpec) -> dict:
    return {
        "polys": [linear_to_json(p) for p in spec.chi.polys],
        "goodset": gs.goodset_to_json(spec.goodset),
        "order": list(spec.order),
        "general": spec.general,
    }


def spec_from_json(obj: dict) -> FingerprintSpec:
    try:
        polys = tuple(linear_from_json(p) for p in obj["polys"])
        if not polys:
            raise InputError("spec needs at least one polynomial")
        chi = Characteristic(polys[0].m, polys)
        order = obj.get("order") or list(range(1, chi.n + 1))
        general = bool(obj.get("general", len(polys) > 1))
        return FingerprintSpec(chi, gs.goodset_from_json(obj["goodset"]), tuple(order), general=general)
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad fingerprint spec JSON: {exc}") from exc
