"""Measure-once quantum branching programs and their exact simulation.

A program is ``(instructions, psi0, accept)``: instruction ``j`` reads input
bit ``x_{var}`` and applies ``u0`` or ``u1`` to the state; after the last
instruction the state is measured in the computational basis and the input is
accepted with probability ``sum_{i in accept} |alpha_i|^2``.

Basis indices are 0-based.  Fingerprint programs put control qubits in the
high-order bits and target qubits in the low-order bits, so index 0 is
``|0...0>|0...0>``.

Operators are kept structured where possible (block-diagonal rotations,
Walsh-Hadamard layers) so a sweep over 2^n inputs costs O(d) per instruction
instead of O(d^2).  ``dense()`` always gives the full matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import InputError
from .zmod_poly import TruthOracle, as_bits, bitstring, check_cap

UNITARITY_TOL = 1e-10
PSI0_NORM_TOL = 1e-12
NORM_TOL = 1e-9
ONE_SIDED_TOL = 1e-9
BATCH = 4096


def _check_unitary(mat: np.ndarray, what: str) -> None:
    k = mat.shape[-1]
    gram = np.conj(np.swapaxes(mat, -1, -2)) @ mat
    err = float(np.max(np.abs(gram - np.eye(k)))) if mat.size else 0.0
    if err > UNITARITY_TOL:
        raise InputError(f"{what} is not unitary (max |U^dag U - I| = {err:.3g})")


class Identity:
    def __init__(self, d: int):
        self.d = d

    def apply(self, states: np.ndarray) -> np.ndarray:
        return states

    def dense(self) -> np.ndarray:
        return np.eye(self.d, dtype=complex)


class Dense:
    def __init__(self, matrix, check: bool = True):
        mat = np.array(matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise InputError(f"expected a square matrix, got shape {mat.shape}")
        if check:
            _check_unitary(mat, "matrix")
        self.matrix = mat
        self.d = mat.shape[0]

    def apply(self, states: np.ndarray) -> np.ndarray:
        return states @ self.matrix.T

    def dense(self) -> np.ndarray:
        return self.matrix


class BlockDiag:
    """Direct sum of equal-size blocks; block ``i`` acts on indices ``[i*b, (i+1)*b)``."""

    def __init__(self, blocks, check: bool = True):
        arr = np.array(blocks, dtype=complex)
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise InputError(f"expected blocks of shape (count, b, b), got {arr.shape}")
        if check:
            _check_unitary(arr, "block")
        self.blocks = arr
        self.d = arr.shape[0] * arr.shape[1]

    def apply(self, states: np.ndarray) -> np.ndarray:
        count, b, _ = self.blocks.shape
        x = states.reshape(states.shape[0], count, b)
        return np.einsum("kij,nkj->nki", self.blocks, x).reshape(states.shape)

    def dense(self) -> np.ndarray:
        count, b, _ = self.blocks.shape
        out = np.zeros((self.d, self.d), dtype=complex)
        for i in range(count):
            out[i * b:(i + 1) * b, i * b:(i + 1) * b] = self.blocks[i]
        return out


class HadamardLayer:
    """``H^{(x) log t} (x) I_b``: normalized Walsh-Hadamard on the control index."""

    def __init__(self, t: int, b: int):
        if t < 1 or t & (t - 1):
            raise InputError(f"Hadamard layer needs a power-of-two control count, got {t}")
        self.t, self.b = t, b
        self.d = t * b

    def apply(self, states: np.ndarray) -> np.ndarray:
        n = states.shape[0]
        x = states.reshape(n, self.t, self.b)
        h = 1
        while h < self.t:
            x = x.reshape(n, self.t // (2 * h), 2, h, self.b)
            lo, hi = x[:, :, 0], x[:, :, 1]
            x = np.stack((lo + hi, lo - hi), axis=2)
            h *= 2
        return x.reshape(states.shape) / math.sqrt(self.t)

    def dense(self) -> np.ndarray:
        h = np.ones((1, 1))
        while h.shape[0] < self.t:
            h = np.block([[h, h], [h, -h]])
        return np.kron(h / math.sqrt(self.t), np.eye(self.b)).astype(complex)


class Product:
    """Apply ``factors[0]`` first, then ``factors[1]``, and so on."""

    def __init__(self, factors: Sequence):
        if not factors:
            raise InputError("empty product")
        if len({f.d for f in factors}) != 1:
            raise InputError("product factors differ in dimension")
        self.factors = tuple(factors)
        self.d = factors[0].d

    def apply(self, states: np.ndarray) -> np.ndarray:
        for f in self.factors:
            states = f.apply(states)
        return states

    def dense(self) -> np.ndarray:
        out = np.eye(self.d, dtype=complex)
        for f in self.factors:
            out = f.dense() @ out
        return out


Operator = Union[Identity, Dense, BlockDiag, HadamardLayer, Product]


@dataclass(frozen=True)
class Instruction:
    var: int
    u0: Operator
    u1: Operator

    def __post_init__(self):
        if self.u0.d != self.u1.d:
            raise InputError(f"instruction on x{self.var}: u0 and u1 differ in dimension")


@dataclass(frozen=True)
class QbpProgram:
    d: int
    n: int
    psi0: np.ndarray
    instructions: tuple[Instruction, ...]
    accept: tuple[int, ...]

    def __post_init__(self):
        psi0 = np.array(self.psi0, dtype=complex).reshape(-1)
        if psi0.shape != (self.d,):
            raise InputError(f"psi0 has length {psi0.size}, expected {self.d}")
        if abs(np.linalg.norm(psi0) - 1.0) > PSI0_NORM_TOL:
            raise InputError(f"psi0 is not normalized (norm {np.linalg.norm(psi0)!r})")
        psi0.flags.writeable = False
        object.__setattr__(self, "psi0", psi0)
        instructions = tuple(self.instructions)
        for ins in instructions:
            if ins.u0.d != self.d:
                raise InputError(f"instruction on x{ins.var} has dimension {ins.u0.d}, expected {self.d}")
            if not 1 <= ins.var <= self.n:
                raise InputError(f"instruction variable x{ins.var} outside [1, {self.n}]")
        object.__setattr__(self, "instructions", instructions)
        accept = tuple(sorted({int(i) for i in self.accept}))
        if any(not 0 <= i < self.d for i in accept):
            raise InputError(f"accepting indices must lie in [0, {self.d})")
        object.__setattr__(self, "accept", accept)

    @property
    def length(self) -> int:
        return len(self.instructions)


def input_matrix(n: int) -> np.ndarray:
    """All 2^n inputs as rows, in the same order as ``all_inputs`` (x_1 most significant)."""
    idx = np.arange(2**n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(np.int8)


def run_batch(Q: QbpProgram, inputs: np.ndarray) -> np.ndarray:
    """Final states for each row of ``inputs``; returns shape ``(rows, d)``."""
    inputs = np.asarray(inputs)
    if inputs.ndim != 2 or inputs.shape[1] != Q.n:
        raise InputError(f"inputs must have shape (rows, {Q.n})")
    states = np.tile(Q.psi0, (inputs.shape[0], 1))
    for ins in Q.instructions:
        ones = inputs[:, ins.var - 1] == 1
        if ones.all():
            states = ins.u1.apply(states)
            continue
        if not ones.any():
            states = ins.u0.apply(states)
            continue
        out = np.empty_like(states)
        out[ones] = ins.u1.apply(states[ones])
        out[~ones] = ins.u0.apply(states[~ones])
        states = out
    return states


def run(Q: QbpProgram, sigma) -> np.ndarray:
    """Final state ``U_l(sigma) ... U_1(sigma) psi0``, one instruction at a time."""
    bits = as_bits(sigma, Q.n)
    state = Q.psi0.copy()
    for ins in Q.instructions:
        op = ins.u1 if bits[ins.var - 1] else ins.u0
        state = op.apply(state[None, :])[0]
    return state


def _accept_mass(Q: QbpProgram, states: np.ndarray) -> np.ndarray:
    if not Q.accept:
        return np.zeros(states.shape[0])
    amps = states[:, list(Q.accept)]
    return np.sum(amps.real**2 + amps.imag**2, axis=1)


def accept_probability(Q: QbpProgram, sigma) -> float:
    return float(_accept_mass(Q, run(Q, sigma)[None, :])[0])


def reject_probability(Q: QbpProgram, sigma) -> float:
    state = run(Q, sigma)
    accept = set(Q.accept)
    rejecting = [i for i in range(Q.d) if i not in accept]
    return float(np.sum(np.abs(state[rejecting]) ** 2))


def is_read_once(Q: QbpProgram) -> bool:
    seen = [ins.var for ins in Q.instructions]
    return len(seen) == len(set(seen))


def measures(Q: QbpProgram) -> dict:
    return {
        "width": Q.d,
        "length": Q.length,
        "size": Q.d * Q.length,
        "qubits": (Q.d - 1).bit_length(),
    }


@dataclass
class SimulationReport:
    """Exhaustive-sweep result.

    ``kind`` is ``"one-sided"`` when every positive input is accepted with
    probability >= 1 - 1e-9 and no negative input is accepted surely; then
    ``one_sided_error`` is the largest acceptance over f^{-1}(0).  ``margin``
    is ``1/2 - max error probability`` whenever that is positive, so a
    one-sided program with error below 1/2 carries both numbers.
    """

    probabilities: dict[str, float]
    truth: dict[str, bool]
    kind: str
    one_sided_error: float | None
    margin: float | None
    width: int
    length: int
    size: int
    qubits: int
    max_norm_deviation: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "one_sided_error": self.one_sided_error,
            "margin": self.margin,
            "width": self.width,
            "length": self.length,
            "size": self.size,
            "qubits": self.qubits,
            "max_norm_deviation": self.max_norm_deviation,
            "probabilities": self.probabilities,
            **self.extra,
        }


def sweep(Q: QbpProgram, cap: int | None = None) -> tuple[np.ndarray, np.ndarray, float]:
    """Accept probabilities for all inputs plus the worst final-state norm deviation."""
    check_cap(Q.n, cap)
    X = input_matrix(Q.n)
    probs = np.empty(X.shape[0])
    worst = 0.0
    for lo in range(0, X.shape[0], BATCH):
        states = run_batch(Q, X[lo:lo + BATCH])
        norms = np.linalg.norm(states, axis=1)
        worst = max(worst, float(np.max(np.abs(norms - 1.0))))
        probs[lo:lo + BATCH] = _accept_mass(Q, states)
    return X, probs, worst


def classify_error(Q: QbpProgram, f: TruthOracle, cap: int | None = None) -> SimulationReport:
    X, probs, worst = sweep(Q, cap)
    truth = np.array([bool(f(tuple(int(b) for b in row))) for row in X], dtype=bool)
    pos, neg = probs[truth], probs[~truth]

    one_sided = None
    if (pos.size == 0 or pos.min() >= 1.0 - ONE_SIDED_TOL) and (neg.size == 0 or neg.max() < 1.0 - ONE_SIDED_TOL):
        one_sided = float(neg.max()) if neg.size else 0.0
    errors = np.where(truth, 1.0 - probs, probs)
    margin = 0.5 - float(errors.max()) if errors.size else 0.5
    if one_sided is not None:
        kind = "one-sided"
    elif margin > 0:
        kind = "bounded"
    else:
        kind = "neither"
    keys = [bitstring(row) for row in X]
    meas = measures(Q)
    return SimulationReport(
        probabilities=dict(zip(keys, map(float, probs))),
        truth=dict(zip(keys, map(bool, truth))),
        kind=kind,
        one_sided_error=one_sided,
        margin=margin if margin > 0 else None,
        max_norm_deviation=worst,
        **meas,
    )


def _complex_pairs(arr: np.ndarray) -> list:
    if arr.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in arr]
    return [_complex_pairs(a) for a in arr]


def _from_pairs(obj) -> np.ndarray:
    arr = np.array(obj, dtype=float)
    if arr.shape[-1] != 2:
        raise InputError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def operator_to_json(op: Operator, dense: bool = False):
    if dense or isinstance(op, Dense):
        return _complex_pairs(op.dense())
    if isinstance(op, Identity):
        return {"kind": "identity", "d": op.d}
    if isinstance(op, BlockDiag):
        return {"kind": "block_diag", "blocks": _complex_pairs(op.blocks)}
    if isinstance(op, HadamardLayer):
        return {"kind": "hadamard", "t": op.t, "block": op.b}
    if isinstance(op, Product):
        return {"kind": "product", "factors": [operator_to_json(f) for f in op.factors]}
    raise InputError(f"unknown operator {type(op).__name__}")


def operator_from_json(obj) -> Operator:
    """Row-major matrices of [re, im] pairs, or a structured ``{"kind": ...}`` object."""
    if isinstance(obj, list):
        return Dense(_from_pairs(obj))
    kind = obj.get("kind")
    if kind == "identity":
        return Identity(int(obj["d"]))
    if kind == "dense":
        return Dense(_from_pairs(obj["matrix"]))
    if kind == "block_diag":
        return BlockDiag(_from_pairs(obj["blocks"]))
    if kind == "hadamard":
        return HadamardLayer(int(obj["t"]), int(obj["block"]))
    if kind == "product":
        return Product([operator_from_json(f) for f in obj["factors"]])
    raise InputError(f"unknown operator kind {kind!r}")


def program_to_json(Q: QbpProgram, dense: bool = False) -> dict:
    return {
        "d": Q.d,
        "n": Q.n,
        "psi0": _complex_pairs(Q.psi0),
        "instructions": [
            {"var": ins.var, "u0": operator_to_json(ins.u0, dense), "u1": operator_to_json(ins.u1, dense)}
            for ins in Q.instructions
        ],
        "accept": list(Q.accept),
    }


def program_from_json(obj: dict) -> QbpProgram:
    try:
        instructions = [
            Instruction(int(i["var"]), operator_from_json(i["u0"]), operator_from_json(i["u1"]))
            for i in obj["instructions"]
        ]
        return QbpProgram(int(obj["d"]), int(obj["n"]), _from_pairs(obj["psi0"]), tuple(instructions), tuple(obj["accept"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad program JSON: {exc}") from exc


def unitaries(Q: QbpProgram) -> Iterable[np.ndarray]:
    for ins in Q.instructions:
        yield ins.u0.dense()
        yield ins.u1.dense()
