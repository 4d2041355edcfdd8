"""Width lower bounds for quantum OBDDs.

A bounded-error quantum OBDD with margin ``eps`` for ``f`` has width at least
``log w / (2 log(1 + 1/eps))`` where ``w`` is the width of a minimal
deterministic OBDD for ``f``.  The ratio of logarithms does not depend on the
base; base 2 is used throughout.
"""
from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np

from .errors import CapExceededError, InputError
from .qbp import QbpProgram, input_matrix, measures
from .zmod_poly import TruthOracle

DET_WIDTH_CAP = 20
ORDER_SEARCH_CAP = 8


def truth_table(f: TruthOracle, n: int) -> np.ndarray:
    """``table[idx]`` is ``f`` on the input whose bits (x_1 first) spell ``idx``."""
    if n > DET_WIDTH_CAP:
        raise CapExceededError(f"truth table over {n} variables exceeds cap {DET_WIDTH_CAP}")
    X = input_matrix(n)
    return np.fromiter((bool(f(tuple(int(b) for b in row))) for row in X), dtype=bool, count=X.shape[0])


def _check_order(order: Sequence[int], n: int) -> tuple[int, ...]:
    order = tuple(int(v) for v in order)
    if sorted(order) != list(range(1, n + 1)):
        raise InputError(f"order {order} is not a permutation of 1..{n}")
    return order


def _reorder(table: np.ndarray, n: int, order: Sequence[int]) -> np.ndarray:
    if n == 0:
        return table
    cube = table.reshape((2,) * n)
    return np.transpose(cube, [v - 1 for v in order]).reshape(-1)


def level_widths(table: np.ndarray, n: int) -> list[int]:
    """Distinct subfunctions after fixing the first j variables, for j = 0..n.

    Bottom-up refinement: a subfunction at level j is the pair of subfunction
    ids of its two children at level j+1.
    """
    ids = table.astype(np.int64)
    widths = [len(np.unique(ids))]
    for _ in range(n):
        pairs = ids.reshape(-1, 2)
        uniq, ids = np.unique(pairs, axis=0, return_inverse=True)
        ids = ids.reshape(-1)
        widths.append(len(uniq))
    return widths[::-1]


def det_obdd_width(f: TruthOracle, n: int, order: Sequence[int] | None = None) -> int:
    """Minimal deterministic OBDD width for ``f`` under the given variable order."""
    order = tuple(range(1, n + 1)) if order is None else _check_order(order, n)
    table = _reorder(truth_table(f, n), n, order)
    return max(level_widths(table, n))


def min_det_obdd_width(f: TruthOracle, n: int) -> tuple[int, tuple[int, ...]]:
    """Best width over every variable order, with an order achieving it."""
    if n > ORDER_SEARCH_CAP:
        raise CapExceededError(f"order search over {n} variables exceeds cap {ORDER_SEARCH_CAP}")
    table = truth_table(f, n)
    best = None
    for order in itertools.permutations(range(1, n + 1)):
        w = max(level_widths(_reorder(table, n, order), n))
        if best is None or w < best[0]:
            best = (w, order)
    return best


def qobdd_width_lower_bound(det_width: int, margin: float) -> float:
    """``log2(det_width) / (2 * log2(1 + 1/margin))``.

    ``margin = 1/2`` is accepted: an error-free program has every margin
    below 1/2 and the bound is continuous there.
    """
    if det_width < 1:
        raise InputError(f"deterministic width must be >= 1, got {det_width}")
    if not 0 < margin <= 0.5:
        raise InputError(f"margin must lie in (0, 1/2], got {margin}")
    return math.log2(det_width) / (2.0 * math.log2(1.0 + 1.0 / margin))


def qubit_bound_witness(bits_p: int) -> float:
    """``log2(bits(P))``: the value behind an Omega(log bits(P)) qubit bound.

    Only an asymptotic witness; no constant factor is implied.
    """
    if bits_p < 1:
        raise InputError(f"bits must be >= 1, got {bits_p}")
    return math.log2(bits_p)


def state_bits(det_width: int) -> int:
    """Bits needed to store the level state of a width-``det_width`` OBDD."""
    return max(1, math.ceil(math.log2(det_width)))


def eval_poly(coeffs: Sequence, x):
    """Horner evaluation; ``coeffs[k]`` multiplies ``x**k``."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def rop_size_transfer(q_coeffs: Sequence, p_coeffs: Sequence, n: int):
    """``q(p(n))``: the size bound a read-once projection carries over."""
    return eval_poly(q_coeffs, eval_poly(p_coeffs, n))


def respects_width_bound(Q: QbpProgram, f: TruthOracle, order: Sequence[int] | None, margin: float) -> bool:
    """Does the measured width of ``Q`` respect the lower bound for ``f``?"""
    w = det_obdd_width(f, Q.n, order)
    return measures(Q)["width"] >= qobdd_width_lower_bound(w, margin)


def bound_report(f: TruthOracle, n: int, order: Sequence[int] | None, margin: float, search_orders: bool = False) -> dict:
    order = tuple(range(1, n + 1)) if order is None else _check_order(order, n)
    w = det_obdd_width(f, n, order)
    report = {
        "n": n,
        "order": list(order),
        "det_width": w,
        "margin": margin,
        "width_lower_bound": qobdd_width_lower_bound(w, margin),
        "bits": state_bits(w),
        "qubit_witness_log2_bits": qubit_bound_witness(state_bits(w)),
        "log_base_note": "ratio of logarithms; base-invariant (computed in base 2)",
    }
    if search_orders:
        best, best_order = min_det_obdd_width(f, n)
        report["min_det_width"] = best
        report["min_order"] = list(best_order)
        report["min_width_lower_bound"] = qobdd_width_lower_bound(best, margin)
    return report
