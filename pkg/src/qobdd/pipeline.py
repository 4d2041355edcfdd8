"""End-to-end sweeps: build a fingerprint program, simulate every input, compare.

Shared by the command line and the acceptance suite so both report the same
numbers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fingerprint as fp
from . import good_sets as gs
from .qbp import ONE_SIDED_TOL, QbpProgram, is_read_once, measures, sweep, unitaries
from .zmod_poly import TruthOracle, bitstring, verify_characteristic_set

AGREEMENT_TOL = 1e-9
NORM_TOL = 1e-9
UNITARY_TOL = 1e-10


@dataclass
class SweepRow:
    sigma: str
    f: bool
    g: tuple[int, ...]
    closed_form: float
    simulated: float

    @property
    def delta(self) -> float:
        return abs(self.closed_form - self.simulated)


def sweep_rows(spec: fp.FingerprintSpec, Q: QbpProgram, f: TruthOracle, cap: int | None = None) -> tuple[list[SweepRow], float]:
    """One row per input plus the worst final-state norm deviation."""
    X, probs, worst = sweep(Q, cap)
    rows = []
    for bits, p in zip(X, probs):
        s = tuple(int(b) for b in bits)
        rows.append(
            SweepRow(
                sigma=bitstring(s),
                f=bool(f(s)),
                g=tuple(poly(s) for poly in spec.chi.polys),
                closed_form=fp.closed_form(spec, s),
                simulated=float(p),
            )
        )
    return rows, worst


def false_accept_limit(spec: fp.FingerprintSpec) -> float:
    """Acceptance every negative input must stay under (single) or at most (general)."""
    eps = spec.goodset.epsilon
    return 0.5 + math.sqrt(eps) / 2 if spec.general else eps


def max_unitarity_error(Q: QbpProgram) -> float:
    worst = 0.0
    for U in unitaries(Q):
        worst = max(worst, float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0])))))
    return worst


def verify(spec: fp.FingerprintSpec, Q: QbpProgram, f: TruthOracle, cap: int | None = None) -> dict:
    """Check the one-sided guarantee, closed-form agreement and structure of ``Q``."""
    rows, worst_norm = sweep_rows(spec, Q, f, cap)
    pos = [r.simulated for r in rows if r.f]
    neg = [r.simulated for r in rows if not r.f]
    limit = false_accept_limit(spec)
    min_pos = min(pos, default=1.0)
    max_neg = max(neg, default=0.0)
    neg_ok = (max_neg <= limit + AGREEMENT_TOL) if spec.general else (max_neg < limit)
    meas = measures(Q)
    wq = fp.width_qubits_report(spec)
    max_delta = max(r.delta for r in rows)
    K = spec.goodset
    worst_square = gs.max_squared_average(K, K.image if K.scope is gs.Scope.IMAGE else None)
    checks = {
        "characteristic": verify_characteristic_set(spec.chi, f, cap),
        "positives_accepted": min_pos >= 1.0 - ONE_SIDED_TOL,
        "negatives_bounded": neg_ok,
        "closed_form_agreement": max_delta <= AGREEMENT_TOL,
        "goodset_verified": K.verified and gs.below(worst_square, K.epsilon),
        "structure": (
            meas["width"] == wq["width"]
            and meas["qubits"] == wq["qubits"]
            and meas["length"] == Q.n
            and meas["size"] == meas["width"] * meas["length"]
            and is_read_once(Q)
        ),
        "norms": worst_norm <= NORM_TOL,
        "unitary": max_unitarity_error(Q) <= UNITARY_TOL,
    }
    return {
        "passed": all(checks.values()),
        "checks": checks,
        "min_positive_acceptance": min_pos,
        "max_negative_acceptance": max_neg,
        "false_accept_limit": limit,
        "max_closed_form_delta": max_delta,
        "max_norm_deviation": worst_norm,
        "goodset_max_squared_average": worst_square,
        "modulus": spec.chi.m,
        **meas,
        "t": wq["t"],
        "l": wq["l"],
        "probabilities": {r.sigma: r.simulated for r in rows},
    }
