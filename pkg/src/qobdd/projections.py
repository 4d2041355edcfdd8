"""Polynomial projections: substituting constants and literals for variables.

A projection sends each target variable ``y_j`` to 0, 1, ``x_i`` or ``not x_i``.
Substituting into a linear polynomial keeps it linear, so any function that
projects onto one with a linear characteristic has one too.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .errors import InputError
from .zmod_poly import Characteristic, LinearPoly, TruthOracle, all_inputs, as_bits, check_cap


class Lit(enum.Enum):
    CONST0 = "c0"
    CONST1 = "c1"
    VAR = "var"
    NEGVAR = "negvar"


@dataclass(frozen=True)
class Projection:
    """``mapping[j-1]`` is the literal substituted for target variable ``y_j``.

    Each entry is ``(Lit, i)`` with ``i`` a source index in [1, n] for VAR
    and NEGVAR and ``None`` for constants.
    """

    p_n: int
    n: int
    mapping: tuple[tuple[Lit, int | None], ...]

    def __post_init__(self):
        mapping = []
        for kind, i in self.mapping:
            kind = Lit(kind)
            if kind in (Lit.VAR, Lit.NEGVAR):
                if i is None or not 1 <= int(i) <= self.n:
                    raise InputError(f"source index {i} outside [1, {self.n}]")
                i = int(i)
            else:
                i = None
            mapping.append((kind, i))
        if len(mapping) != self.p_n:
            raise InputError(f"mapping has {len(mapping)} entries, expected {self.p_n}")
        object.__setattr__(self, "mapping", tuple(mapping))

    def __call__(self, sigma) -> tuple[int, ...]:
        """The target assignment ``pi(sigma)``."""
        bits = as_bits(sigma, self.n)
        out = []
        for kind, i in self.mapping:
            if kind is Lit.CONST0:
                out.append(0)
            elif kind is Lit.CONST1:
                out.append(1)
            elif kind is Lit.VAR:
                out.append(bits[i - 1])
            else:
                out.append(1 - bits[i - 1])
        return tuple(out)


def identity(n: int) -> Projection:
    return Projection(n, n, tuple((Lit.VAR, i) for i in range(1, n + 1)))


def apply_to_poly(g: LinearPoly, pi: Projection) -> LinearPoly:
    if g.n != pi.p_n:
        raise InputError(f"polynomial has {g.n} variables, projection targets {pi.p_n}")
    c0 = g.c0
    coeffs = [0] * pi.n
    for c, (kind, i) in zip(g.coeffs, pi.mapping):
        if kind is Lit.CONST1:
            c0 += c
        elif kind is Lit.VAR:
            coeffs[i - 1] += c
        elif kind is Lit.NEGVAR:
            # c * (1 - x_i)
            c0 += c
            coeffs[i - 1] -= c
    return LinearPoly(g.m, c0, tuple(coeffs))


def apply_to_truth(h: TruthOracle, pi: Projection) -> TruthOracle:
    return lambda sigma: h(pi(sigma))


def multiplicity(pi: Projection, i: int) -> int:
    return sum(1 for kind, j in pi.mapping if j == i and kind in (Lit.VAR, Lit.NEGVAR))


def is_read_once_projection(pi: Projection) -> bool:
    return all(multiplicity(pi, i) <= 1 for i in range(1, pi.n + 1))


_NEGATE = {Lit.CONST0: Lit.CONST1, Lit.CONST1: Lit.CONST0, Lit.VAR: Lit.NEGVAR, Lit.NEGVAR: Lit.VAR}


def compose(outer: Projection, inner: Projection) -> Projection:
    """The projection with ``apply_to_poly(g, compose(a, b)) == apply_to_poly(apply_to_poly(g, a), b)``.

    ``outer`` maps targets onto ``outer.n`` variables, which ``inner`` then
    treats as its targets.
    """
    if outer.n != inner.p_n:
        raise InputError(f"cannot compose: {outer.n} sources vs {inner.p_n} targets")
    mapping = []
    for kind, i in outer.mapping:
        if kind in (Lit.CONST0, Lit.CONST1):
            mapping.append((kind, None))
            continue
        sub_kind, j = inner.mapping[i - 1]
        mapping.append((sub_kind if kind is Lit.VAR else _NEGATE[sub_kind], j))
    return Projection(outer.p_n, inner.n, tuple(mapping))


def projection_keeps_characteristic(h: TruthOracle, chi_h: Characteristic, pi: Projection, cap: int | None = None) -> bool:
    """Project every polynomial of ``chi_h`` and verify it against ``h`` composed with ``pi``."""
    check_cap(pi.n, cap)
    projected = [apply_to_poly(g, pi) for g in chi_h.polys]
    f = apply_to_truth(h, pi)
    return all(all(g(s) == 0 for g in projected) == bool(f(s)) for s in all_inputs(pi.n))


def projection_to_json(pi: Projection) -> dict:
    entries = []
    for kind, i in pi.mapping:
        entries.append({"kind": kind.value} if i is None else {"kind": kind.value, "i": i})
    return {"p_n": pi.p_n, "n": pi.n, "map": entries}


def projection_from_json(obj: dict) -> Projection:
    try:
        mapping = tuple((Lit(e["kind"]), e.get("i")) for e in obj["map"])
        return Projection(int(obj["p_n"]), int(obj["n"]), mapping)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad projection JSON: {exc}") from exc


def from_literals(p_n: int, n: int, entries: Sequence[str]) -> Projection:
    """Parse compact literals such as ``["x1", "!x2", "0", "1"]``."""
    mapping = []
    for e in entries:
        e = e.strip()
        if e in ("0", "1"):
            mapping.append((Lit.CONST0 if e == "0" else Lit.CONST1, None))
        elif e.startswith(("!x", "~x")):
            mapping.append((Lit.NEGVAR, int(e[2:])))
        elif e.startswith("x"):
            mapping.append((Lit.VAR, int(e[1:])))
        else:
            raise InputError(f"cannot parse literal {e!r}")
    return Projection(p_n, n, tuple(mapping))
