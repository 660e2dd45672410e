"""Canonical and optimal Schur states at fixed local Bloch length."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from corrcopies.errors import DomainError
from corrcopies.spin_algebra import (
    Z_AXIS,
    BlochVector,
    SchurState,
    SectorState,
    allowed_two_js,
    reduce_full,
    sector_reduced_density,
)

CONSTRAINT_TOL = 1e-10
_TIE_TOL = 1e-12


class StateKind(str, enum.Enum):
    SYMMETRIC = "symmetric"
    KNOWN_OPTIMAL = "known"
    UNKNOWN_OPTIMAL = "unknown"


def lowest_spin_offset(n: int) -> int:
    """``S``: 2 for even N, 1 for odd N (twice the smallest nonzero spin)."""
    return 2 if n % 2 == 0 else 1


def _check(n: int, r: float, min_n: int) -> None:
    if int(n) != n or n < min_n:
        raise DomainError(f"qubit count must be an integer >= {min_n}, got {n}")
    if not (0.0 <= r <= 1.0):
        raise DomainError(f"Bloch length must lie in [0, 1], got {r}")


def _unit(direction) -> np.ndarray:
    d = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(d)
    if norm == 0.0:
        raise DomainError("direction must be nonzero")
    return d / norm


def canonical_sym_state(n: int, r: float, direction=Z_AXIS) -> SchurState:
    """Symmetric-subspace state mixing the two extremal ``m = +-N/2`` states."""
    _check(n, r, 1)
    sector = SectorState.extremal_mixture(n, n, (1.0 + r) / 2, _unit(direction))
    return SchurState(n, ((1.0, sector),))


def known_opt_state(n: int, r: float, direction=Z_AXIS) -> SchurState:
    """Best state when the correlation structure is known.

    Top sector polarized along ``direction``, the next sector polarized
    against it.
    """
    _check(n, r, 2)
    d = _unit(direction)
    p_top = (n * (r + 1) - 2) / (2 * n - 2)
    p_next = (n - r * n) / (2 * n - 2)
    entries = []
    if p_top > 0.0:
        entries.append((p_top, SectorState.polarized(n, n, d, +1)))
    if p_next > 0.0:
        entries.append((p_next, SectorState.polarized(n, n - 2, d, -1)))
    return SchurState(n, tuple(entries))


def unknown_opt_state(n: int, r: float, direction=Z_AXIS) -> SchurState:
    """Best state when sector estimates cannot be conditionally reflected.

    For ``r >= S/N`` two adjacent sectors bracketing ``j = rN/2`` are used,
    both parallel; below that, the lowest nonzero spin is mixed with an
    antiparallel symmetric sector.
    """
    _check(n, r, 2)
    d = _unit(direction)
    s = lowest_spin_offset(n)
    target = r * n  # doubled spin that the constraint asks for
    if target >= s - _TIE_TOL:
        two_j = next(tj for tj in allowed_two_js(n) if tj >= target - _TIE_TOL)
        if abs(two_j - target) <= _TIE_TOL:
            return SchurState(n, ((1.0, SectorState.polarized(n, two_j, d, +1)),))
        p_hi = (target - two_j) / 2 + 1
        p_lo = (two_j - target) / 2
        return SchurState(
            n,
            (
                (p_hi, SectorState.polarized(n, two_j, d, +1)),
                (p_lo, SectorState.polarized(n, two_j - 2, d, +1)),
            ),
        )
    p_low = (r + 1) * n / (n + s)
    p_top = (s - r * n) / (n + s)
    if s == n:
        # N = 2: both terms live in the same sector
        q = p_low / (p_low + p_top)
        return SchurState(n, ((1.0, SectorState.extremal_mixture(n, n, q, d)),))
    return SchurState(
        n,
        (
            (p_top, SectorState.polarized(n, n, d, -1)),
            (p_low, SectorState.polarized(n, s, d, +1)),
        ),
    )


@dataclass(frozen=True)
class StateFamily:
    kind: StateKind
    n: int
    r: float
    direction: BlochVector = Z_AXIS

    def __post_init__(self):
        object.__setattr__(self, "kind", StateKind(self.kind))
        if not (0.0 <= self.r <= 1.0):
            raise DomainError(f"Bloch length must lie in [0, 1], got {self.r}")
        if abs(BlochVector(*self.direction).length - 1.0) > 1e-12:
            raise DomainError("direction must be a unit vector")

    def build(self) -> SchurState:
        builder = {
            StateKind.SYMMETRIC: canonical_sym_state,
            StateKind.KNOWN_OPTIMAL: known_opt_state,
            StateKind.UNKNOWN_OPTIMAL: unknown_opt_state,
        }[self.kind]
        return builder(self.n, self.r, self.direction)


@dataclass
class ConstraintReport:
    weight_sum_residual: float
    min_weight: float
    max_sector_length: float
    bloch_residual: float
    tolerance: float = CONSTRAINT_TOL
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


def check_constraints(state: SchurState, r_target, tol: float = CONSTRAINT_TOL) -> ConstraintReport:
    """Residuals of the normalization, positivity and local-Bloch constraints."""
    weights = [p for p, _ in state.entries]
    weight_res = abs(sum(weights) - 1.0)
    min_w = min(weights) if weights else 0.0
    lengths = [sector_reduced_density(s).length for _, s in state.entries]
    max_len = max(lengths) if lengths else 0.0
    achieved = reduce_full(state).as_array()
    bloch_res = float(np.max(np.abs(achieved - np.asarray(r_target, dtype=float))))
    report = ConstraintReport(weight_res, min_w, max_len, bloch_res, tol)
    if weight_res > tol:
        report.problems.append(f"weights sum residual {weight_res:.3g}")
    if min_w < -tol:
        report.problems.append(f"negative weight {min_w:.3g}")
    if max_len > 1.0 + tol:
        report.problems.append(f"sector Bloch length {max_len:.6g} exceeds 1")
    if bloch_res > tol:
        report.problems.append(f"local Bloch residual {bloch_res:.3g}")
    return report


def step_down_delta(n: int, two_j_prime: int, two_j_second: int, eps: float) -> float:
    """Signed objective after lowering r by ``eps`` from the pure sector ``j'``,
    moving weight to a single lower sector ``j''``."""
    jp, js = two_j_prime / 2, two_j_second / 2
    cp, cs = jp / (jp + 1), js / (js + 1)
    return n * eps / (2 * (jp - js)) * (cs - cp) + cp
