"""Closed-form direction-estimation fidelities.

All fidelities are averages over a uniformly random global rotation of the
input state; they lie between 1/2 (random guessing) and 1.
"""

from __future__ import annotations

import enum
import functools
import math
from typing import Iterable, Sequence

import numpy as np
from scipy.special import gammaln

from corrcopies.errors import DomainError
from corrcopies.spin_algebra import (
    SchurState,
    allowed_two_js,
    reduce_full,
    sector_multiplicity,
    sector_reduced_density,
)

DIRECTION_TOL = 1e-12


class Structure(str, enum.Enum):
    KNOWN = "known"
    UNKNOWN = "unknown"


def _check_r(r: float) -> None:
    if not (0.0 <= r <= 1.0):
        raise DomainError(f"Bloch length must lie in [0, 1], got {r}")


def _check_n(n: int, minimum: int = 1) -> None:
    if int(n) != n or n < minimum:
        raise DomainError(f"qubit count must be an integer >= {minimum}, got {n}")


def shrink_cloning(n_in: int, m_out: float) -> float:
    """Bloch shrink factor of each clone of the optimal universal N -> M cloner.

    ``m_out`` may be ``math.inf``, giving the estimation limit N/(N+2).
    """
    _check_n(n_in)
    if m_out < n_in:
        raise DomainError(f"cannot clone {n_in} copies into {m_out}")
    if math.isinf(m_out):
        return n_in / (n_in + 2)
    if int(m_out) != m_out:
        raise DomainError(f"clone count must be an integer or infinity, got {m_out}")
    return n_in * (m_out + 2) / (m_out * (n_in + 2))


def f_sym(n: int, r: float) -> float:
    """Optimal fidelity for any state supported on the symmetric subspace."""
    _check_n(n)
    _check_r(r)
    a = n / (n + 2)
    return 0.5 * (a * r + 1.0)


EXACT_COEFF_MAX_N = 40


def _series_coefficients(two_j: int) -> list[int]:
    """Integer coefficients of ``Q_j(r) / r^2``, lowest order first.

    ``Q_j = (1+r)^(2j+1) ((3+4j) r - 1) + (1-r)^(2j+2)`` vanishes to second
    order at r = 0.  Expanding, the coefficient of ``r^k`` is
    ``2 (2j+2) C(2j+1, k-1)`` for even k and ``(k-1)/k`` times that for odd k,
    so the series has no cancellation for r >= 0.
    """
    t = two_j
    out = []
    for k in range(2, t + 3):
        base = 2 * (t + 2) * math.comb(t + 1, k - 1)
        out.append(base if k % 2 == 0 else base * (k - 1) // k)
    return out


def _log_series_coefficients(two_j: int) -> np.ndarray:
    t = two_j
    k = np.arange(2, t + 3)
    log_c = math.log(2 * (t + 2)) + gammaln(t + 2) - gammaln(k) - gammaln(t + 3 - k)
    return log_c + np.where(k % 2 == 0, 0.0, np.log((k - 1) / k))


@functools.lru_cache(maxsize=None)
def _prod_sector_table(n: int) -> tuple[tuple[int, float, np.ndarray], ...]:
    """Per sector: ``(two_j, log prefactor, log series coefficients)``.

    The prefactor is ``d_j / (2^(N+3) (j+1))``; the sum is evaluated as a
    sum of positive terms in log space.
    """
    rows = []
    for two_j in allowed_two_js(n):
        if n <= EXACT_COEFF_MAX_N:
            log_c = np.log(np.array(_series_coefficients(two_j), dtype=float))
        else:
            log_c = _log_series_coefficients(two_j)
        d = sector_multiplicity(n, two_j)
        log_pref = math.log(d) - (n + 3) * math.log(2.0) - math.log(two_j / 2 + 1)
        rows.append((two_j, log_pref, log_c))
    return tuple(rows)


def f_prod(n: int, r: float) -> float:
    """Optimal fidelity on the uncorrelated product state ``rho^{(x) n}``."""
    _check_n(n)
    _check_r(r)
    if r == 0.0:
        return 0.5
    log_r = math.log(r)
    log_mix = math.log1p(-r * r) if r < 1.0 else -math.inf
    total = 0.0
    for two_j, log_pref, log_c in _prod_sector_table(n):
        e = (n - two_j) // 2
        if e and r == 1.0:
            continue
        log_w = log_pref + (e * log_mix if e else 0.0)
        powers = np.arange(log_c.size) * log_r
        total += float(np.sum(np.exp(log_w + log_c + powers)))
    return total


def _direction(state: SchurState, direction) -> np.ndarray:
    rvec = reduce_full(state).as_array()
    if direction is not None:
        d = np.asarray(direction, dtype=float)
        norm = np.linalg.norm(d)
        if norm == 0.0:
            raise DomainError("direction undefined")
        return d / norm
    r = np.linalg.norm(rvec)
    if r < DIRECTION_TOL:
        raise DomainError("direction undefined: reduced Bloch vector vanishes")
    return rvec / r


def _sector_projections(state: SchurState, direction) -> list[tuple[float, int, float]]:
    unit = _direction(state, direction)
    out = []
    for p, s in state.entries:
        if s.two_j == 0 or p == 0.0:
            continue
        proj = float(np.dot(sector_reduced_density(s).bloch.as_array(), unit))
        out.append((p, s.two_j, proj))
    return out


def delta_known(state: SchurState, direction=None) -> float:
    """``sum_j p_j j/(j+1) |r_j . r_hat|``; the fidelity is (1 + delta)/2."""
    return sum(p * tj / (tj + 2) * abs(x) for p, tj, x in _sector_projections(state, direction))


def delta_unknown(state: SchurState, direction=None) -> float:
    """Signed counterpart of :func:`delta_known` (no conditional reflection)."""
    return sum(p * tj / (tj + 2) * x for p, tj, x in _sector_projections(state, direction))


def f_known(state: SchurState, direction=None) -> float:
    """Fidelity when the relative orientation of the sector Bloch vectors is known.

    Antiparallel sectors have their guesses reflected.  ``direction`` overrides
    the target axis; it is only needed when the local Bloch vector vanishes.
    """
    return 0.5 * (1.0 + delta_known(state, direction))


def f_unknown(state: SchurState, direction=None) -> float:
    """Fidelity when every sector estimate is taken at face value."""
    return 0.5 * (1.0 + delta_unknown(state, direction))


def f_known_optimal(n: int, r: float) -> float:
    _check_n(n, minimum=2)
    if not (0.0 < r <= 1.0):
        raise DomainError(f"Bloch length must lie in (0, 1], got {r}")
    return (n * n + r - 2) / ((n - 1) * (n + 2))


def asymptotic_fidelity(n: int, r: float, structure: Structure | str) -> float:
    """Leading-order large-N fidelity of the optimal state, clamped to [1/2, 1]."""
    _check_n(n)
    if not (0.0 < r <= 1.0):
        raise DomainError(f"Bloch length must lie in (0, 1], got {r}")
    structure = Structure(structure)
    if structure is Structure.KNOWN:
        value = 1.0 - 1.0 / n
    else:
        value = 1.0 - 1.0 / (r * n)
    return min(1.0, max(0.5, value))


# Collinear bookkeeping: a configuration is a sequence of
# (two_j, weight, signed_length) with signed_length = +-r_j.


def collinear_bloch(n: int, terms: Iterable[Sequence[float]]) -> float:
    """Signed local Bloch length ``(2/N) sum +-p_j j r_j``."""
    return sum(p * tj / 2 * x for tj, p, x in terms) * 2.0 / n


def collinear_delta(terms: Iterable[Sequence[float]], structure: Structure | str) -> float:
    structure = Structure(structure)
    if structure is Structure.KNOWN:
        return sum(p * tj / (tj + 2) * abs(x) for tj, p, x in terms)
    return sum(p * tj / (tj + 2) * x for tj, p, x in terms)
