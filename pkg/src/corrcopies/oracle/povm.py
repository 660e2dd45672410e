"""Covariant coherent-state POVM evaluated by product Gauss quadrature on the sphere.

The continuous measurement ``{(2j+1) |n><n| dn / 4pi}`` on a spin-j sector,
followed by guessing the direction ``n`` (or ``-n``), is integrated exactly:
every integrand here is a polynomial in the components of ``n`` of degree at
most ``2j + 1``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from corrcopies.errors import DomainError
from corrcopies.spin_algebra import SchurState, reduce_full, rotation_matrix


class QuadratureAccuracyWarning(UserWarning):
    pass


class ReflectionRule(str, enum.Enum):
    IDENTITY = "identity"
    REFLECT_WHEN_OBTUSE = "reflect-when-obtuse"


@dataclass(frozen=True, eq=False)
class SphereQuadrature:
    """Nodes on the unit sphere with weights normalized to one.

    ``order`` Gauss-Legendre nodes in cos(theta) times ``order`` equally
    spaced azimuths; exact for spherical polynomials of degree ``order - 1``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    @property
    def exact_degree(self) -> int:
        return self.order - 1

    def integrate(self, values: np.ndarray) -> np.ndarray:
        return np.tensordot(self.weights, values, axes=(0, 0))


def sphere_quadrature(order: int) -> SphereQuadrature:
    if order < 1:
        raise DomainError(f"quadrature order must be positive, got {order}")
    x, w = leggauss(order)
    phi = 2 * math.pi * np.arange(order) / order
    sin_t = np.sqrt(1.0 - x**2)
    nodes = np.stack(
        [
            np.outer(sin_t, np.cos(phi)).ravel(),
            np.outer(sin_t, np.sin(phi)).ravel(),
            np.repeat(x, order),
        ],
        axis=1,
    )
    weights = np.repeat(w / 2, order) / order
    return SphereQuadrature(nodes, weights, order)


def default_order(n: int) -> int:
    return 2 * n + 4


def coherent_amplitudes(two_j: int, nodes: np.ndarray) -> np.ndarray:
    """Components of ``|phi>^{(x) 2j}`` in the ``m = j..-j`` basis, one row per node.

    ``|phi> = cos(t/2) |0> + e^{i p} sin(t/2) |1>`` has Bloch vector ``n``.
    """
    nodes = np.atleast_2d(nodes)
    z = np.clip(nodes[:, 2], -1.0, 1.0)
    c = np.sqrt((1.0 + z) / 2)
    s = np.sqrt((1.0 - z) / 2)
    rho = np.hypot(nodes[:, 0], nodes[:, 1])
    phase = np.where(rho > 0, (nodes[:, 0] + 1j * nodes[:, 1]) / np.where(rho > 0, rho, 1.0), 1.0)
    k = np.arange(two_j + 1)
    binom = np.sqrt([math.comb(two_j, int(i)) for i in k])
    return binom * c[:, None] ** (two_j - k) * (phase * s)[:, None] ** k


def _outcome_density(two_j: int, lam: np.ndarray, quad: SphereQuadrature) -> np.ndarray:
    amps = coherent_amplitudes(two_j, quad.nodes)
    probs = np.real(np.einsum("ni,ik,nk->n", amps.conj(), lam, amps))
    return (two_j + 1) * probs


def estimate_bloch(two_j: int, lam: np.ndarray, quad: SphereQuadrature) -> np.ndarray:
    """Bloch vector of the averaged guess ``sum_n w (2j+1) <n|lam|n> |n><n|``."""
    dens = _outcome_density(two_j, lam, quad)
    return quad.integrate(dens[:, None] * quad.nodes)


def covariant_povm_fidelity(
    state: SchurState,
    quad: SphereQuadrature | None = None,
    reflect: ReflectionRule | str = ReflectionRule.IDENTITY,
    direction=None,
) -> float:
    """Quadrature estimate of the fidelity of sector-wise covariant measurements.

    The reflection decision is taken from the sign of the quadrature mean
    guess against the target axis, not from closed-form Bloch vectors.
    """
    reflect = ReflectionRule(reflect)
    if quad is None:
        quad = sphere_quadrature(default_order(state.n))
    elif quad.order < 2 * state.n + 2:
        warnings.warn(
            f"quadrature order {quad.order} < 2N+2 = {2 * state.n + 2}; results may be inexact",
            QuadratureAccuracyWarning,
            stacklevel=2,
        )
    if direction is None:
        target = reduce_full(state).as_array()
    else:
        target = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(target)
    if norm < 1e-12:
        raise DomainError("direction undefined")
    target = target / norm
    cos_to_target = quad.nodes @ target
    total = 0.0
    for p, sector in state.entries:
        if p == 0.0:
            continue
        dens = _outcome_density(sector.two_j, sector.lam, quad)
        sign = 1.0
        if reflect is ReflectionRule.REFLECT_WHEN_OBTUSE:
            if float(quad.integrate(dens * cos_to_target)) < 0.0:
                sign = -1.0
        overlap = 0.5 * (1.0 + sign * cos_to_target)
        total += p * float(quad.integrate(dens * overlap))
    return total


def povm_completeness_residual(two_j: int, quad: SphereQuadrature) -> float:
    """Max-norm distance of ``sum_n w (2j+1) |n><n|`` from the identity."""
    amps = coherent_amplitudes(two_j, quad.nodes)
    resolved = (two_j + 1) * np.einsum("n,ni,nk->ik", quad.weights, amps, amps.conj())
    return float(np.max(np.abs(resolved - np.eye(two_j + 1))))


@dataclass
class CovarianceReport:
    n: int
    shrink_expected: float
    shrink_mean: float
    shrink_spread: float
    shrink_error: float
    perpendicular_residual: float
    commutation_residual: float
    tolerance: float = 1e-7

    @property
    def passed(self) -> bool:
        return (
            self.shrink_spread < self.tolerance
            and self.shrink_error < self.tolerance
            and self.perpendicular_residual < self.tolerance
            and self.commutation_residual < self.tolerance
        )


def _random_unit(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def verify_covariance(n: int, quad: SphereQuadrature | None = None, seed: int = 0, trials: int = 20) -> CovarianceReport:
    """Measure the shrink factor of the estimate map on ``|phi><phi|^{(x) n}``
    and its commutation with random rotations."""
    if int(n) != n or not 1 <= n <= 6:
        raise DomainError(f"covariance check supports 1 <= n <= 6, got {n}")
    rng = np.random.default_rng(seed)
    quad = quad or sphere_quadrature(default_order(n))
    shrinks, perps = [], []
    for _ in range(trials):
        phi = _random_unit(rng)
        amp = coherent_amplitudes(n, phi)[0]
        b = estimate_bloch(n, np.outer(amp, amp.conj()), quad)
        a = float(b @ phi)
        shrinks.append(a)
        perps.append(float(np.linalg.norm(b - a * phi)))
    comm = 0.0
    for _ in range(trials):
        axis, angle = _random_unit(rng), rng.uniform(0, 2 * math.pi)
        g = rng.normal(size=(n + 1, n + 1)) + 1j * rng.normal(size=(n + 1, n + 1))
        lam = g @ g.conj().T
        lam /= np.trace(lam)
        rot = rotation_matrix(n, axis, angle)
        qubit_rot = rotation_matrix(1, axis, angle)
        lhs = _bloch_matrix(estimate_bloch(n, rot @ lam @ rot.conj().T, quad))
        rhs = qubit_rot @ _bloch_matrix(estimate_bloch(n, lam, quad)) @ qubit_rot.conj().T
        comm = max(comm, float(np.max(np.abs(lhs - rhs))))
    expected = n / (n + 2)
    shrinks = np.array(shrinks)
    return CovarianceReport(
        n=n,
        shrink_expected=expected,
        shrink_mean=float(shrinks.mean()),
        shrink_spread=float(shrinks.max() - shrinks.min()),
        shrink_error=float(np.max(np.abs(shrinks - expected))),
        perpendicular_residual=max(perps),
        commutation_residual=comm,
    )


def _bloch_matrix(b) -> np.ndarray:
    x, y, z = b
    return 0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]])
