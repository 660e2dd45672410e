"""Oracle-versus-closed-form check suite behind ``corrcopies verify``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from corrcopies import fidelity as fid
from corrcopies import optimal_states as opt
from corrcopies.errors import DomainError
from corrcopies.oracle.basis import build_coupled_basis
from corrcopies.oracle.dense import (
    partial_trace_keep,
    permutation_residual,
    qubit_bloch,
    schur_to_dense,
    sector_weights_of_product,
)
from corrcopies.oracle.povm import (
    ReflectionRule,
    covariant_povm_fidelity,
    default_order,
    povm_completeness_residual,
    sphere_quadrature,
    verify_covariance,
)
from corrcopies.sampling import random_state_with_length
from corrcopies.spin_algebra import (
    Z_AXIS,
    allowed_two_js,
    reduce_full,
    sector_multiplicity,
)

MAX_VERIFY_QUBITS = 8


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"check={self.name} residual={self.residual:.3e} tolerance={self.tolerance:.0e} status={status}"


def _closed_form_checks(n: int, quad, rng) -> Iterator[CheckResult]:
    dim_sum = sum(sector_multiplicity(n, tj) * (tj + 1) for tj in allowed_two_js(n))
    yield CheckResult("dimension_identity", float(abs(dim_sum - 2**n)), 0.0)

    basis = build_coupled_basis(n)
    cols = basis.columns
    yield CheckResult("basis_orthonormality", float(np.max(np.abs(cols.T @ cols - np.eye(2**n)))), 1e-10)
    path_err = max(abs(len(basis.paths(tj)) - sector_multiplicity(n, tj)) for tj in allowed_two_js(n))
    yield CheckResult("basis_path_counts", float(path_err), 0.0)

    for two_j in range(0, min(n, 12) + 1):
        yield CheckResult(f"povm_completeness[2j={two_j}]", povm_completeness_residual(two_j, quad), 1e-8)

    for r in (0.0, 0.3, 0.7, 1.0):
        state = opt.canonical_sym_state(n, r)
        got = covariant_povm_fidelity(state, quad, ReflectionRule.IDENTITY, direction=Z_AXIS)
        yield CheckResult(f"povm_vs_f_sym[r={r}]", abs(got - fid.f_sym(n, r)), 1e-7)

    if n >= 2:
        for r in (0.25, 0.5, 0.75):
            known = opt.known_opt_state(n, r)
            got = covariant_povm_fidelity(known, quad, ReflectionRule.REFLECT_WHEN_OBTUSE)
            yield CheckResult(f"povm_vs_f_known[r={r}]", abs(got - fid.f_known_optimal(n, r)), 1e-7)
            unknown = opt.unknown_opt_state(n, r)
            got = covariant_povm_fidelity(unknown, quad, ReflectionRule.IDENTITY)
            yield CheckResult(f"povm_vs_f_unknown[r={r}]", abs(got - fid.f_unknown(unknown)), 1e-7)

        states = [opt.canonical_sym_state(n, 0.5), opt.known_opt_state(n, 0.5), opt.unknown_opt_state(n, 0.5)]
        states.append(random_state_with_length(n, 0.4, rng))
        perm_res, trace_res = 0.0, 0.0
        for state in states:
            dense = schur_to_dense(state, basis)
            perm_res = max(perm_res, permutation_residual(dense))
            local = qubit_bloch(partial_trace_keep(dense, 0)).as_array()
            trace_res = max(trace_res, float(np.max(np.abs(local - reduce_full(state).as_array()))))
        yield CheckResult("permutation_invariance", perm_res, 1e-10)
        yield CheckResult("dense_partial_trace", trace_res, 1e-10)

    for r in (0.1, 0.5, 0.9):
        dec = sector_weights_of_product(n, r, basis)
        yield CheckResult(f"product_weights_sum[r={r}]", abs(sum(dec.weights.values()) - 1.0), 1e-10)
        yield CheckResult(f"product_alpha_spread[r={r}]", dec.alpha_spread, 1e-9)
        got = fid.f_known(dec.as_schur_state())
        yield CheckResult(f"product_vs_f_prod[r={r}]", abs(got - fid.f_prod(n, r)), 1e-9)

    dec0 = sector_weights_of_product(n, 0.0, basis)
    count_err = max(
        abs(dec0.weights[tj] - sector_multiplicity(n, tj) * (tj + 1) / 2**n) for tj in allowed_two_js(n)
    )
    yield CheckResult("maximally_mixed_sector_weights", count_err, 1e-10)

    if n <= 6:
        cov = verify_covariance(n, quad, seed=int(rng.integers(2**31)))
        yield CheckResult("covariant_shrink_factor", cov.shrink_error, 1e-7)
        yield CheckResult("covariant_shrink_spread", cov.shrink_spread, 1e-7)
        yield CheckResult("covariance_commutation", cov.commutation_residual, 1e-7)

    if n >= 2:
        worst = 0.0
        for r in np.linspace(0.0, 1.0, 101)[1:]:
            fk = fid.f_known_optimal(n, r)
            fu = fid.f_unknown(opt.unknown_opt_state(n, r))
            fp = fid.f_prod(n, r)
            fs = fid.f_sym(n, r)
            worst = max(worst, fu - fk, fp - fu, fs - fp)
        yield CheckResult("fidelity_ordering", max(worst, 0.0), 1e-10)

        worst = 0.0
        for r in (0.2, 0.5, 0.8):
            for _ in range(50):
                state = random_state_with_length(n, r, rng)
                worst = max(worst, fid.f_sym(n, r) - fid.f_known(state))
        yield CheckResult("symmetric_state_is_worst", max(worst, 0.0), 1e-10)


def run_verification(n: int, quadrature_order: int | None = None, seed: int = 0) -> list[CheckResult]:
    if int(n) != n or not 1 <= n <= MAX_VERIFY_QUBITS:
        raise DomainError(f"verification supports 1 <= n <= {MAX_VERIFY_QUBITS}, got {n}")
    order = quadrature_order or default_order(n)
    if order < 2 * n + 2:
        raise DomainError(f"quadrature order must be >= 2N+2 = {2 * n + 2}, got {order}")
    quad = sphere_quadrature(order)
    rng = np.random.default_rng(seed)
    return list(_closed_form_checks(n, quad, rng))


def format_report(n: int, results: list[CheckResult], emit: Callable[[str], None]) -> None:
    emit(f"n={n}")
    for res in results:
        emit(res.line())
    failed = sum(not r.passed for r in results)
    emit(f"checks={len(results)} failed={failed}")
