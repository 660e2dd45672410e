"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line (shown in the terminal summary under
"acceptance criteria") together with its runtime and budget.
"""

import contextlib
import csv
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from corrcopies.cli import main
from corrcopies.fidelity import (
    f_known,
    f_known_optimal,
    f_prod,
    f_sym,
    f_unknown,
)
from corrcopies.optimal_states import (
    canonical_sym_state,
    known_opt_state,
    unknown_opt_state,
)
from corrcopies.oracle import (
    build_coupled_basis,
    covariant_povm_fidelity,
    permutation_residual,
    schur_to_dense,
    sector_weights_of_product,
)
from corrcopies.sampling import random_state_with_length
from corrcopies.spin_algebra import Z_AXIS, allowed_two_js, sector_multiplicity, sector_reduced_density

pytestmark = pytest.mark.acceptance


@contextlib.contextmanager
def criterion(number, title, budget):
    """Time the body, record one summary line, and enforce the runtime budget."""
    info = {"detail": ""}
    start = time.perf_counter()
    try:
        yield info
    except BaseException:
        elapsed = time.perf_counter() - start
        ACCEPTANCE_LINES.append(f"[{number}] FAIL {title} ({elapsed:.2f}s / {budget}s)")
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < budget
    status = "PASS" if ok else "FAIL"
    detail = f" {info['detail']}" if info["detail"] else ""
    line = f"[{number}] {status} {title} ({elapsed:.2f}s / {budget}s){detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, f"runtime {elapsed:.2f}s exceeds {budget}s"


def test_criterion_1_pure_state_endpoint():
    with criterion(1, "pure-state endpoint", 1.0) as info:
        worst = 0.0
        for n in range(1, 13):
            target = (n + 1) / (n + 2)
            values = [f_prod(n, 1.0), f_sym(n, 1.0)]
            if n >= 2:
                values += [f_known_optimal(n, 1.0), f_unknown(unknown_opt_state(n, 1.0))]
            worst = max(worst, max(abs(v - target) for v in values))
        info["detail"] = f"max error {worst:.1e}"
        assert worst <= 1e-12


def _kink_location(r, f, left, right):
    """Intersection of the straight lines fitted on either side of a kink."""
    a = np.polyfit(r[left], f[left], 1)
    b = np.polyfit(r[right], f[right], 1)
    return (b[1] - a[1]) / (a[0] - b[0])


def test_criterion_2_six_qubit_curves(tmp_path):
    with criterion(2, "N=6 sweep curves", 1.0) as info:
        out = tmp_path / "sweep.csv"
        assert main(["sweep", "--n", "6", "--out", str(out)]) == 0
        with out.open(newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 101
        data = {k: np.array([float(row[k]) for row in rows]) for k in rows[0]}
        r, fs, fp, fu, fk = (data[k] for k in ("r", "f_sym", "f_prod", "f_unknown", "f_known"))

        gaps = np.concatenate([fk - fu, fu - fp, fp - fs])
        assert gaps.min() >= -1e-10
        assert np.allclose([fs[-1], fp[-1], fu[-1], fk[-1]], 0.875, atol=1e-12, rtol=0)

        touching = np.abs(fp - fs) <= 1e-12
        assert touching[0] and touching[-1] and not touching[1:-1].any()

        assert abs(fk[0] - 0.85) <= 1e-9
        assert abs(f_known_optimal(6, 1e-12) - 0.85) <= 1e-9

        second = fu[2:] - 2 * fu[1:-1] + fu[:-2]
        bent = set(np.round(r[1:-1][np.abs(second) > 1e-9], 2))
        assert bent == {0.33, 0.34, 0.66, 0.67}
        first = _kink_location(r, fu, slice(0, 34), slice(34, 67))
        second_kink = _kink_location(r, fu, slice(34, 67), slice(67, 101))
        assert abs(first - 1 / 3) < 1e-9
        assert abs(second_kink - 2 / 3) < 1e-9
        info["detail"] = f"kinks at {first:.10f}, {second_kink:.10f}; min gap {gaps.min():.1e}"


def test_criterion_3_known_closed_form():
    with criterion(3, "known-structure closed form", 1.0) as info:
        worst = 0.0
        for n in range(2, 21):
            for r in np.linspace(0.0, 1.0, 51)[1:]:
                got = f_known(known_opt_state(n, r))
                worst = max(worst, abs(got - (n * n + r - 2) / ((n - 1) * (n + 2))))
        info["detail"] = f"max error {worst:.1e}"
        assert worst <= 1e-12


def test_criterion_4_symmetric_oracle():
    with criterion(4, "POVM oracle vs symmetric family", 60.0) as info:
        worst = 0.0
        for n in range(1, 7):
            for r in (0.0, 0.3, 0.7, 1.0):
                got = covariant_povm_fidelity(canonical_sym_state(n, r), direction=Z_AXIS)
                worst = max(worst, abs(got - f_sym(n, r)))
        info["detail"] = f"max error {worst:.1e}"
        assert worst <= 1e-7


def test_criterion_5_product_oracle():
    with criterion(5, "sector decomposition vs product family", 120.0) as info:
        worst = 0.0
        for n in range(2, 9):
            basis = build_coupled_basis(n)
            for r in (0.1, 0.5, 0.9):
                dec = sector_weights_of_product(n, r, basis)
                worst = max(worst, abs(f_known(dec.as_schur_state()) - f_prod(n, r)))
        info["detail"] = f"max error {worst:.1e}"
        assert worst <= 1e-9


def test_criterion_6_asymptotics():
    with criterion(6, "large-N asymptotics", 5.0) as info:
        n = 200
        known = [(1 - f_known_optimal(n, r)) * n for r in np.linspace(0.0, 1.0, 101)[1:]]
        unknown = [(1 - f_unknown(unknown_opt_state(n, r))) * r * n for r in (0.25, 0.5, 1.0)]
        info["detail"] = (
            f"known in [{min(known):.4f}, {max(known):.4f}], unknown in [{min(unknown):.4f}, {max(unknown):.4f}]"
        )
        assert all(0.95 <= v <= 1.05 for v in known)
        assert all(0.90 <= v <= 1.10 for v in unknown)


def test_criterion_7_symmetric_is_worst():
    with criterion(7, "symmetric state is worst", 60.0) as info:
        rng = np.random.default_rng(7)
        worst = -np.inf
        count = 0
        for n in range(3, 7):
            for r in (0.2, 0.5, 0.8):
                for _ in range(200):
                    state = random_state_with_length(n, r, rng)
                    worst = max(worst, f_sym(n, r) - f_known(state))
                    count += 1
        info["detail"] = f"{count} states, max(f_sym - f_known) {worst:.2e}"
        assert worst <= 1e-10


def _vertices(n):
    """Collinear unit-length building blocks: (two_j, sign)."""
    return [(tj, s) for tj in allowed_two_js(n) if tj > 0 for s in (1, -1)] + [(0, 1)]


def _as_vertex_weights(state, verts):
    index = {v: i for i, v in enumerate(verts)}
    x = np.zeros(len(verts))
    for p, sector in state.entries:
        if sector.two_j == 0:
            x[index[(0, 1)]] += p
            continue
        length = sector_reduced_density(sector).bloch.z
        x[index[(sector.two_j, 1)]] += p * (1 + length) / 2
        x[index[(sector.two_j, -1)]] += p * (1 - length) / 2
    return x


def _random_feasible_batch(r, b, allowed, rng):
    """Per row: random mixture of three vertex pairs straddling the target length.

    ``allowed`` is a boolean (rows, vertices) mask; each row must contain an
    allowed vertex on both sides of ``r``.
    """
    rows = np.arange(allowed.shape[0])[:, None]
    scores = rng.random(allowed.shape + (3,))
    above = np.where((allowed & (b >= r))[:, :, None], scores, -1.0).argmax(axis=1)
    below = np.where((allowed & (b <= r))[:, :, None], scores, -1.0).argmax(axis=1)
    hi, lo = b[above], b[below]
    same = hi == lo
    t = np.where(same, 1.0, (r - lo) / np.where(same, 1.0, hi - lo))
    w = rng.dirichlet(np.ones(3), size=allowed.shape[0])
    y = np.zeros(allowed.shape)
    np.add.at(y, (np.broadcast_to(rows, above.shape), above), w * t)
    np.add.at(y, (np.broadcast_to(rows, below.shape), below), w * (1 - t))
    return y


def test_criterion_8_unknown_local_optimality():
    with criterion(8, "local optimality of the unknown-structure state", 60.0) as info:
        rng = np.random.default_rng(8)
        batch = 1000
        worst = -np.inf
        trials = 0
        for n in range(2, 9):
            verts = _vertices(n)
            c = np.array([s * tj / (tj + 2) for tj, s in verts])
            b = np.array([s * tj / n for tj, s in verts])
            two_js = np.array([tj for tj, _ in verts])
            signs = np.array([s for _, s in verts])
            spins = sorted({tj for tj in two_js if tj > 0})
            for r in np.linspace(0.0, 1.0, 51)[1:]:
                state = unknown_opt_state(n, r)
                x_opt = _as_vertex_weights(state, verts)
                base = c @ x_opt
                assert base == pytest.approx(2 * f_unknown(state) - 1, abs=1e-12)
                # one orientation per sector; sectors used by the optimum keep theirs
                drawn = rng.choice([1, -1], size=(3 * batch, len(spins)))
                allowed = np.zeros((3 * batch, len(verts)), dtype=bool)
                allowed[:, two_js == 0] = True
                for col, tj in enumerate(spins):
                    used = {int(s) for s in signs[(two_js == tj) & (x_opt > 0)]}
                    for i in np.nonzero(two_js == tj)[0]:
                        allowed[:, i] = signs[i] in used if used else drawn[:, col] == signs[i]
                # rows without a vertex above r cannot reach the target
                allowed = allowed[(allowed & (b >= r)).any(axis=1)][:batch]
                assert len(allowed) == batch
                y = _random_feasible_batch(r, b, allowed, rng)
                step = 10 ** rng.uniform(-6, 0, size=(len(y), 1))
                x = (1 - step) * x_opt + step * y
                assert np.all(np.abs(x.sum(axis=1) - 1) < 1e-12)
                assert np.all(np.abs(x @ b - r) < 1e-12)
                assert x.min() >= 0
                worst = max(worst, float(np.max(x @ c - base)))
                trials += len(x)
        info["detail"] = f"{trials} perturbations, max improvement {worst:.1e}"
        assert trials == 7 * 50 * batch
        assert worst <= 1e-9


def test_criterion_9_structural_identities():
    with criterion(9, "structural identities", 60.0) as info:
        for n in range(1, 65):
            assert sum(sector_multiplicity(n, tj) * (tj + 1) for tj in allowed_two_js(n)) == 2**n
        rng = np.random.default_rng(9)
        ortho, perm = 0.0, 0.0
        for n in range(1, 9):
            basis = build_coupled_basis(n)
            cols = basis.columns
            ortho = max(ortho, float(np.max(np.abs(cols.T @ cols - np.eye(2**n)))))
            states = [canonical_sym_state(n, 0.6), random_state_with_length(n, 0.3, rng)]
            if n >= 2:
                states += [known_opt_state(n, 0.6), unknown_opt_state(n, 0.6)]
            for state in states:
                perm = max(perm, permutation_residual(schur_to_dense(state, basis)))
        info["detail"] = f"orthonormality {ortho:.1e}, permutation {perm:.1e}"
        assert ortho < 1e-10 and perm < 1e-10
