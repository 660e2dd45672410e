"""Spin sectors, Schur-parameterized states and single-particle reductions.

Half-integer spins are carried as doubled integers: a sector with total spin
``j`` is stored as ``two_j = 2 j`` and magnetic labels as ``two_m = 2 m``.
Sector matrices are indexed with ``m`` running downwards, so row/column ``i``
corresponds to ``m = j - i``.  ``lam[i, k]`` is the ordinary matrix element
``<j, m_i| rho_j |j, m_k>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np
from scipy.linalg import expm

from corrcopies.errors import DomainError

WEIGHT_TOL = 1e-12
TRACE_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_FLOOR = -1e-10


class BlochVector(NamedTuple):
    x: float
    y: float
    z: float

    @property
    def length(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def dot(self, other: Iterable[float]) -> float:
        ox, oy, oz = other
        return self.x * ox + self.y * oy + self.z * oz

    @classmethod
    def from_array(cls, v) -> "BlochVector":
        v = np.asarray(v, dtype=float)
        return cls(float(v[0]), float(v[1]), float(v[2]))


Z_AXIS = BlochVector(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class SpinSector:
    """Total-spin sector ``j = two_j / 2`` of ``n`` qubits."""

    n: int
    two_j: int

    def __post_init__(self):
        check_sector(self.n, self.two_j)

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def dimension(self) -> int:
        return self.two_j + 1

    @property
    def multiplicity(self) -> int:
        return sector_multiplicity(self.n, self.two_j)


def check_sector(n: int, two_j: int) -> None:
    if int(n) != n or n < 1:
        raise DomainError(f"qubit count must be a positive integer, got {n}")
    if int(two_j) != two_j or two_j < 0 or two_j > n or (n - two_j) % 2:
        raise DomainError(f"two_j={two_j} is not a valid sector for n={n}")


def allowed_two_js(n: int) -> list[int]:
    """Doubled spins ``n mod 2, n mod 2 + 2, ..., n`` in increasing order."""
    if int(n) != n or n < 1:
        raise DomainError(f"qubit count must be a positive integer, got {n}")
    return list(range(n % 2, n + 1, 2))


def sector_multiplicity(n: int, two_j: int) -> int:
    """Number of copies ``d_j`` of the spin-j irrep inside ``n`` qubits.

    Exact integer arithmetic, ``C(n, n/2 - j) - C(n, n/2 - j - 1)``.
    """
    check_sector(n, two_j)
    k = (n - two_j) // 2
    if k == 0:
        return 1
    return math.comb(n, k) - math.comb(n, k - 1)


def spin_matrices(two_j: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spin operators (Jx, Jy, Jz) in the basis m = j, j-1, ..., -j."""
    j = two_j / 2
    m = j - np.arange(two_j + 1)
    # J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>, and |m+1> sits one row above |m>
    raise_amp = np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1))
    jp = np.diag(raise_amp, k=1).astype(complex)
    jm = jp.conj().T
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    jz = np.diag(m).astype(complex)
    return jx, jy, jz


def rotation_matrix(two_j: int, axis, angle: float) -> np.ndarray:
    """Spin-j representation of a rotation by ``angle`` about ``axis``."""
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    jx, jy, jz = spin_matrices(two_j)
    gen = axis[0] * jx + axis[1] * jy + axis[2] * jz
    return expm(-1j * angle * gen)


def rotation_from_z(two_j: int, direction) -> np.ndarray:
    """Spin-j rotation carrying the +z axis onto ``direction``."""
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    cross = np.array([-d[1], d[0], 0.0])
    s = np.linalg.norm(cross)
    if s < 1e-15:
        if d[2] > 0:
            return np.eye(two_j + 1, dtype=complex)
        return rotation_matrix(two_j, (1.0, 0.0, 0.0), math.pi)
    angle = math.atan2(s, d[2])
    return rotation_matrix(two_j, cross, angle)


@dataclass(frozen=True, eq=False)
class SectorState:
    """Sector matrix lambda of a spin-j block (trace one, PSD)."""

    sector: SpinSector
    lam: np.ndarray = field(repr=False)

    def __post_init__(self):
        lam = np.array(self.lam, dtype=complex)
        dim = self.sector.dimension
        if lam.shape != (dim, dim):
            raise DomainError(
                f"sector two_j={self.sector.two_j} needs a {dim}x{dim} matrix, got {lam.shape}"
            )
        lam.setflags(write=False)
        object.__setattr__(self, "lam", lam)

    @property
    def two_j(self) -> int:
        return self.sector.two_j

    @classmethod
    def polarized(cls, n: int, two_j: int, direction=Z_AXIS, sign: int = 1) -> "SectorState":
        """Pure extremal state: ``m = +j`` along ``direction`` (``m = -j`` if sign < 0)."""
        sector = SpinSector(n, two_j)
        lam = np.zeros((two_j + 1, two_j + 1), dtype=complex)
        idx = 0 if sign > 0 else two_j
        lam[idx, idx] = 1.0
        return cls(sector, _rotate(lam, two_j, direction))

    @classmethod
    def extremal_mixture(cls, n: int, two_j: int, q: float, direction=Z_AXIS) -> "SectorState":
        """``q |j,j><j,j| + (1-q) |j,-j><j,-j|`` quantized along ``direction``."""
        sector = SpinSector(n, two_j)
        lam = np.zeros((two_j + 1, two_j + 1), dtype=complex)
        lam[0, 0] += q
        lam[two_j, two_j] += 1.0 - q
        return cls(sector, _rotate(lam, two_j, direction))

    @classmethod
    def maximally_mixed(cls, n: int, two_j: int) -> "SectorState":
        return cls(SpinSector(n, two_j), np.eye(two_j + 1) / (two_j + 1))


def _rotate(lam: np.ndarray, two_j: int, direction) -> np.ndarray:
    d = np.asarray(direction, dtype=float)
    if two_j == 0 or (d[0] == 0.0 and d[1] == 0.0 and d[2] > 0):
        return lam
    rot = rotation_from_z(two_j, d)
    return rot @ lam @ rot.conj().T


@dataclass(frozen=True, eq=False)
class SchurState:
    """Permutation-invariant N-qubit state as sector weights and sector matrices.

    Only the first multiplicity copy of each sector is stored; sectors that
    do not appear carry zero weight.
    """

    n: int
    entries: tuple[tuple[float, SectorState], ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple((float(p), s) for p, s in self.entries))

    @classmethod
    def from_sectors(cls, n: int, sectors: dict[int, tuple[float, np.ndarray]]) -> "SchurState":
        entries = []
        for two_j in sorted(sectors, reverse=True):
            p, lam = sectors[two_j]
            entries.append((p, SectorState(SpinSector(n, two_j), lam)))
        return cls(n, tuple(entries))

    def weights(self) -> dict[int, float]:
        out: dict[int, float] = {}
        for p, s in self.entries:
            out[s.two_j] = out.get(s.two_j, 0.0) + p
        return out

    def sector(self, two_j: int) -> SectorState | None:
        for _, s in self.entries:
            if s.two_j == two_j:
                return s
        return None


class SectorReduction(NamedTuple):
    a: float
    b: float
    c: complex
    bloch: BlochVector

    @property
    def length(self) -> float:
        return self.bloch.length


def sector_reduced_density(state: SectorState) -> SectorReduction:
    """Single-qubit marginal ``[[A, C], [C*, B]]`` of a spin-j sector state.

    The Bloch length is ``sqrt((A - B)^2 + 4 |C|^2)``, the norm of the
    component vector ``(2 Re C, -2 Im C, A - B)``.
    """
    two_j = state.two_j
    if two_j == 0:
        return SectorReduction(0.5, 0.5, 0j, BlochVector(0.0, 0.0, 0.0))
    lam = state.lam
    diag = np.real(np.diag(lam))
    two_m = two_j - 2 * np.arange(two_j + 1)
    a = float(np.sum((two_j + two_m) / (2 * two_j) * diag))
    b = float(np.sum((two_j - two_m) / (2 * two_j) * diag))
    # pairs (m, m-1) for m = j .. -j+1 are (row i, col i+1)
    tm = two_m[:-1]
    amp = np.sqrt((two_j + tm) * (two_j - tm + 2)) / 2
    c = complex(np.sum(amp * np.diagonal(lam, offset=1)) / two_j)
    bloch = BlochVector(2 * c.real, -2 * c.imag, a - b)
    return SectorReduction(a, b, c, bloch)


def reduce_full(state: SchurState) -> BlochVector:
    """Local Bloch vector ``(2/N) sum_j p_j j r_j`` of a Schur state."""
    acc = np.zeros(3)
    for p, s in state.entries:
        if s.two_j == 0 or p == 0.0:
            continue
        acc += p * (s.two_j / 2) * sector_reduced_density(s).bloch.as_array()
    return BlochVector.from_array(2.0 / state.n * acc)


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_schur_state(state: SchurState) -> ValidationReport:
    report = ValidationReport()
    seen: set[int] = set()
    total = 0.0
    for p, s in state.entries:
        total += p
        label = f"sector two_j={s.two_j}"
        if s.sector.n != state.n:
            report.violations.append(f"{label} belongs to n={s.sector.n}, state has n={state.n}")
        if s.two_j in seen:
            report.violations.append(f"{label} appears more than once")
        seen.add(s.two_j)
        if p < -WEIGHT_TOL:
            report.violations.append(f"{label} has negative weight {p:g}")
        lam = s.lam
        if np.max(np.abs(lam - lam.conj().T)) > HERMITIAN_TOL:
            report.violations.append(f"{label} not Hermitian")
        tr = np.trace(lam)
        if abs(tr - 1.0) > TRACE_TOL:
            report.violations.append(f"{label} trace {tr.real:g} != 1")
        evals = np.linalg.eigvalsh((lam + lam.conj().T) / 2)
        if evals[0] < PSD_FLOOR:
            report.violations.append(f"{label} not PSD (min eigenvalue {evals[0]:g})")
    if abs(total - 1.0) > WEIGHT_TOL:
        report.violations.append(f"weights sum {total:g} ≠ 1")
    return report


def mix_schur_states(first: SchurState, second: SchurState, t: float) -> SchurState:
    """Convex mixture ``(1 - t) first + t second`` of two Schur states."""
    if first.n != second.n:
        raise DomainError("cannot mix states of different qubit counts")
    acc: dict[int, tuple[float, np.ndarray]] = {}
    for weight, state in ((1.0 - t, first), (t, second)):
        for p, s in state.entries:
            w = weight * p
            if w == 0.0:
                continue
            prev_w, prev_lam = acc.get(s.two_j, (0.0, 0.0))
            acc[s.two_j] = (prev_w + w, prev_lam + w * s.lam)
    sectors = {tj: (w, lam / w) for tj, (w, lam) in acc.items()}
    return SchurState.from_sectors(first.n, sectors)
