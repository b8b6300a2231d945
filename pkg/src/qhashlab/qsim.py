"""Minimal dense state-vector core: states, gates, sampling, equality tests.

Everything quantum in this package runs through here.  Amplitudes are
dense complex vectors over the 2^s basis states of an s-qubit register;
qubit q is the bit worth 2^q of the basis index.  Gates are 2x2
matrices applied to one qubit, optionally conditioned on the value of
other qubits.  Measurement is Born-rule sampling from an explicit,
replayable generator.

The SWAP test is simulated at the probability level: the analytic
accept probability 1/2 (1 + |<psi|phi>|^2) drives one Bernoulli draw
per shot.  This has exactly the statistics of materializing the
(2s+1)-qubit ancilla circuit at a fraction of the cost; the test suite
carries a full-circuit oracle for small registers that pins the two
paths together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

__all__ = [
    "MAX_QUBITS",
    "StateVector",
    "MeasurementRecord",
    "TestCounts",
    "make_rng",
    "basis_state",
    "inner_product",
    "measure_all",
    "sample_outcomes",
    "swap_test_accept_probability",
    "swap_test",
    "repeated_test",
    "hadamard_matrix",
    "ry_matrix",
    "apply_single_qubit",
    "apply_controlled_single_qubit",
    "dump_state",
    "load_state",
]

# Dense storage: 2^24 amplitudes = 256 MiB of complex128 is the ceiling
# we are willing to allocate.  Hash states here need s <= 10.
MAX_QUBITS = 24

NORM_TOL = 1e-10


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based Philox generator: replayable and cheaply splittable."""
    return np.random.Generator(np.random.Philox(seed))


@dataclass(frozen=True)
class StateVector:
    """Immutable unit vector over the 2^num_qubits basis states."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(
                f"num_qubits must be in [1, {MAX_QUBITS}], got {self.num_qubits}"
            )
        amp = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amp.shape[0] != 1 << self.num_qubits:
            raise ValueError(
                f"expected {1 << self.num_qubits} amplitudes for "
                f"{self.num_qubits} qubits, got {amp.shape[0]}"
            )
        norm_sq = float(np.vdot(amp, amp).real)
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(f"state norm^2 = {norm_sq!r} is not 1 within {NORM_TOL}")
        amp.flags.writeable = False
        object.__setattr__(self, "amplitudes", amp)

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits


class MeasurementRecord(NamedTuple):
    """One full-register measurement: the outcome and its Born probability."""

    outcome: int
    probability: float


class TestCounts(NamedTuple):
    """Accept/reject tally of a repeated equality test."""

    accepted: int
    rejected: int

    @property
    def shots(self) -> int:
        return self.accepted + self.rejected

    @property
    def accept_rate(self) -> float:
        return self.accepted / self.shots


def basis_state(num_qubits: int, index: int) -> StateVector:
    dim = 1 << num_qubits
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range [0, {dim - 1}]")
    amp = np.zeros(dim, dtype=np.complex128)
    amp[index] = 1.0
    return StateVector(num_qubits, amp)


def _check_same_register(psi: StateVector, phi: StateVector) -> None:
    if psi.num_qubits != phi.num_qubits:
        raise ValueError(
            f"dimension mismatch: {psi.num_qubits} vs {phi.num_qubits} qubits"
        )


def inner_product(psi: StateVector, phi: StateVector) -> complex:
    """<psi|phi>, conjugate-linear in the first argument."""
    _check_same_register(psi, phi)
    return complex(np.vdot(psi.amplitudes, phi.amplitudes))


def _outcome_probabilities(psi: StateVector) -> np.ndarray:
    return np.abs(psi.amplitudes) ** 2


def sample_outcomes(psi: StateVector, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Sample basis-state outcomes for repeated full-register measurements."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    probs = _outcome_probabilities(psi)
    edges = np.cumsum(probs)
    # norm is 1 within 1e-10; pin the last edge so a draw near 1 cannot
    # fall off the table.
    edges[-1] = 1.0
    draws = rng.random(shots)
    return np.searchsorted(edges, draws, side="right").astype(np.int64)


def measure_all(psi: StateVector, rng: np.random.Generator) -> MeasurementRecord:
    """Measure every qubit; the record carries the sampled outcome's probability."""
    outcome = int(sample_outcomes(psi, 1, rng)[0])
    return MeasurementRecord(outcome, float(_outcome_probabilities(psi)[outcome]))


def swap_test_accept_probability(psi: StateVector, phi: StateVector) -> float:
    """1/2 (1 + |<psi|phi>|^2): the chance the SWAP test reports "equal".

    The overlap is normalized by both state norms, so identical inputs
    give exactly 1.0 even when their stored norm is off by the admitted
    1e-10.
    """
    _check_same_register(psi, phi)
    ip_sq = abs(inner_product(psi, phi)) ** 2
    norm_sq = float(np.vdot(psi.amplitudes, psi.amplitudes).real) * float(
        np.vdot(phi.amplitudes, phi.amplitudes).real
    )
    return 0.5 * (1.0 + min(1.0, ip_sq / norm_sq))


def swap_test(
    psi: StateVector, phi: StateVector, shots: int, rng: np.random.Generator
) -> TestCounts:
    """Run the ancilla test for a number of shots; accept = ancilla read 0.

    Simulated at the probability level: each shot is a Bernoulli draw at
    the analytic accept probability.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    p = swap_test_accept_probability(psi, phi)
    accepted = int(np.count_nonzero(rng.random(shots) < p))
    return TestCounts(accepted=accepted, rejected=shots - accepted)


def repeated_test(single_test_accept_probability: float, k: int) -> float:
    """Probability that k independent repetitions of a test all accept: p^k."""
    p = single_test_accept_probability
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {p!r}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return p**k


def hadamard_matrix() -> np.ndarray:
    return np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / math.sqrt(2.0)


def ry_matrix(theta: float) -> np.ndarray:
    """Rotation with R(theta)|0> = cos(theta/2)|0> + sin(theta/2)|1>."""
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def _apply_matrix_pairs(
    amp: np.ndarray, matrix: np.ndarray, i0: np.ndarray, i1: np.ndarray
) -> np.ndarray:
    out = amp.copy()
    a0 = amp[i0]
    a1 = amp[i1]
    out[i0] = matrix[0, 0] * a0 + matrix[0, 1] * a1
    out[i1] = matrix[1, 0] * a0 + matrix[1, 1] * a1
    return out


def apply_single_qubit(psi: StateVector, qubit: int, matrix: np.ndarray) -> StateVector:
    """Apply a 2x2 matrix to one qubit; returns a new state."""
    if not 0 <= qubit < psi.num_qubits:
        raise ValueError(f"qubit {qubit} out of range [0, {psi.num_qubits - 1}]")
    idx = np.arange(psi.dim, dtype=np.int64)
    i0 = idx[(idx >> qubit) & 1 == 0]
    return StateVector(
        psi.num_qubits,
        _apply_matrix_pairs(psi.amplitudes, matrix, i0, i0 | (1 << qubit)),
    )


def apply_controlled_single_qubit(
    psi: StateVector,
    qubit: int,
    matrix: np.ndarray,
    control_mask: int,
    control_value: int,
) -> StateVector:
    """Apply a 2x2 matrix to one qubit where (index & mask) == value."""
    if not 0 <= qubit < psi.num_qubits:
        raise ValueError(f"qubit {qubit} out of range [0, {psi.num_qubits - 1}]")
    if control_mask & (1 << qubit):
        raise ValueError("target qubit cannot be part of the control mask")
    if control_value & ~control_mask:
        raise ValueError("control value sets bits outside the control mask")
    idx = np.arange(psi.dim, dtype=np.int64)
    i0 = idx[((idx & control_mask) == control_value) & ((idx >> qubit) & 1 == 0)]
    return StateVector(
        psi.num_qubits,
        _apply_matrix_pairs(psi.amplitudes, matrix, i0, i0 | (1 << qubit)),
    )


def dump_state(psi: StateVector, path: str | Path) -> None:
    """Write one line per basis index: ``<index> <re> <im>``.

    Floats are rendered with repr, so a dump/load round trip is exact.
    """
    lines = [
        f"{i} {float(amp.real)!r} {float(amp.imag)!r}"
        for i, amp in enumerate(psi.amplitudes)
    ]
    Path(path).write_text("\n".join(lines) + "\n")


def load_state(path: str | Path) -> StateVector:
    path = Path(path)
    entries: dict[int, complex] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ValueError(
                f"{path}:{lineno}: expected '<index> <re> <im>', got {raw!r}"
            )
        try:
            index = int(fields[0])
            value = complex(float(fields[1]), float(fields[2]))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: malformed amplitude line {raw!r}") from None
        if index in entries:
            raise ValueError(f"{path}:{lineno}: duplicate basis index {index}")
        entries[index] = value
    dim = len(entries)
    if dim < 2 or dim & (dim - 1):
        raise ValueError(f"{path}: {dim} amplitude lines is not a power of two >= 2")
    num_qubits = dim.bit_length() - 1
    amp = np.zeros(dim, dtype=np.complex128)
    for index, value in entries.items():
        if not 0 <= index < dim:
            raise ValueError(f"{path}: basis index {index} out of range [0, {dim - 1}]")
        amp[index] = value
    return StateVector(num_qubits, amp)
