"""End-to-end demonstration circuit sized for real quantum hardware.

The circuit prepares the three-mode Fourier-space state with amplitudes
sqrt(2/3), sqrt(1/6), sqrt(1/6), advects it by a quarter pass (alpha = -pi/2),
applies one periodic diffusion step that halves the j = +-1 modes
(beta = ln 2), and returns to physical space with the swap-complete synthesis
QFT.  Unlike the simulation path, every damping factor gets its own fresh
ancilla so the whole sequence can run before any measurement; postselecting
all ancillas on |0> succeeds with probability 3/4.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .advection import build_uniform_advection
from .diffusion import periodic_damping_terms
from .state import (
    Circuit,
    QuantumState,
    apply_circuit,
    build_fourier_initial_state,
    cnot,
    damping,
    max_qubits,
    new_state,
    sample_counts,
)
from .transforms import build_qft_circuit

DEMO_ALPHA = -np.pi / 2.0
DEMO_BETA = float(np.log(2.0))


def demo_ancilla_count(n_qubits: int) -> int:
    """Fresh ancillas needed by one periodic diffusion block: one per factor."""
    if n_qubits < 2:
        raise ValueError(f"demo register needs >= 2 qubits, got {n_qubits}")
    return len(periodic_damping_terms(n_qubits, 1.0))


def build_demo_circuit(
    n_qubits: int, alpha: float = DEMO_ALPHA, beta: float = DEMO_BETA
) -> Circuit:
    """Full demo circuit on n_qubits + demo_ancilla_count(n_qubits) qubits.

    Main register holds qubits 0..n-1 (Fourier space until the closing QFT);
    ancillas follow in damping-term order.
    """
    n_a = demo_ancilla_count(n_qubits)
    total = n_qubits + n_a
    if total > max_qubits():
        raise ValueError(
            f"demo needs {total} qubits ({n_qubits} main + {n_a} ancillas), "
            f"limit is {max_qubits()}"
        )
    ancillas = frozenset(range(n_qubits, total))
    circuit = Circuit(total, ancilla_indices=ancillas)
    circuit.extend(build_fourier_initial_state(n_qubits).gates)
    circuit.extend(build_uniform_advection(n_qubits, alpha).gates)
    top = n_qubits - 1
    for r in range(top):
        circuit.add(cnot(top, r))
    for i, term in enumerate(periodic_damping_terms(n_qubits, beta)):
        controls = tuple((q, 1) for q in term.controls)
        circuit.add(damping(n_qubits + i, term.gamma, controls))
    for r in range(top - 1, -1, -1):
        circuit.add(cnot(top, r))
    circuit.extend(build_qft_circuit(n_qubits).gates)
    return circuit


@dataclass
class DemoResult:
    """Ideal and sampled views of one demo execution."""

    n_qubits: int
    circuit: Circuit
    ideal_amplitudes: np.ndarray
    success_prob: float
    sampled_amplitudes: np.ndarray
    lo_3sigma: np.ndarray
    hi_3sigma: np.ndarray
    inside_band_fraction: float


def run_demo(
    n_qubits: int,
    shots: int,
    seed: int,
    alpha: float = DEMO_ALPHA,
    beta: float = DEMO_BETA,
) -> DemoResult:
    """Simulate the demo circuit and reconstruct it from sampled shots.

    The joint register is sampled without projecting the ancillas, mimicking
    a hardware run that measures every qubit; shots with any ancilla reading 1
    are discarded by keeping only the first 2^n joint indices.  Reported
    amplitudes are therefore unnormalized (their squared norm is the success
    probability) and the 3-sigma bands use the per-bin binomial deviation
    sqrt(p(1-p)/shots).
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    circuit = build_demo_circuit(n_qubits, alpha, beta)
    joint = apply_circuit(new_state(circuit.n_qubits), circuit, project_ancillas=False)
    dim = 1 << n_qubits
    block = joint.amplitudes[:dim]
    if np.max(np.abs(block.imag)) > 1e-10:
        raise RuntimeError("demo block should be real up to roundoff")
    ideal = block.real.copy()
    success = float(np.sum(ideal**2))
    counts = sample_counts(joint, shots, seed)[:dim]
    sampled = np.sqrt(counts / shots)
    p = ideal**2
    sigma = np.sqrt(p * (1.0 - p) / shots)
    lo = np.sqrt(np.clip(p - 3.0 * sigma, 0.0, None))
    hi = np.sqrt(p + 3.0 * sigma)
    inside = float(np.mean((sampled >= lo) & (sampled <= hi)))
    return DemoResult(
        n_qubits=n_qubits,
        circuit=circuit,
        ideal_amplitudes=ideal,
        success_prob=success,
        sampled_amplitudes=sampled,
        lo_3sigma=lo,
        hi_3sigma=hi,
        inside_band_fraction=inside,
    )


def ideal_demo_state(n_qubits: int, alpha: float = DEMO_ALPHA,
                     beta: float = DEMO_BETA) -> QuantumState:
    """Postselected main-register state, via the fresh-ancilla circuit."""
    circuit = build_demo_circuit(n_qubits, alpha, beta)
    joint = apply_circuit(new_state(circuit.n_qubits), circuit)
    dim = 1 << n_qubits
    return QuantumState(n_qubits, joint.amplitudes[:dim].copy(), joint.success_prob)


def format_circuit_listing(circuit: Circuit) -> str:
    """Render a circuit as stable text, one gate per line.

    Grammar: ``GATE <kind> <target> [<qubit>:<value> ...] <param>`` with the
    swap partner appearing as ``partner=<qubit>`` between target and controls.
    """
    lines = [f"QUBITS {circuit.n_qubits}"]
    if circuit.ancilla_indices:
        anc = " ".join(str(q) for q in sorted(circuit.ancilla_indices))
        lines.append(f"ANCILLAS {anc}")
    for gate in circuit.gates:
        fields = ["GATE", gate.kind.value, str(gate.target)]
        if gate.partner is not None:
            fields.append(f"partner={gate.partner}")
        controls = " ".join(f"{q}:{v}" for q, v in gate.controls)
        fields.append(f"[{controls}]")
        fields.append(f"{gate.param:.17g}")
        lines.append(" ".join(fields))
    return "\n".join(lines) + "\n"
