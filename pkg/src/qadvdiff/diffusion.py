"""Diffusion kernels: damping block encodings of e^{-beta j^2} mode decay.

Each spectral damping factor e^{-gamma} is realised by a controlled Y-rotation
onto an ancilla that is postselected on |0>.  The squared mode index expands
over register bits as j^2 = sum_r 4^r q_r + sum_{r<s} 2^{r+s+1} q_r q_s, so a
product of singly- and doubly-controlled damping gates covers the whole
spectrum.  On a periodic axis the signed upper half of the spectrum is folded
onto the lower half by a CNOT fan before damping and unfolded afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .state import (
    Circuit,
    QuantumState,
    apply_circuit,
    cnot,
    damping,
    damping_matrix,
    remap_circuit,
)
from .transforms import BoundaryKind, build_qft_circuit


@dataclass(frozen=True)
class DampingTerm:
    """One damping factor e^{-gamma} applied where all controls are 1."""

    gamma: float
    controls: tuple[int, ...]


@dataclass(frozen=True)
class DiffusionParams:
    """Mode-decay strength for one axis over one splitting interval."""

    n_qubits: int
    beta: float
    kind: BoundaryKind

    @classmethod
    def from_physical(
        cls, n_qubits: int, diffusivity: float, dt: float, length: float,
        kind: BoundaryKind,
    ) -> "DiffusionParams":
        """beta = D*dt*(2*pi/L)^2 on periodic axes, D*dt*(pi/L)^2 on walls."""
        scale = 2.0 * np.pi if kind is BoundaryKind.PERIODIC else np.pi
        return cls(n_qubits, diffusivity * dt * (scale / length) ** 2, kind)


def damping_unitary(gamma: float) -> np.ndarray:
    """2x2 block encoding of the factor e^{-gamma} (rejects gamma < 0)."""
    return damping_matrix(gamma)


def periodic_damping_terms(n_qubits: int, beta: float) -> list[DampingTerm]:
    """Damping factors for the folded signed spectrum of a periodic axis.

    Shared terms cover j^2 on the lower half and the first two pieces of
    (j'+1)^2 on the folded upper half; the extra terms controlled on the top
    qubit supply the remaining 2j'+1.
    """
    top = n_qubits - 1
    terms = [DampingTerm(beta * (1 << (2 * r)), (r,)) for r in range(top)]
    terms += [
        DampingTerm(beta * (1 << (1 + r + s)), (r, s))
        for r in range(top)
        for s in range(r + 1, top)
    ]
    terms += [DampingTerm(beta * (1 << (r + 1)), (r, top)) for r in range(top)]
    terms.append(DampingTerm(beta, (top,)))
    return terms


def halfspectrum_damping_terms(
    n_qubits: int, beta: float, kind: BoundaryKind
) -> list[DampingTerm]:
    """Damping factors for cosine (j^2) or sine ((j+1)^2) mode indices."""
    terms = [DampingTerm(beta * (1 << (2 * r)), (r,)) for r in range(n_qubits)]
    terms += [
        DampingTerm(beta * (1 << (1 + r + s)), (r, s))
        for r in range(n_qubits)
        for s in range(r + 1, n_qubits)
    ]
    if kind is BoundaryKind.DIRICHLET:
        terms += [DampingTerm(beta * (1 << (r + 1)), (r,)) for r in range(n_qubits)]
        terms.append(DampingTerm(beta, ()))
    return terms


def _damping_circuit(n_qubits: int, terms, mirror: bool) -> Circuit:
    circuit = Circuit(n_qubits + 1, ancilla_indices=frozenset({n_qubits}))
    top = n_qubits - 1
    if mirror:
        for r in range(top):
            circuit.add(cnot(top, r))
    for term in terms:
        circuit.add(
            damping(n_qubits, term.gamma, tuple((q, 1) for q in term.controls))
        )
    if mirror:
        for r in range(top - 1, -1, -1):
            circuit.add(cnot(top, r))
    return circuit


def build_periodic_diffusion(n_qubits: int, beta: float) -> Circuit:
    """Diffusion on a periodic axis whose register is in the Fourier basis.

    Returns a circuit on n_qubits + 1 qubits; the last qubit is the damping
    ancilla.  Mode j decays by e^{-beta*j^2} below N/2 and e^{-beta*(j-N)^2}
    above, via the CNOT mirror fold.
    """
    if n_qubits < 2:
        raise ValueError(f"periodic diffusion needs >= 2 qubits, got {n_qubits}")
    if beta < 0.0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    return _damping_circuit(n_qubits, periodic_damping_terms(n_qubits, beta), True)


def build_halfspectrum_diffusion(
    n_qubits: int, beta: float, kind: BoundaryKind
) -> Circuit:
    """Diffusion on a wall-bounded axis in its cosine or sine mode basis.

    Neumann (cosine) modes decay by e^{-beta*j^2}, Dirichlet (sine) modes by
    e^{-beta*(j+1)^2}.  The last qubit of the returned circuit is the ancilla.
    """
    if n_qubits < 1:
        raise ValueError(f"need at least one qubit, got {n_qubits}")
    if beta < 0.0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    if kind is BoundaryKind.PERIODIC:
        raise ValueError("use build_periodic_diffusion for periodic axes")
    terms = halfspectrum_damping_terms(n_qubits, beta, kind)
    return _damping_circuit(n_qubits, terms, False)


def worst_case_success(state: QuantumState) -> float:
    """Success probability floor N*|mean(amplitudes)|^2 for long diffusion times.

    Diffusion drives any profile toward its mean, so only the mean mode
    survives; a uniform state gives 1, a zero-mean state gives 0.
    """
    amps = state.amplitudes
    total = float(np.sum(np.abs(amps) ** 2))
    if total == 0.0:
        raise ValueError("state carries no amplitude")
    return float(amps.size * np.abs(np.mean(amps)) ** 2 / total)


def prepare_gaussian_by_diffusion(n_qubits: int, diffusion_time: float) -> QuantumState:
    """Diffuse the centered basis state into a near-Gaussian profile (L = 1).

    Runs the full pipeline on a unit-length periodic axis: grid-to-mode
    transform, periodic diffusion with beta = D*t*(2*pi)^2, mode-to-grid
    transform.  The returned state has the ancilla projected out and carries
    the postselection probability in ``success_prob``.
    """
    if n_qubits < 2:
        raise ValueError(f"need at least 2 qubits, got {n_qubits}")
    if diffusion_time < 0.0:
        raise ValueError(f"diffusion time must be >= 0, got {diffusion_time}")
    n = 1 << n_qubits
    amps = np.zeros(2 * n, dtype=np.complex128)
    amps[n // 2] = 1.0
    state = QuantumState(n_qubits + 1, amps)
    ident = {q: q for q in range(n_qubits)}
    analysis = remap_circuit(build_qft_circuit(n_qubits, inverse=True), ident,
                             n_qubits + 1)
    synthesis = remap_circuit(build_qft_circuit(n_qubits), ident, n_qubits + 1)
    beta = diffusion_time * (2.0 * np.pi) ** 2
    state = apply_circuit(state, analysis)
    state = apply_circuit(state, build_periodic_diffusion(n_qubits, beta))
    state = apply_circuit(state, synthesis)
    main = state.amplitudes[:n].copy()
    # ancilla is |0> after projection, so the upper block is empty
    return QuantumState(n_qubits, main, state.success_prob)
