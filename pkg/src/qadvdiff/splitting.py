"""Operator-splitting driver joining the advection and diffusion kernels.

A scenario evolves a scalar field on a 2^n_x x 2^n_y grid: advection by a
polynomial shear profile plus isotropic diffusion, split per step into the
advection operator (diagonal after the streamwise Fourier transform) and the
two one-axis diffusion operators (diagonal in their mode bases, mutually
commuting).  Lie-Trotter applies advection then diffusion once per step;
Strang symmetrises with half advection on both sides.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .advection import (
    VelocityProfile,
    build_shear_advection,
    count_controlled_gates,
    count_two_qubit_gates,
)
from .diffusion import (
    DiffusionParams,
    build_halfspectrum_diffusion,
    build_periodic_diffusion,
)
from .oracles import profile_row_velocities
from .state import (
    Circuit,
    QuantumState,
    apply_circuit,
    remap_circuit,
)
from .transforms import (
    BoundaryKind,
    apply_qct,
    apply_qst,
    build_qft_circuit,
    wavenumbers,
)

_SPLITTINGS = ("trotter", "strang")


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one transport scenario.

    ``n_x``/``n_y`` are qubits per axis (n_y = 0 for a one-dimensional run);
    lengths and times are in the units set by ``length`` and
    ``velocity_scale``.  ``n_steps`` splitting steps cover ``t_final``.
    """

    n_x: int
    n_y: int
    profile: VelocityProfile
    diffusivity: float
    t_final: float
    n_steps: int = 1
    length: float = 1.0
    velocity_scale: float = 1.0
    splitting: str = "trotter"
    bc_x: BoundaryKind = BoundaryKind.PERIODIC
    bc_y: BoundaryKind = BoundaryKind.NEUMANN
    checkpoints: int = 10
    merge_strang: bool = False

    def __post_init__(self) -> None:
        if self.n_x < 2:
            raise ValueError(f"streamwise register needs >= 2 qubits, got {self.n_x}")
        if self.n_y < 0:
            raise ValueError(f"wall-normal register size must be >= 0, got {self.n_y}")
        if self.bc_x is not BoundaryKind.PERIODIC:
            raise ValueError(
                "streamwise axis must be periodic; the advection kernel acts in "
                "the Fourier basis"
            )
        if self.splitting not in _SPLITTINGS:
            raise ValueError(
                f"splitting must be one of {_SPLITTINGS}, got {self.splitting!r}"
            )
        if self.diffusivity < 0.0:
            raise ValueError(f"diffusivity must be >= 0, got {self.diffusivity}")
        if self.t_final < 0.0:
            raise ValueError(f"t_final must be >= 0, got {self.t_final}")
        if self.n_steps < 1:
            raise ValueError(f"n_steps must be >= 1, got {self.n_steps}")
        if self.length <= 0.0:
            raise ValueError(f"length must be positive, got {self.length}")
        if self.checkpoints < 1:
            raise ValueError(f"checkpoints must be >= 1, got {self.checkpoints}")
        if self.n_y == 0 and self.profile.order > 0:
            raise ValueError("a sheared profile needs a wall-normal register")
        if self.merge_strang and self.splitting != "strang":
            raise ValueError("merge_strang only applies to Strang splitting")

    @property
    def dt(self) -> float:
        return self.t_final / self.n_steps

    @property
    def nx_points(self) -> int:
        return 1 << self.n_x

    @property
    def ny_points(self) -> int:
        return (1 << self.n_y) if self.n_y else 1

    def peclet(self) -> float:
        if self.diffusivity == 0.0:
            return float("inf")
        return abs(self.velocity_scale) * self.length / self.diffusivity

    def fourier(self) -> float:
        return self.diffusivity * self.t_final / self.length**2


def x_coordinates(config: ScenarioConfig) -> np.ndarray:
    """Streamwise nodes j*L/N (periodic, endpoint excluded)."""
    n = config.nx_points
    return np.arange(n) * config.length / n


def y_coordinates(config: ScenarioConfig) -> np.ndarray | None:
    """Wall-normal nodes q*L/(N-1), both endpoints included; None when 1D."""
    if config.n_y == 0:
        return None
    n = config.ny_points
    return np.arange(n) * config.length / (n - 1)


def initial_scalar_field(config: ScenarioConfig, kind: str = "gaussian") -> np.ndarray:
    """Canonical initial conditions as a flat main-register vector.

    ``gaussian`` is the pulse exp(-100 (x - 1/2)^2) wrapped around the
    periodic cell, constant across the wall normal; ``uniform`` is all ones;
    ``basis:<k>`` is a single basis state.
    """
    main_dim = config.nx_points * config.ny_points
    if kind.startswith("basis:"):
        index = int(kind.split(":", 1)[1])
        if not 0 <= index < main_dim:
            raise ValueError(f"basis index {index} outside grid of {main_dim}")
        vec = np.zeros(main_dim)
        vec[index] = 1.0
        return vec
    x = x_coordinates(config)
    if kind == "gaussian":
        # The +-1 images reach e^-25 at the cell edges; omitting them leaves
        # the samples inconsistent with the periodic analytic solution.
        column = sum(np.exp(-100.0 * (x - 0.5 - m) ** 2) for m in (-1, 0, 1))
    elif kind == "uniform":
        column = np.ones(config.nx_points)
    else:
        raise ValueError(f"unknown initial condition {kind!r}")
    if config.n_y == 0:
        return column
    return np.tile(column[:, None], (1, config.ny_points)).reshape(-1, order="F")


@dataclass
class RunResult:
    """Outcome of run_scenario.

    ``final_state`` covers the main register only (ancilla projected out and
    dropped); ``checkpoint_states`` maps step indices to normalized field
    vectors.
    """

    config: ScenarioConfig
    final_state: QuantumState
    success_prob: float
    success_prob_history: list[float]
    checkpoint_states: list[tuple[int, np.ndarray]]
    error_norms: dict[str, float] = dataclass_field(default_factory=dict)
    gate_counts: dict[str, int] = dataclass_field(default_factory=dict)
    wall_time_s: float = 0.0


class _Stepper:
    """Precompiled circuits for one splitting step at a fixed dt."""

    def __init__(self, config: ScenarioConfig, dt: float):
        self.config = config
        n_x, n_y = config.n_x, config.n_y
        self.n_total = n_x + n_y + 1
        self.ancilla = n_x + n_y
        self.y_qubits = list(range(n_x, n_x + n_y))
        self.counts = {
            key: {"controlled": 0, "two_qubit": 0}
            for key in ("qft", "advection", "diffusion")
        }

        widen_x = {q: q for q in range(n_x)}
        self.qft_fwd = remap_circuit(
            build_qft_circuit(n_x, inverse=True), widen_x, self.n_total
        )
        self.qft_bwd = remap_circuit(build_qft_circuit(n_x), widen_x, self.n_total)

        alpha = 2.0 * np.pi * config.velocity_scale * dt / config.length
        widen_xy = {q: q for q in range(n_x + n_y)}
        self.adv_full = remap_circuit(
            build_shear_advection(n_x, n_y, alpha, config.profile),
            widen_xy,
            self.n_total,
        )
        self.adv_half = remap_circuit(
            build_shear_advection(n_x, n_y, 0.5 * alpha, config.profile),
            widen_xy,
            self.n_total,
        )

        beta_x = DiffusionParams.from_physical(
            n_x, config.diffusivity, dt, config.length, BoundaryKind.PERIODIC
        ).beta
        map_x = dict(widen_x)
        map_x[n_x] = self.ancilla
        self.diff_x = remap_circuit(
            build_periodic_diffusion(n_x, beta_x), map_x, self.n_total
        )

        self.y_fwd = None
        self.y_bwd = None
        self.diff_y = None
        if n_y > 0:
            beta_y = DiffusionParams.from_physical(
                n_y, config.diffusivity, dt, config.length, config.bc_y
            ).beta
            map_y = {q: n_x + q for q in range(n_y)}
            map_y[n_y] = self.ancilla
            if config.bc_y is BoundaryKind.PERIODIC:
                self.y_fwd = remap_circuit(
                    build_qft_circuit(n_y, inverse=True), map_y, self.n_total
                )
                self.y_bwd = remap_circuit(build_qft_circuit(n_y), map_y, self.n_total)
                self.diff_y = remap_circuit(
                    build_periodic_diffusion(n_y, beta_y), map_y, self.n_total
                )
            else:
                self.diff_y = remap_circuit(
                    build_halfspectrum_diffusion(n_y, beta_y, config.bc_y),
                    map_y,
                    self.n_total,
                )

    def _circuit(self, state: QuantumState, circ: Circuit, category: str) -> QuantumState:
        self.counts[category]["controlled"] += count_controlled_gates(circ)
        self.counts[category]["two_qubit"] += count_two_qubit_gates(circ)
        return apply_circuit(state, circ)

    def _advect(self, state: QuantumState, half: bool) -> QuantumState:
        circ = self.adv_half if half else self.adv_full
        state = self._circuit(state, self.qft_fwd, "qft")
        state = self._circuit(state, circ, "advection")
        return state

    def _diffuse_x_and_leave_fourier(self, state: QuantumState) -> QuantumState:
        state = self._circuit(state, self.diff_x, "diffusion")
        return self._circuit(state, self.qft_bwd, "qft")

    def _diffuse_y(self, state: QuantumState) -> QuantumState:
        if self.config.n_y == 0:
            return state
        if self.config.bc_y is BoundaryKind.PERIODIC:
            state = self._circuit(state, self.y_fwd, "qft")
            state = self._circuit(state, self.diff_y, "diffusion")
            return self._circuit(state, self.y_bwd, "qft")
        apply_mode = apply_qct if self.config.bc_y is BoundaryKind.NEUMANN else apply_qst
        state = apply_mode(state, self.y_qubits, inverse=False)
        state = self._circuit(state, self.diff_y, "diffusion")
        return apply_mode(state, self.y_qubits, inverse=True)

    def step(self, state: QuantumState, first: bool = True, last: bool = True) -> QuantumState:
        config = self.config
        if config.splitting == "trotter":
            state = self._advect(state, half=False)
            state = self._diffuse_x_and_leave_fourier(state)
            return self._diffuse_y(state)
        if config.merge_strang:
            # consecutive trailing/leading half steps fused into full steps
            state = self._advect(state, half=first)
            state = self._diffuse_x_and_leave_fourier(state)
            state = self._diffuse_y(state)
            if last:
                state = self._advect(state, half=True)
                state = self._circuit(state, self.qft_bwd, "qft")
            return state
        state = self._advect(state, half=True)
        state = self._diffuse_x_and_leave_fourier(state)
        state = self._diffuse_y(state)
        state = self._advect(state, half=True)
        return self._circuit(state, self.qft_bwd, "qft")

    def flat_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        total_c = total_t = 0
        for key, vals in self.counts.items():
            out[f"{key}_controlled"] = vals["controlled"]
            out[f"{key}_two_qubit"] = vals["two_qubit"]
            total_c += vals["controlled"]
            total_t += vals["two_qubit"]
        out["total_controlled"] = total_c
        out["total_two_qubit"] = total_t
        return out


def _coerce_initial(config: ScenarioConfig, initial) -> np.ndarray:
    main_dim = config.nx_points * config.ny_points
    if isinstance(initial, QuantumState):
        if initial.n_qubits != config.n_x + config.n_y:
            raise ValueError(
                f"initial state has {initial.n_qubits} qubits, scenario needs "
                f"{config.n_x + config.n_y}"
            )
        return initial.amplitudes.copy()
    arr = np.asarray(initial, dtype=np.complex128)
    if arr.ndim == 2:
        arr = arr.reshape(-1, order="F")
    if arr.size != main_dim:
        raise ValueError(f"initial field has {arr.size} entries, grid has {main_dim}")
    norm = np.linalg.norm(arr)
    if norm == 0.0:
        raise ValueError("initial field is identically zero")
    return arr / norm


def _checkpoint_steps(config: ScenarioConfig) -> list[int]:
    marks = {0, config.n_steps}
    for k in range(1, config.checkpoints):
        marks.add((k * config.n_steps) // config.checkpoints)
    return sorted(marks)


def trotter_step(state: QuantumState, config: ScenarioConfig, dt: float) -> QuantumState:
    """One Lie-Trotter step (advection, then both diffusion axes) on a state
    that already includes the trailing ancilla qubit."""
    stepper = _Stepper(
        _replace_splitting(config, "trotter"), dt
    )
    return stepper.step(state)


def strang_step(state: QuantumState, config: ScenarioConfig, dt: float) -> QuantumState:
    """One Strang step (half advection, diffusion, half advection)."""
    stepper = _Stepper(_replace_splitting(config, "strang"), dt)
    return stepper.step(state)


def _replace_splitting(config: ScenarioConfig, name: str) -> ScenarioConfig:
    if config.splitting == name and not config.merge_strang:
        return config
    from dataclasses import replace

    return replace(config, splitting=name, merge_strang=False)


def with_ancilla(config: ScenarioConfig, initial) -> QuantumState:
    """Embed a main-register field into the full register with the ancilla |0>."""
    main = _coerce_initial(config, initial)
    amps = np.concatenate([main, np.zeros_like(main)])
    return QuantumState(config.n_x + config.n_y + 1, amps)


def run_scenario(
    config: ScenarioConfig, initial, references: dict[str, np.ndarray] | None = None
) -> RunResult:
    """Run all splitting steps and collect diagnostics.

    ``initial`` is a main-register QuantumState or a field array (flat or
    (N_x, N_y)); it is normalized on entry.  ``references`` maps oracle names
    to reference vectors; each is compared against the final state with
    error_norm.
    """
    t0 = time.perf_counter()
    steps = _checkpoint_steps(config)
    if config.merge_strang and any(0 < s < config.n_steps for s in steps):
        raise ValueError(
            "merged Strang half-steps leave no exact intermediate states; "
            "disable merge_strang or set checkpoints = 1"
        )
    state = with_ancilla(config, initial)
    main_dim = config.nx_points * config.ny_points
    checkpoints = [(0, state.amplitudes[:main_dim].copy())]
    success_history = []
    stepper = _Stepper(config, config.dt)
    for i in range(1, config.n_steps + 1):
        state = stepper.step(state, first=(i == 1), last=(i == config.n_steps))
        success_history.append(state.success_prob)
        if i in steps and i > 0:
            checkpoints.append((i, state.amplitudes[:main_dim].copy()))
    final = QuantumState(
        config.n_x + config.n_y, state.amplitudes[:main_dim].copy(), state.success_prob
    )
    error_norms = {}
    if references:
        from .oracles import error_norm

        for name, vec in references.items():
            error_norms[name] = error_norm(final.amplitudes, vec)
    return RunResult(
        config=config,
        final_state=final,
        success_prob=state.success_prob,
        success_prob_history=success_history,
        checkpoint_states=checkpoints,
        error_norms=error_norms,
        gate_counts=stepper.flat_counts(),
        wall_time_s=time.perf_counter() - t0,
    )


def _spectral_x_derivative(arr: np.ndarray, config: ScenarioConfig) -> np.ndarray:
    kx = wavenumbers(config.n_x, config.length, BoundaryKind.PERIODIC).values
    spec = np.fft.fft(arr, axis=0) * (1j * kx)[:, None]
    return np.fft.ifft(spec, axis=0)


def _spectral_y_derivative(arr: np.ndarray, config: ScenarioConfig) -> np.ndarray:
    ny = config.ny_points
    dy = config.length / ny
    if config.bc_y is BoundaryKind.PERIODIC:
        ext = arr
    elif config.bc_y is BoundaryKind.NEUMANN:
        ext = np.concatenate([arr, arr[:, ::-1]], axis=1)
    else:
        ext = np.concatenate([arr, -arr[:, ::-1]], axis=1)
    k = 2.0 * np.pi * np.fft.fftfreq(ext.shape[1], d=dy)
    spec = np.fft.fft(ext, axis=1) * (1j * k)[None, :]
    return np.fft.ifft(spec, axis=1)[:, :ny]


def commutator_error_estimate(config: ScenarioConfig, field) -> np.ndarray:
    """Leading-order splitting error field D*(2u'(y) d2/dxdy + u''(y) d/dx).

    The prefactor dt^2/2 is left out, so this measures the size of the
    advection/diffusion commutator on the given field.  Uniform profiles and
    fields without streamwise variation give zero.
    """
    if config.n_y == 0:
        return np.zeros(config.nx_points)
    arr = np.asarray(field, dtype=np.complex128)
    flat_in = arr.ndim == 1
    if flat_in:
        arr = arr.reshape(config.nx_points, config.ny_points, order="F")
    ny = config.ny_points
    y_hat = np.arange(ny) / (ny - 1)
    scale = config.velocity_scale / config.length
    du = scale * config.profile.derivative(y_hat, 1)
    d2u = (scale / config.length) * config.profile.derivative(y_hat, 2)
    dphidx = _spectral_x_derivative(arr, config)
    dphidxdy = _spectral_y_derivative(dphidx, config)
    est = config.diffusivity * (
        2.0 * du[None, :] * dphidxdy + d2u[None, :] * dphidx
    )
    est = np.real(est)
    return est.reshape(-1, order="F") if flat_in else est


def decompose_steady_state(
    field, gradients, offset: float, x: np.ndarray | None = None,
    y: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Split a grid field into a linear steady part and the fluctuation.

    The steady part is offset + x*gradients[0] (+ y*gradients[1] in 2D) on
    normalized default coordinates (x = j/N_x periodic, y = q/(N_y - 1));
    explicit coordinate vectors override the defaults.  Returns
    (fluctuation, steady) with fluctuation + steady == field exactly.
    """
    arr = np.asarray(field, dtype=float)
    if arr.ndim == 1:
        gx = gradients[0] if np.ndim(gradients) else float(gradients)
        coords = np.arange(arr.size) / arr.size if x is None else np.asarray(x)
        steady = offset + gx * coords
    elif arr.ndim == 2:
        gx, gy = gradients
        nx, ny = arr.shape
        xv = np.arange(nx) / nx if x is None else np.asarray(x)
        yv = (
            (np.arange(ny) / (ny - 1) if ny > 1 else np.zeros(1))
            if y is None
            else np.asarray(y)
        )
        steady = offset + gx * xv[:, None] + gy * yv[None, :]
    else:
        raise ValueError(f"field must be 1D or 2D, got shape {arr.shape}")
    return arr - steady, steady
