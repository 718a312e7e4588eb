"""Semidiscrete grid, symplectic time stepping, and energy observers.

Space is a uniform grid with every oscillator sitting exactly on a node; the
point force enters the node acceleration divided by dx (a discrete delta),
which reproduces the derivative-jump condition as dx -> 0.  Time stepping is
explicit Stormer-Verlet (kick-drift-kick), so the flow is symplectic and
reversible and conserves a shadow of the discrete energy

    H = 1/2 sum dx (|pi|^2 + m^2 |psi|^2) + 1/2 sum_cells |dpsi|^2 / dx
        + sum_J U_J(psi(X_J)),

whose gradient is exactly the semidiscrete right-hand side.  Boundaries are
homogeneous Dirichlet on a domain sized so that radiation cannot return
during an experiment.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .model import ModelSpec, force, potential
from .solitary import ConvergedToZero, NoConvergence, SolitaryWave, profile_eval, solve_profile

__all__ = [
    "Grid",
    "FieldState",
    "ObserverSeries",
    "ManifoldDistance",
    "NoCommensurateGrid",
    "build_grid",
    "step",
    "evolve",
    "hamiltonian",
    "charge",
    "energy_norm",
    "apriori_bound",
    "local_seminorm",
    "metric_dist",
    "solitary_state",
    "perturbed_solitary_state",
    "dist_to_manifold",
]


class NoCommensurateGrid(ValueError):
    """Oscillator gaps admit no common grid spacing at the requested resolution."""


@dataclass(frozen=True)
class Grid:
    x_min: float
    dx: float
    count: int
    oscillator_nodes: tuple[int, ...]

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.count)

    @property
    def x_max(self) -> float:
        return self.x_min + self.dx * (self.count - 1)


@dataclass(frozen=True)
class FieldState:
    """Complex field and momentum samples at one time; treated as immutable."""

    psi: np.ndarray
    pi: np.ndarray
    t: float

    def __post_init__(self):
        psi = np.array(self.psi, dtype=complex)
        pi = np.array(self.pi, dtype=complex)
        if psi.shape != pi.shape or psi.ndim != 1:
            raise ValueError("psi and pi must be 1-d arrays of equal length")
        psi.setflags(write=False)
        pi.setflags(write=False)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "pi", pi)


@dataclass
class ObserverSeries:
    """Uniformly sampled observables along one evolution."""

    times: np.ndarray
    energy: np.ndarray
    charge: np.ndarray
    seminorms: dict[float, np.ndarray]
    traces_psi: np.ndarray  # (samples, N)
    traces_pi: np.ndarray
    sample_dt: float = field(default=0.0)


def _rational_gcd(values: list[Fraction]) -> Fraction:
    acc = values[0]
    for v in values[1:]:
        acc = Fraction(math.gcd(acc.numerator * v.denominator, v.numerator * acc.denominator),
                       acc.denominator * v.denominator)
    return acc


def build_grid(model: ModelSpec, x_min: float, x_max: float, dx_target: float) -> Grid:
    """Choose dx <= dx_target dividing all oscillator gaps, anchored at X_1.

    The spacing is the largest integer fraction of the rational gcd of the
    gaps that fits under dx_target; the grid then extends left and right by
    whole steps until it covers [x_min, x_max].  Raises NoCommensurateGrid
    when the gaps have no common divisor within a factor 10^6 of the target
    (irrational gap ratios at this resolution).
    """
    pos = model.positions
    if not (x_min < pos[0] and x_max > pos[-1]):
        raise ValueError("domain must strictly contain all oscillator positions")
    if dx_target <= 0:
        raise ValueError("dx_target must be positive")
    gaps = [b - a for a, b in zip(pos, pos[1:])]
    if gaps:
        fracs = []
        for g in gaps:
            f = Fraction(g).limit_denominator(10**12)
            if abs(float(f) - g) > 1e-12 * max(1.0, abs(g)):
                raise NoCommensurateGrid(f"gap {g} has no rational reconstruction at 1e-12")
            fracs.append(f)
        g_all = _rational_gcd(fracs)
        if g_all < Fraction(dx_target).limit_denominator(10**12) / 10**6:
            raise NoCommensurateGrid(
                f"gap gcd {float(g_all):g} is more than 1e6 times finer than dx_target {dx_target:g}"
            )
        k = math.ceil(g_all / Fraction(dx_target))
        dx_frac = g_all / k
        dx = float(dx_frac)
        gap_steps = [int(f / dx_frac) for f in fracs]
    else:
        dx = float(dx_target)
        gap_steps = []

    n_left = math.ceil((pos[0] - x_min) / dx)
    n_right = math.ceil((x_max - pos[-1]) / dx)
    nodes = [n_left]
    for s in gap_steps:
        nodes.append(nodes[-1] + s)
    count = nodes[-1] + n_right + 1
    grid_x_min = pos[0] - n_left * dx
    grid = Grid(grid_x_min, dx, count, tuple(nodes))
    # Node-placement guard: spec tolerance plus a floor for accumulated fp error.
    x = grid.x
    tol = max(1e-12 * dx, 64 * np.finfo(float).eps * max(1.0, abs(grid_x_min), abs(grid.x_max)))
    for p, i in zip(pos, nodes):
        if abs(x[i] - p) > tol:
            raise NoCommensurateGrid(f"oscillator at {p} missed its node by {abs(x[i]-p):.3e}")
    return grid


def _acceleration(model: ModelSpec, grid: Grid, psi: np.ndarray) -> np.ndarray:
    # overflow of a runaway field is tolerated here; the steppers detect the
    # resulting non-finite values and abort with a diagnostic
    with np.errstate(over="ignore", invalid="ignore"):
        acc = np.zeros_like(psi)
        inv_dx2 = 1.0 / grid.dx**2
        acc[1:-1] = (psi[2:] - 2.0 * psi[1:-1] + psi[:-2]) * inv_dx2
        acc -= model.mass**2 * psi
        for osc, i in zip(model.oscillators, grid.oscillator_nodes):
            acc[i] += force(osc, psi[i]) / grid.dx
        acc[0] = 0.0
        acc[-1] = 0.0
    return acc


def _check_cfl(grid: Grid, dt: float):
    if abs(dt) >= grid.dx:
        raise ValueError(f"CFL violated: |dt|={abs(dt)} must be below dx={grid.dx}")
    if dt == 0.0:
        raise ValueError("dt must be nonzero")


def _check_shape(grid: Grid, state: FieldState):
    if len(state.psi) != grid.count:
        raise ValueError(f"state has {len(state.psi)} nodes, grid has {grid.count}")


def step(model: ModelSpec, grid: Grid, state: FieldState, dt: float) -> FieldState:
    """One kick-drift-kick step; dt < 0 steps backwards (the flow is reversible)."""
    _check_cfl(grid, dt)
    _check_shape(grid, state)
    a = _acceleration(model, grid, state.psi)
    pi_half = state.pi + 0.5 * dt * a
    psi_new = state.psi + dt * pi_half
    pi_new = pi_half + 0.5 * dt * _acceleration(model, grid, psi_new)
    if not (np.all(np.isfinite(psi_new.view(float))) and np.all(np.isfinite(pi_new.view(float)))):
        raise FloatingPointError(f"non-finite field detected after step to t={state.t + dt}")
    return FieldState(psi_new, pi_new, state.t + dt)


def hamiltonian(model: ModelSpec, grid: Grid, state: FieldState) -> float:
    """Discrete energy: trapezoid node terms, forward differences on cells."""
    w = np.ones(grid.count)
    w[0] = w[-1] = 0.5
    dx = grid.dx
    with np.errstate(over="ignore", invalid="ignore"):
        kin = 0.5 * dx * float(np.sum(w * np.abs(state.pi) ** 2))
        mass = 0.5 * model.mass**2 * dx * float(np.sum(w * np.abs(state.psi) ** 2))
        dpsi = np.diff(state.psi)
        grad = 0.5 * float(np.sum(np.abs(dpsi) ** 2)) / dx
        pot = sum(potential(o, state.psi[i]) for o, i in zip(model.oscillators, grid.oscillator_nodes))
        return kin + mass + grad + pot


def charge(model: ModelSpec, grid: Grid, state: FieldState) -> float:
    """Q = -integral Im(conj(psi) pi) dx, conserved by the phase symmetry."""
    w = np.ones(grid.count)
    w[0] = w[-1] = 0.5
    return -grid.dx * float(np.sum(w * np.imag(np.conj(state.psi) * state.pi)))


def energy_norm(model: ModelSpec, grid: Grid, state: FieldState) -> float:
    """Full energy norm sqrt(|pi|^2 + |psi'|^2 + m^2 |psi|^2), no potentials."""
    w = np.ones(grid.count)
    w[0] = w[-1] = 0.5
    dx = grid.dx
    total = dx * float(np.sum(w * (np.abs(state.pi) ** 2 + model.mass**2 * np.abs(state.psi) ** 2)))
    total += float(np.sum(np.abs(np.diff(state.psi)) ** 2)) / dx
    return math.sqrt(total)


def apriori_bound(model: ModelSpec, grid: Grid, initial: FieldState) -> float:
    """Upper bound on the energy norm along the flow, from the potential floors.

    With U_J >= A_J - B_J |psi|^2 and sum B_J < m, conservation of H gives
    |Psi(t)|_E^2 <= 2m (H(Psi_0) - sum A_J) / (m - sum B_J).
    """
    from .model import lower_bound_constants

    consts = lower_bound_constants(model)
    h0 = hamiltonian(model, grid, initial)
    m = model.mass
    val = 2.0 * m * (h0 - sum(consts.A)) / (m - sum(consts.B))
    return math.sqrt(max(val, 0.0))


def local_seminorm(model: ModelSpec, grid: Grid, state: FieldState, R: float) -> float:
    """Energy seminorm over the window [-R, R] (clipped to the grid with a warning)."""
    if R <= 0:
        raise ValueError("R must be positive")
    if -R < grid.x_min or R > grid.x_max:
        warnings.warn(f"seminorm window [-{R}, {R}] exceeds the grid; clipping", stacklevel=2)
    x = grid.x
    nodes = np.abs(x) <= R
    dx = grid.dx
    total = dx * float(np.sum(np.abs(state.pi[nodes]) ** 2 + model.mass**2 * np.abs(state.psi[nodes]) ** 2))
    cells = nodes[:-1] & nodes[1:]
    dpsi = np.diff(state.psi)[cells]
    total += float(np.sum(np.abs(dpsi) ** 2)) / dx
    return math.sqrt(total)


def metric_dist(model: ModelSpec, grid: Grid, a: FieldState, b: FieldState, r_max: int) -> float:
    """Weighted sum 2^-R |A - B|_{E,R} over R = 1..r_max (a metric on states)."""
    if r_max < 1:
        raise ValueError("r_max must be at least 1")
    diff = FieldState(a.psi - b.psi, a.pi - b.pi, a.t)
    return sum(0.5**R * local_seminorm(model, grid, diff, float(R)) for R in range(1, r_max + 1))


def solitary_state(model: ModelSpec, grid: Grid, wave: SolitaryWave, phase: complex = 1.0 + 0j) -> FieldState:
    """Sample (phi, -i omega phi), optionally rotated by a unit phase.

    The Dirichlet nodes are zeroed exactly (the profile tail there is below
    roundoff on any adequately sized domain) so they stay zero under the flow.
    """
    phi = profile_eval(model, wave, grid.x) * phase
    phi[0] = phi[-1] = 0.0
    return FieldState(phi, -1j * wave.omega * phi, 0.0)


def perturbed_solitary_state(
    model: ModelSpec,
    grid: Grid,
    wave: SolitaryWave,
    noise_amplitude: float,
    seed: int,
    n_bumps: int = 5,
) -> FieldState:
    """Solitary state plus seeded smooth noise carrying a fixed energy fraction.

    The noise is a sum of complex-amplitude Gaussians (widths >= 10 dx,
    centers near the oscillators) added to psi and scaled so its own energy
    norm squared is noise_amplitude times that of the solitary state.
    """
    base = solitary_state(model, grid, wave)
    rng = np.random.default_rng(seed)
    x = grid.x
    lo, hi = model.positions[0] - 2.0, model.positions[-1] + 2.0
    noise = np.zeros(grid.count, dtype=complex)
    for _ in range(n_bumps):
        center = rng.uniform(lo, hi)
        width = rng.uniform(10.0, 25.0) * grid.dx
        amp = rng.normal() + 1j * rng.normal()
        noise += amp * np.exp(-((x - center) ** 2) / (2.0 * width**2))
    noise[0] = noise[-1] = 0.0
    carrier = FieldState(noise, np.zeros_like(noise), 0.0)
    n_norm = energy_norm(model, grid, carrier)
    target = math.sqrt(noise_amplitude) * energy_norm(model, grid, base)
    if n_norm > 0:
        noise *= target / n_norm
    return FieldState(base.psi + noise, base.pi, 0.0)


def evolve(
    model: ModelSpec,
    grid: Grid,
    state: FieldState,
    T: float,
    dt: float,
    observe_every: int = 1,
    seminorm_radii: tuple[float, ...] = (),
    extra_probe_nodes: tuple[int, ...] = (),
) -> tuple[ObserverSeries, FieldState]:
    """Run round(T/dt) steps, sampling observers every observe_every steps.

    Returns the series and the final state.  Samples land at steps
    0, observe_every, 2*observe_every, ...; the final state is returned even
    when it does not fall on a sample.  Traces are recorded at the oscillator
    nodes followed by any extra probe nodes.
    """
    if T < 0:
        raise ValueError("T must be nonnegative")
    if observe_every < 1:
        raise ValueError("observe_every must be at least 1")
    _check_cfl(grid, dt)
    _check_shape(grid, state)
    n_steps = int(round(T / dt)) if T > 0 else 0

    times, en, ch = [], [], []
    semis: dict[float, list[float]] = {float(r): [] for r in seminorm_radii}
    tr_psi, tr_pi = [], []
    nodes = list(grid.oscillator_nodes) + list(extra_probe_nodes)

    def observe(s: FieldState):
        times.append(s.t)
        en.append(hamiltonian(model, grid, s))
        ch.append(charge(model, grid, s))
        for r in semis:
            semis[r].append(local_seminorm(model, grid, s, r))
        tr_psi.append(s.psi[nodes].copy())
        tr_pi.append(s.pi[nodes].copy())

    psi = np.array(state.psi, dtype=complex)
    pi = np.array(state.pi, dtype=complex)
    t0 = state.t
    observe(state)
    acc = _acceleration(model, grid, psi)
    for k in range(1, n_steps + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            pi_half = pi + 0.5 * dt * acc
            psi = psi + dt * pi_half
            acc = _acceleration(model, grid, psi)
            pi = pi_half + 0.5 * dt * acc
        if k % observe_every == 0:
            if not np.all(np.isfinite(psi.view(float))):
                raise FloatingPointError(f"non-finite field detected at t={t0 + k * dt}")
            observe(FieldState(psi, pi, t0 + k * dt))
    final = FieldState(psi, pi, t0 + n_steps * dt)
    if not np.all(np.isfinite(psi.view(float))):
        raise FloatingPointError(f"non-finite field detected at t={final.t}")
    series = ObserverSeries(
        times=np.array(times),
        energy=np.array(en),
        charge=np.array(ch),
        seminorms={r: np.array(v) for r, v in semis.items()},
        traces_psi=np.array(tr_psi),
        traces_pi=np.array(tr_pi),
        sample_dt=dt * observe_every,
    )
    return series, final


@dataclass(frozen=True)
class ManifoldDistance:
    dist: float
    best_omega: float  # nan when the zero wave is the closest point
    wave: SolitaryWave | None


def _optimal_phase(model: ModelSpec, grid: Grid, state: FieldState, cand: FieldState, window: float) -> complex:
    """Unit phase minimizing |state - e^{i theta} cand|_{E, window} (closed form)."""
    x = grid.x
    nodes = np.abs(x) <= window
    cells = nodes[:-1] & nodes[1:]
    dx = grid.dx
    inner = dx * np.sum(np.conj(state.pi[nodes]) * cand.pi[nodes])
    inner += dx * model.mass**2 * np.sum(np.conj(state.psi[nodes]) * cand.psi[nodes])
    inner += np.sum(np.conj(np.diff(state.psi)[cells]) * np.diff(cand.psi)[cells]) / dx
    if abs(inner) == 0.0:
        return 1.0 + 0j
    return inner.conjugate() / abs(inner)


def dist_to_manifold(
    model: ModelSpec,
    grid: Grid,
    state: FieldState,
    omega_grid,
    r_max: int,
    guess=None,
    refine_iters: int = 24,
) -> ManifoldDistance:
    """Metric distance from a state to the solitary manifold.

    Scans the frequency grid (warm-starting each profile solve from the
    previous one), optimizes the global phase in closed form per candidate,
    then refines around the best grid point by golden-section search.  The
    zero wave is always a candidate.  Frequencies where the solve fails are
    skipped; it is an error only if every frequency fails.
    """
    omegas = [float(w) for w in omega_grid]
    if not omegas:
        raise ValueError("omega_grid must be nonempty")
    m = model.mass
    if any(abs(w) >= m for w in omegas):
        raise ValueError("omega_grid must lie strictly inside (-m, m)")

    zero = FieldState(np.zeros(grid.count, complex), np.zeros(grid.count, complex), state.t)
    best = ManifoldDistance(metric_dist(model, grid, state, zero, r_max), float("nan"), None)

    def try_omega(w: float, start) -> tuple[float, SolitaryWave] | None:
        try:
            wave = solve_profile(model, w, start)
        except (NoConvergence, ConvergedToZero):
            return None
        cand = solitary_state(model, grid, wave)
        cand = FieldState(cand.psi, cand.pi, state.t)
        phase = _optimal_phase(model, grid, state, cand, float(r_max))
        phased = FieldState(cand.psi * phase, cand.pi * phase, state.t)
        return metric_dist(model, grid, state, phased, r_max), wave

    default_guesses = [guess] if guess is not None else []
    default_guesses += [[0.7 + 0j] * model.count, [1.0 + 0j] * model.count, [0.3 + 0j] * model.count]

    warm = None
    any_solved = False
    results: dict[float, tuple[float, SolitaryWave]] = {}
    for w in omegas:
        starts = ([warm] if warm is not None else []) + default_guesses
        hit = None
        for s in starts:
            hit = try_omega(w, s)
            if hit is not None:
                break
        if hit is None:
            continue
        any_solved = True
        results[w] = hit
        warm = hit[1].amplitudes
        if hit[0] < best.dist:
            best = ManifoldDistance(hit[0], w, hit[1])
    if not any_solved:
        raise NoConvergence(omegas[0], float("inf"))

    if best.wave is not None and len(omegas) > 1:
        solved = sorted(results)
        idx = solved.index(best.best_omega)
        lo = solved[max(idx - 1, 0)]
        hi = solved[min(idx + 1, len(solved) - 1)]
        if hi > lo:
            invphi = (math.sqrt(5.0) - 1.0) / 2.0
            a, b = lo, hi
            amps = results[best.best_omega][1].amplitudes
            c = b - invphi * (b - a)
            d = a + invphi * (b - a)
            fc = try_omega(c, amps)
            fd = try_omega(d, amps)
            for _ in range(refine_iters):
                if fc is None or fd is None:
                    break
                if fc[0] < fd[0]:
                    b, d, fd = d, c, fc
                    c = b - invphi * (b - a)
                    fc = try_omega(c, amps)
                else:
                    a, c, fc = c, d, fd
                    d = a + invphi * (b - a)
                    fd = try_omega(d, amps)
            for f, w in ((fc, c), (fd, d)):
                if f is not None and f[0] < best.dist:
                    best = ManifoldDistance(f[0], w, f[1])
    return best
