"""Solitary-wave profiles pinned at the oscillator positions.

A solitary wave phi(x) e^{-i omega t} with |omega| <= m has the profile

    phi(x) = sum_J C_J exp(-kappa |x - X_J|),     kappa = sqrt(m^2 - omega^2),

and the complex amplitudes C_J solve the derivative-jump system

    2 kappa C_J = F_J( sum_K C_K exp(-kappa |X_J - X_K|) ).

The solver is a damped Newton iteration in the 2N real amplitude components
with the global phase fixed by Im C_1 = 0 (the system is invariant under a
common phase rotation, which would otherwise make the Jacobian singular).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelSpec, force, force_ratio

__all__ = [
    "SolitaryWave",
    "NoConvergence",
    "ConvergedToZero",
    "kappa",
    "amplitude_residual",
    "solve_profile",
    "profile_eval",
    "continue_branch",
]

RESIDUAL_TOL = 1e-11
ZERO_BRANCH_TOL = 1e-9
MAX_ITER = 100


class NoConvergence(RuntimeError):
    """Newton failed; carries the frequency and any partial branch."""

    def __init__(self, omega: float, residual: float, waves=None):
        super().__init__(f"no convergence at omega={omega} (residual {residual:.3e})")
        self.omega = omega
        self.residual = residual
        self.waves = list(waves) if waves is not None else []


class ConvergedToZero(RuntimeError):
    """Newton collapsed onto the zero wave; carries it for callers who want it."""

    def __init__(self, wave: "SolitaryWave"):
        super().__init__(f"converged to the zero wave at omega={wave.omega}")
        self.wave = wave


@dataclass(frozen=True)
class SolitaryWave:
    """Frequency, decay rate and pinned amplitudes of one profile."""

    omega: float
    kappa: float
    amplitudes: tuple[complex, ...]

    def to_json_dict(self) -> dict:
        return {
            "omega": self.omega,
            "kappa": self.kappa,
            "amplitudes": [[c.real, c.imag] for c in self.amplitudes],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "SolitaryWave":
        amps = tuple(complex(re, im) for re, im in d["amplitudes"])
        return cls(float(d["omega"]), float(d["kappa"]), amps)


def kappa(model: ModelSpec, omega: float) -> float:
    """Decay rate sqrt(m^2 - omega^2); only defined inside the band |omega| <= m."""
    m = model.mass
    if abs(omega) > m:
        raise ValueError(f"|omega|={abs(omega)} exceeds the mass {m}")
    return float(np.sqrt(max(m * m - omega * omega, 0.0)))


def _coupling_matrix(model: ModelSpec, kap: float) -> np.ndarray:
    pos = np.asarray(model.positions)
    return np.exp(-kap * np.abs(pos[:, None] - pos[None, :]))


def amplitude_residual(model: ModelSpec, wave: SolitaryWave) -> np.ndarray:
    """Real/imaginary parts of 2 kappa C_J - F_J(phi(X_J)), interleaved per J."""
    kap = kappa(model, wave.omega)
    c = np.asarray(wave.amplitudes, dtype=complex)
    values = _coupling_matrix(model, kap) @ c
    out = np.empty(2 * model.count)
    for j, osc in enumerate(model.oscillators):
        r = 2.0 * kap * c[j] - force(osc, values[j])
        out[2 * j] = r.real
        out[2 * j + 1] = r.imag
    return out


def _residual_and_jacobian(model: ModelSpec, kap: float, c: np.ndarray, coupling: np.ndarray):
    """Residual of the amplitude system and its Jacobian in 2N real unknowns.

    Overflow from runaway iterates is tolerated here; the caller detects the
    resulting non-finite residuals and reports NoConvergence.
    """
    n = model.count
    with np.errstate(over="ignore", invalid="ignore"):
        values = coupling @ c
        res = np.empty(2 * n)
        jac = np.zeros((2 * n, 2 * n))
        for j, osc in enumerate(model.oscillators):
            psi = values[j]
            u, v = psi.real, psi.imag
            s = u * u + v * v
            a = force_ratio(osc, s)
            # d alpha / ds, closed form for the polynomial coefficients
            da = 0.0
            for k in range(osc.degree, 1, -1):
                da = da * s + k * (k - 1) * osc.coefficients[k]
            da *= -2.0
            r = 2.0 * kap * c[j] - a * psi
            res[2 * j] = r.real
            res[2 * j + 1] = r.imag
            # dF/d(Re psi, Im psi) for F = alpha(|psi|^2) psi
            fuu = a + 2.0 * u * u * da
            fuv = 2.0 * u * v * da
            fvv = a + 2.0 * v * v * da
            for k in range(n):
                e = coupling[j, k]
                jac[2 * j, 2 * k] = -fuu * e
                jac[2 * j, 2 * k + 1] = -fuv * e
                jac[2 * j + 1, 2 * k] = -fuv * e
                jac[2 * j + 1, 2 * k + 1] = -fvv * e
            jac[2 * j, 2 * j] += 2.0 * kap
            jac[2 * j + 1, 2 * j + 1] += 2.0 * kap
    return res, jac


def _gauge_rotate(amps: np.ndarray) -> np.ndarray:
    """Rotate the common phase so the first nonzero amplitude is real >= 0."""
    for c in amps:
        if abs(c) > 0.0:
            rotated = amps * (c.conjugate() / abs(c))
            idx = np.argmax(np.abs(amps) > 0.0)
            rotated[idx] = abs(amps[idx])
            return rotated
    return amps


def _zero_wave(model: ModelSpec, omega: float) -> SolitaryWave:
    return SolitaryWave(float(omega), kappa(model, omega), (0j,) * model.count)


def solve_profile(model: ModelSpec, omega: float, guess) -> SolitaryWave:
    """Newton-solve the amplitude system at fixed frequency.

    The phase gauge Im C_1 = 0 replaces the corresponding residual equation;
    on residual increase the step is halved up to 8 times.  Raises
    NoConvergence after 100 iterations and ConvergedToZero when the iteration
    lands on the zero branch (|C| <= 1e-9), so callers can tell the trivial
    wave from a genuine one.  At omega = +-m only the zero wave decays, and it
    is returned directly.
    """
    m = model.mass
    if abs(omega) > m:
        raise ValueError(f"|omega|={abs(omega)} exceeds the mass {m}")
    if abs(omega) == m:
        return _zero_wave(model, omega)
    n = model.count
    c = np.asarray(list(guess), dtype=complex)
    if c.shape != (n,):
        raise ValueError(f"guess must have length {n}")
    c = _gauge_rotate(c)
    kap = kappa(model, omega)
    coupling = _coupling_matrix(model, kap)

    def gauged(res):
        g = res.copy()
        g[1] = c[0].imag
        return g

    res, jac = _residual_and_jacobian(model, kap, c, coupling)
    for _ in range(MAX_ITER):
        if np.max(np.abs(res)) <= RESIDUAL_TOL:
            break
        g = gauged(res)
        jg = jac.copy()
        jg[1, :] = 0.0
        jg[1, 1] = 1.0
        try:
            delta = np.linalg.solve(jg, -g)
        except np.linalg.LinAlgError:
            raise NoConvergence(omega, float(np.max(np.abs(res))))
        step = delta[0::2] + 1j * delta[1::2]
        norm_old = np.max(np.abs(g))
        scale = 1.0
        for _ in range(8):
            c_try = c + scale * step
            res_try, jac_try = _residual_and_jacobian(model, kap, c_try, coupling)
            g_try = res_try.copy()
            g_try[1] = c_try[0].imag
            if np.max(np.abs(g_try)) < norm_old:
                break
            scale *= 0.5
        c, res, jac = c_try, res_try, jac_try
    else:
        raise NoConvergence(omega, float(np.max(np.abs(res))))

    c = _gauge_rotate(c)
    wave = SolitaryWave(float(omega), kap, tuple(c))
    final = np.max(np.abs(amplitude_residual(model, wave)))
    if final > RESIDUAL_TOL:
        raise NoConvergence(omega, float(final))
    if np.max(np.abs(c)) <= ZERO_BRANCH_TOL:
        raise ConvergedToZero(_zero_wave(model, omega))
    return wave


def profile_eval(model: ModelSpec, wave: SolitaryWave, x):
    """phi(x) = sum_J C_J exp(-kappa |x - X_J|); works on scalars and arrays."""
    xs = np.asarray(x, dtype=float)
    out = np.zeros(xs.shape, dtype=complex)
    for c, pos in zip(wave.amplitudes, model.positions):
        out += c * np.exp(-wave.kappa * np.abs(xs - pos))
    if np.isscalar(x) or xs.ndim == 0:
        return complex(out)
    return out


def continue_branch(model: ModelSpec, omega_start: float, omega_end: float, step: float, guess) -> list[SolitaryWave]:
    """Natural-parameter continuation: march omega, warm-starting each solve.

    Stops at the last good frequency when the branch collapses to zero;
    propagates NoConvergence (with the partial branch attached) when Newton
    fails outright.
    """
    m = model.mass
    if not (abs(omega_start) < m and abs(omega_end) < m):
        raise ValueError("both endpoint frequencies must lie strictly inside (-m, m)")
    if step <= 0:
        raise ValueError("step must be positive")
    span = omega_end - omega_start
    direction = 1.0 if span >= 0 else -1.0
    k_max = int(np.floor(abs(span) / step + 1e-12))
    omegas = [omega_start + direction * step * k for k in range(k_max + 1)]
    waves: list[SolitaryWave] = []
    current = list(guess)
    for w in omegas:
        try:
            wave = solve_profile(model, w, current)
        except ConvergedToZero:
            break
        except NoConvergence as err:
            raise NoConvergence(w, err.residual, waves) from err
        waves.append(wave)
        current = wave.amplitudes
    return waves
