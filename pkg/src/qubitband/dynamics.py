"""Closed-form and numeric Bloch-vector dynamics of a single dephasing qubit.

The qubit is driven about the x axis at angular rate omega = 2*pi*f and is
coupled to a Markovian dephasing environment with rate kappa.  Starting from
the +1 eigenstate of sigma_z (Bloch vector (0, 0, 1)), the components evolve
as

    rx(t) = 0
    ry(t) = -(omega/mu) * exp(-2*kappa*t) * sin(mu*t)
    rz(t) =  exp(-2*kappa*t) * [cos(mu*t) + 2*kappa*sin(mu*t)/mu]

with mu = sqrt(omega^2 - 4*kappa^2).  These closed forms are the exact
solution of the linear system

    drx/dt = -2*kappa*rx
    dry/dt = -omega*rz - 4*kappa*ry
    drz/dt =  omega*ry

which `ode_evolve` integrates with a fixed-step classical Runge-Kutta scheme
as an independent numerical cross-check of the closed forms.

A projective sigma_z measurement yields +1 with probability (rz + 1)/2.

All functions are pure; every type here is immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class OverdampedRegime(ValueError):
    """Raised when 2*pi*f <= 2*kappa, where the oscillatory solution breaks down."""


class NegativeTime(ValueError):
    """Raised when an evolution time is negative."""


class StepTooLarge(ValueError):
    """Raised when the integrator step is too coarse for its accuracy contract."""


class InvalidBloch(ValueError):
    """Raised when a Bloch component lies outside the physical range."""


@dataclass(frozen=True)
class QubitParams:
    """Physical model parameters.

    f : oscillation frequency in cycles per unit time (f > 0)
    kappa : environment coupling rate, inverse time (kappa >= 0)
    """

    f: float
    kappa: float = 0.0

    def __post_init__(self):
        if self.f <= 0:
            raise ValueError(f"oscillation frequency must be positive, got {self.f}")
        if self.kappa < 0:
            raise ValueError(f"coupling rate must be non-negative, got {self.kappa}")

    @property
    def omega(self) -> float:
        """Angular oscillation rate 2*pi*f."""
        return 2.0 * math.pi * self.f

    @property
    def tau(self) -> float:
        """Decoherence timescale 1/kappa (inf when kappa = 0)."""
        return math.inf if self.kappa == 0 else 1.0 / self.kappa


@dataclass(frozen=True)
class BlochState:
    """Bloch vector (rx, ry, rz) at time t."""

    rx: float
    ry: float
    rz: float
    t: float

    @property
    def norm(self) -> float:
        return math.sqrt(self.rx**2 + self.ry**2 + self.rz**2)


def damped_frequency(params: QubitParams) -> float:
    """Angular rate mu = sqrt(omega^2 - 4*kappa^2) of the damped oscillation.

    Raises OverdampedRegime unless omega > 2*kappa.
    """
    omega = params.omega
    if omega <= 2.0 * params.kappa:
        raise OverdampedRegime(
            f"need 2*pi*f > 2*kappa for oscillatory dynamics, "
            f"got omega={omega:.6g}, 2*kappa={2 * params.kappa:.6g}"
        )
    if params.kappa == 0.0:
        return omega
    return math.sqrt(omega**2 - 4.0 * params.kappa**2)


def bloch_at(params: QubitParams, t: float) -> BlochState:
    """Closed-form Bloch vector at time t >= 0 for the (0, 0, 1) initial state."""
    if t < 0:
        raise NegativeTime(f"evolution time must be >= 0, got {t}")
    omega = params.omega
    kappa = params.kappa
    mu = damped_frequency(params)
    decay = math.exp(-2.0 * kappa * t)
    ry = -(omega / mu) * decay * math.sin(mu * t)
    rz = decay * (math.cos(mu * t) + 2.0 * kappa * math.sin(mu * t) / mu)
    return BlochState(rx=0.0, ry=ry, rz=rz, t=t)


def prob_plus(state: BlochState) -> float:
    """Probability of a +1 outcome for a projective sigma_z measurement."""
    if abs(state.rz) > 1.0 + 1e-9:
        raise InvalidBloch(f"|rz| must not exceed 1, got rz={state.rz}")
    return min(1.0, max(0.0, (state.rz + 1.0) / 2.0))


def _max_step(params: QubitParams) -> float:
    return 1.0 / (10.0 * max(params.omega, 2.0 * params.kappa))


def _rhs(omega: float, kappa: float, rx: float, ry: float, rz: float):
    return (-2.0 * kappa * rx, -omega * rz - 4.0 * kappa * ry, omega * ry)


def _rk4_span(params: QubitParams, state, t_span: float, dt: float):
    """Advance (rx, ry, rz) over t_span using whole classical RK4 steps of size <= dt."""
    if t_span == 0.0:
        return state
    omega, kappa = params.omega, params.kappa
    n_steps = max(1, math.ceil(t_span / dt))
    h = t_span / n_steps
    rx, ry, rz = state
    for _ in range(n_steps):
        ax, ay, az = _rhs(omega, kappa, rx, ry, rz)
        bx, by, bz = _rhs(omega, kappa, rx + 0.5 * h * ax, ry + 0.5 * h * ay, rz + 0.5 * h * az)
        cx, cy, cz = _rhs(omega, kappa, rx + 0.5 * h * bx, ry + 0.5 * h * by, rz + 0.5 * h * bz)
        dx, dy, dz = _rhs(omega, kappa, rx + h * cx, ry + h * cy, rz + h * cz)
        rx += h * (ax + 2.0 * bx + 2.0 * cx + dx) / 6.0
        ry += h * (ay + 2.0 * by + 2.0 * cy + dy) / 6.0
        rz += h * (az + 2.0 * bz + 2.0 * cz + dz) / 6.0
    return (rx, ry, rz)


def ode_trajectory(params: QubitParams, times, dt: float) -> list[BlochState]:
    """Integrate the Bloch equations once, recording the state at each requested time.

    `times` must be non-decreasing and non-negative; `dt` is the maximum step.
    Segments between consecutive record times are covered by whole steps, so
    every record time is hit exactly.
    """
    if dt <= 0:
        raise ValueError(f"step must be positive, got {dt}")
    if dt > _max_step(params):
        raise StepTooLarge(
            f"step {dt:.6g} exceeds accuracy bound {_max_step(params):.6g} "
            f"= 1/(10*max(omega, 2*kappa))"
        )
    damped_frequency(params)  # reject overdamped parameters up front
    out: list[BlochState] = []
    state = (0.0, 0.0, 1.0)
    t_prev = 0.0
    for t in times:
        if t < 0:
            raise NegativeTime(f"evolution time must be >= 0, got {t}")
        if t < t_prev:
            raise ValueError("record times must be non-decreasing")
        state = _rk4_span(params, state, t - t_prev, dt)
        out.append(BlochState(rx=state[0], ry=state[1], rz=state[2], t=t))
        t_prev = t
    return out


def ode_evolve(params: QubitParams, t_end: float, dt: float) -> BlochState:
    """Bloch state at t_end from fixed-step 4th-order integration (global error O(dt^4))."""
    return ode_trajectory(params, [t_end], dt)[0]
