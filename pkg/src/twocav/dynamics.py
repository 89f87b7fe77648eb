"""Damping-rate models and time evolution of window density matrices.

Two engines are provided: a fixed-step RK4 integration of the coupled
16-equation system, and a closed-form propagator for the vacuum-reservoir
case (nbar = 0, n1 = m1) re-derived by integrating the same cascade.  Both
are driven by the accumulated decoherence Theta(t), whose derivative is the
instantaneous damping rate, so Markovian and non-Markovian runs differ only
in the rate model.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import DomainError, IntegrationError, OverflowGuardError
from .states import FockWindow

OVERFLOW_EXPONENT = 700.0

LEAKY = "leaky"
PAPER_CLOSURE = "paper"


@dataclass(frozen=True)
class Markovian:
    """Constant damping rate gamma_m; time axis is gamma_m * t."""

    gamma_m: float = 1.0

    def __post_init__(self):
        if self.gamma_m <= 0:
            raise DomainError("gamma_m must be positive")


@dataclass(frozen=True)
class NonMarkovianOhmic:
    """Ohmic-reservoir accumulated decoherence; time axis is omega0 * t.

    r is the cutoff ratio omega_c / omega0.
    """

    omega0: float = 1.0
    r: float = 1.0

    def __post_init__(self):
        if self.omega0 <= 0 or self.r <= 0:
            raise DomainError("omega0 and r must be positive")


@dataclass(frozen=True)
class KernelIntegral:
    """Rate from the Ohmic dissipation kernel, gamma(t) = 2 wc (1 - e^{-wc t})."""

    omega_c: float = 1.0

    def __post_init__(self):
        if self.omega_c <= 0:
            raise DomainError("omega_c must be positive")


@dataclass(frozen=True)
class EvolutionParams:
    window: FockWindow = field(default_factory=FockWindow)
    nbar: float = 0.0
    closure_mode: str = LEAKY
    rho13_strict: bool = False

    def __post_init__(self):
        if self.nbar < 0:
            raise DomainError("nbar must be non-negative")
        if self.closure_mode not in (LEAKY, PAPER_CLOSURE):
            raise DomainError("closure_mode must be 'leaky' or 'paper'")


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (len(times), 4, 4)


def gamma_nonmarkov(t, r):
    """Accumulated decoherence of the Ohmic model at dimensionless time t.

    Evaluated exactly as printed, growing exponentials included; arguments
    with r*t > 700 raise instead of overflowing.
    """
    if t < 0:
        raise DomainError("time must be non-negative")
    if r <= 0:
        raise DomainError("cutoff ratio r must be positive")
    if r * t > OVERFLOW_EXPONENT:
        raise OverflowGuardError(
            "exp(%g) in the Ohmic decoherence would overflow" % (r * t)
        )
    pre = 8.0 * r**2 / (1.0 + r**2)
    e = math.exp(r * t)
    bracket = (
        t
        + (r - 1.0) / (1.0 + r**2) * e * math.sin(t)
        + 2.0 * r / (1.0 + r**2) * (e * math.cos(t) - 1.0)
    )
    return pre * bracket


def gamma_nonmarkov_rate(t, r):
    """Term-by-term derivative of gamma_nonmarkov with respect to t."""
    if t < 0:
        raise DomainError("time must be non-negative")
    if r <= 0:
        raise DomainError("cutoff ratio r must be positive")
    if r * t > OVERFLOW_EXPONENT:
        raise OverflowGuardError(
            "exp(%g) in the Ohmic rate would overflow" % (r * t)
        )
    pre = 8.0 * r**2 / (1.0 + r**2)
    e = math.exp(r * t)
    s, c = math.sin(t), math.cos(t)
    bracket = (
        1.0
        + (r - 1.0) / (1.0 + r**2) * e * (r * s + c)
        + 2.0 * r / (1.0 + r**2) * e * (r * c - s)
    )
    return pre * bracket


def gamma_kernel(t, omega_c):
    """Kernel-integrated rate 2 wc (1 - exp(-wc t))."""
    if t < 0:
        raise DomainError("time must be non-negative")
    if omega_c <= 0:
        raise DomainError("omega_c must be positive")
    return 2.0 * omega_c * (-math.expm1(-omega_c * t))


def gamma_kernel_quadrature(t, omega_c):
    """Numeric double quadrature of the dissipation kernel (oracle).

    Integrates the Ohmic spectral density against sin(w s) over w (Fourier
    quadrature on the infinite interval), then over s on [0, t].
    """

    def inner(s):
        val, _ = integrate.quad(
            lambda w: (2.0 * w / math.pi) * omega_c**2 / (omega_c**2 + w**2),
            0.0,
            np.inf,
            weight="sin",
            wvar=s,
            limit=200,
        )
        return 2.0 * val

    val, _ = integrate.quad(inner, 0.0, t, limit=200)
    return val


def instantaneous_rate(model, t):
    """Rate theta(t) entering the equations of motion."""
    if t < 0:
        raise DomainError("time must be non-negative")
    if isinstance(model, Markovian):
        return model.gamma_m
    if isinstance(model, NonMarkovianOhmic):
        return gamma_nonmarkov_rate(t, model.r)
    if isinstance(model, KernelIntegral):
        return gamma_kernel(t, model.omega_c)
    raise TypeError("unknown damping model %r" % (model,))


def accumulated_theta(model, t):
    """Accumulated decoherence Theta(t); d(Theta)/dt = instantaneous_rate."""
    if t < 0:
        raise DomainError("time must be non-negative")
    if isinstance(model, Markovian):
        return model.gamma_m * t
    if isinstance(model, NonMarkovianOhmic):
        return gamma_nonmarkov(t, model.r)
    if isinstance(model, KernelIntegral):
        wc = model.omega_c
        return 2.0 * wc * t + 2.0 * math.expm1(-wc * t)
    raise TypeError("unknown damping model %r" % (model,))


def ode_rhs(rho, t, params, model):
    """Right-hand side of the coupled 16-equation window system.

    The equations follow the printed cascade, with two documented
    adjustments: the coherence rho14/rho41 decays at rate
    theta*(n1+m1+2) (the printed index product is inconsistent with the
    vacuum closed forms), and the extra theta/2 term of rho13/rho31 takes
    an nbar factor unless params.rho13_strict is set.  In paper-closure
    mode the rho44 row is replaced by the trace-closure constraint.
    """
    th = instantaneous_rate(model, t)
    return _rhs_with_rate(rho, th, params)


def _rhs_with_rate(rho, th, params):
    n1, m1 = params.window.n1, params.window.m1
    nb = params.nbar
    r = rho
    d = np.empty((4, 4), dtype=complex)

    d[0, 0] = (
        -th * (2.0 * nb * (n1 + m1 + 1) + (n1 + m1)) * r[0, 0]
        + th * (nb + 1.0) * ((n1 + 1) * r[2, 2] + (m1 + 1) * r[1, 1])
    )
    d[0, 1] = (
        -0.5 * th * (nb + 1.0) * ((2 * n1 + 2 * m1 + 1) * r[0, 1] - 2 * (n1 + 1) * r[2, 3])
        - 0.5 * th * nb * (2 * n1 + m1 + 3) * r[0, 1]
    )
    rho13_factor = 1.0 if params.rho13_strict else nb
    d[0, 2] = (
        -0.5 * th * (nb + 1.0) * ((2 * n1 + 2 * m1 + 1) * r[0, 2] - 2 * (n1 + 1) * r[1, 3])
        - 0.5 * th * rho13_factor * (2 * n1 + m1 + 3) * r[0, 2]
    )
    d[0, 3] = (
        -th * (n1 + m1 + 2) * r[0, 3]
        - 0.5 * th * nb * (n1 + m1 + 2) * r[0, 3]
    )
    d[1, 0] = (
        -0.5 * th * (nb + 1.0) * ((2 * n1 + 2 * m1 + 1) * r[1, 0] - 2 * (n1 + 1) * r[3, 2])
        - 0.5 * th * nb * (2 * n1 + m1 + 3) * r[1, 0]
    )
    d[1, 1] = (
        -th * (nb + 1.0) * ((n1 + m1 + 1) * r[1, 1] - (n1 + 1) * r[3, 3])
        - th * nb * ((n1 + 1) * r[1, 1] - (m1 + 1) * r[0, 0])
    )
    d[1, 2] = (
        -th * (nb + 1.0) * (n1 + m1 + 1) * r[1, 2]
        - 0.5 * th * nb * (n1 + m1 + 2) * r[1, 2]
    )
    d[1, 3] = (
        -0.5 * th * (nb + 1.0) * (2 * n1 + 2 * m1 + 3) * r[1, 3]
        - 0.5 * th * nb * ((n1 + 1) * r[1, 3] - 2 * (m1 + 1) * r[0, 2])
    )
    d[2, 0] = (
        -0.5 * th * (nb + 1.0) * ((2 * n1 + 2 * m1 + 1) * r[2, 0] - 2 * (n1 + 1) * r[3, 1])
        - 0.5 * th * rho13_factor * (2 * n1 + m1 + 3) * r[2, 0]
    )
    d[2, 1] = (
        -th * (nb + 1.0) * (n1 + m1 + 1) * r[2, 1]
        - 0.5 * th * nb * (n1 + m1 + 2) * r[2, 1]
    )
    d[2, 2] = (
        -th * (nb + 1.0) * ((n1 + m1 + 1) * r[2, 2] - (m1 + 1) * r[3, 3])
        - th * nb * ((m1 + 1) * r[2, 2] - (n1 + 1) * r[0, 0])
    )
    d[2, 3] = (
        -0.5 * th * (nb + 1.0) * (2 * n1 + 2 * m1 + 3) * r[2, 3]
        - 0.5 * th * nb * ((m1 + 1) * r[2, 3] - 2 * (n1 + 1) * r[0, 1])
    )
    d[3, 0] = (
        -th * (n1 + m1 + 2) * r[3, 0]
        - 0.5 * th * nb * (n1 + m1 + 2) * r[3, 0]
    )
    d[3, 1] = (
        -0.5 * th * (nb + 1.0) * (2 * n1 + 2 * m1 + 3) * r[3, 1]
        - 0.5 * th * nb * ((n1 + 1) * r[3, 1] - 2 * (m1 + 1) * r[2, 0])
    )
    d[3, 2] = (
        -0.5 * th * (nb + 1.0) * (2 * n1 + 2 * m1 + 3) * r[3, 2]
        - 0.5 * th * nb * ((m1 + 1) * r[3, 2] - 2 * (n1 + 1) * r[1, 0])
    )
    if params.closure_mode == PAPER_CLOSURE:
        d[3, 3] = -(d[0, 0] + d[1, 1] + d[2, 2])
    else:
        d[3, 3] = (
            -th * (nb + 1.0) * (n1 + m1 + 2) * r[3, 3]
            + th * nb * ((n1 + 1) * r[1, 1] + (m1 + 1) * r[2, 2])
        )
    return d


def generator_matrix(params):
    """16 x 16 matrix A with vec(d rho/dt) = theta(t) * A vec(rho).

    The system is linear and every term scales with the instantaneous
    rate, so the generator is probed once from the element-wise equations
    at unit rate.
    """
    a = np.empty((16, 16), dtype=complex)
    for k in range(16):
        basis = np.zeros(16, dtype=complex)
        basis[k] = 1.0
        a[:, k] = _rhs_with_rate(basis.reshape(4, 4), 1.0, params).ravel()
    return a


def evolve_ode(rho0, params, model, times, substeps=100):
    """Fixed-step RK4 integration, recording the state at each grid time.

    Each output interval is split into `substeps` RK4 steps; the state is
    re-symmetrized (rho -> (rho + rho^dagger)/2) at every output point.
    """
    times = np.asarray(times, dtype=float)
    if times[0] != 0.0:
        raise DomainError("time grid must start at 0")
    if np.any(np.diff(times) <= 0):
        raise DomainError("time grid must be strictly increasing")
    if substeps < 1:
        raise DomainError("substeps must be >= 1")

    gen = generator_matrix(params)
    rho = np.array(rho0, dtype=complex).ravel()
    out = np.empty((len(times), 4, 4), dtype=complex)
    out[0] = rho.reshape(4, 4)
    for k in range(len(times) - 1):
        t0, t1 = times[k], times[k + 1]
        h = (t1 - t0) / substeps
        t = t0
        # Non-finite blow-ups are caught below; keep numpy quiet meanwhile.
        with np.errstate(over="ignore", invalid="ignore"):
            for _ in range(substeps):
                th0 = instantaneous_rate(model, t)
                th1 = instantaneous_rate(model, t + 0.5 * h)
                th2 = instantaneous_rate(model, t + h)
                k1 = th0 * (gen @ rho)
                k2 = th1 * (gen @ (rho + 0.5 * h * k1))
                k3 = th1 * (gen @ (rho + 0.5 * h * k2))
                k4 = th2 * (gen @ (rho + h * k3))
                rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                t += h
        if not np.all(np.isfinite(rho)):
            raise IntegrationError(
                "state became non-finite at t = %g" % t1, time=float(t1)
            )
        mat = rho.reshape(4, 4)
        mat = 0.5 * (mat + mat.conj().T)
        rho = mat.ravel()
        out[k + 1] = mat
    return Trajectory(times=times.copy(), states=out)


def evolve_analytic_vacuum(rho0, theta, m1, rho13_strict=False):
    """Closed-form vacuum-reservoir propagator for n1 = m1 windows.

    `theta` is the accumulated decoherence Theta(t).  The exponents come
    from integrating the cascade directly; they agree with evolve_ode to
    integrator accuracy, which is the contract (the printed solutions
    contain exponent typos, kept in the errata module).
    """
    if m1 < 0:
        raise DomainError("m1 must be non-negative")
    m = m1
    r0 = np.asarray(rho0, dtype=complex)

    def E(k):
        return math.exp(-k * theta)

    mp1 = m + 1.0
    s0 = r0[1, 1] + r0[2, 2]
    out = np.empty((4, 4), dtype=complex)

    out[3, 3] = r0[3, 3] * E(2 * m + 2)
    out[1, 1] = (r0[1, 1] + mp1 * r0[3, 3]) * E(2 * m + 1) - mp1 * r0[3, 3] * E(2 * m + 2)
    out[2, 2] = (r0[2, 2] + mp1 * r0[3, 3]) * E(2 * m + 1) - mp1 * r0[3, 3] * E(2 * m + 2)
    out[0, 0] = (
        (r0[0, 0] + mp1 * s0 + mp1**2 * r0[3, 3]) * E(2 * m)
        - mp1 * (s0 + 2.0 * mp1 * r0[3, 3]) * E(2 * m + 1)
        + mp1**2 * r0[3, 3] * E(2 * m + 2)
    )

    out[0, 3] = r0[0, 3] * E(2 * m + 2)
    out[3, 0] = r0[3, 0] * E(2 * m + 2)
    out[1, 2] = r0[1, 2] * E(2 * m + 1)
    out[2, 1] = r0[2, 1] * E(2 * m + 1)

    e_slow = E((4 * m + 1) / 2.0)
    e_fast = E((4 * m + 3) / 2.0)
    out[1, 3] = r0[1, 3] * e_fast
    out[3, 1] = r0[3, 1] * e_fast
    out[2, 3] = r0[2, 3] * e_fast
    out[3, 2] = r0[3, 2] * e_fast
    out[0, 1] = (r0[0, 1] + mp1 * r0[2, 3]) * e_slow - mp1 * r0[2, 3] * e_fast
    out[1, 0] = (r0[1, 0] + mp1 * r0[3, 2]) * e_slow - mp1 * r0[3, 2] * e_fast

    if rho13_strict:
        # Extra theta/2 decay term without the nbar factor, as printed.
        e_strict = E((7 * m + 4) / 2.0)
        c13 = 2.0 * mp1 * r0[1, 3] / (3 * m + 1.0)
        c31 = 2.0 * mp1 * r0[3, 1] / (3 * m + 1.0)
        out[0, 2] = (r0[0, 2] - c13) * e_strict + c13 * e_fast
        out[2, 0] = (r0[2, 0] - c31) * e_strict + c31 * e_fast
    else:
        out[0, 2] = (r0[0, 2] + mp1 * r0[1, 3]) * e_slow - mp1 * r0[1, 3] * e_fast
        out[2, 0] = (r0[2, 0] + mp1 * r0[3, 1]) * e_slow - mp1 * r0[3, 1] * e_fast

    return out


def evolve_analytic_trajectory(rho0, model, times, m1, rho13_strict=False):
    """Analytic propagator applied at Theta(t) for each grid time."""
    times = np.asarray(times, dtype=float)
    out = np.empty((len(times), 4, 4), dtype=complex)
    for k, t in enumerate(times):
        out[k] = evolve_analytic_vacuum(
            rho0, accumulated_theta(model, t), m1, rho13_strict=rho13_strict
        )
    return Trajectory(times=times.copy(), states=out)


TRAJECTORY_COLUMNS = ["t"]
for _i in range(1, 5):
    for _j in range(1, 5):
        TRAJECTORY_COLUMNS += ["re%d%d" % (_i, _j), "im%d%d" % (_i, _j)]
TRAJECTORY_COLUMNS += ["trace", "min_eigenvalue"]


def trajectory_rows(traj):
    """Row-major CSV rows (t, re/im of all 16 entries, trace, min eig)."""
    rows = []
    for t, rho in zip(traj.times, traj.states):
        row = [t]
        for i in range(4):
            for j in range(4):
                row += [rho[i, j].real, rho[i, j].imag]
        herm = 0.5 * (rho + rho.conj().T)
        row += [float(np.real(np.trace(rho))), float(np.linalg.eigvalsh(herm)[0])]
        rows.append(row)
    return rows
