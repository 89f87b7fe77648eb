"""Two-qubit teleportation through a window-state channel.

The channel map weights Pauli corrections by products of Bell-projector
overlaps with the channel state.  Two index orderings of the right-hand
Pauli factor are implemented; 'printed' is the default, chosen because it
reproduces the closed-form output blocks exactly.  Closed-form fast paths
cover the two X-structured channel families.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import correlations
from .errors import DomainError, PatternError

PRINTED = "printed"
SYMMETRIC = "symmetric"

_I2 = np.eye(2)
_SX = np.array([[0.0, 1.0], [1.0, 0.0]])
_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]])
_PAULI = (_I2, _SX, _SY, _SZ)


def _bell(v):
    v = np.asarray(v, dtype=complex) / math.sqrt(2.0)
    return np.outer(v, v.conj())

# Projector order matches the Pauli order (identity, x, y, z).
BELL_PROJECTORS = (
    _bell([0.0, 1.0, -1.0, 0.0]),   # E^0 = |psi->
    _bell([1.0, 0.0, 0.0, -1.0]),   # E^x = |phi->
    _bell([1.0, 0.0, 0.0, 1.0]),    # E^y = |phi+>
    _bell([0.0, 1.0, 1.0, 0.0]),    # E^z = |psi+>
)


@dataclass
class InputState:
    p: float
    q: float
    matrix: np.ndarray = field(init=False)
    non_physical: bool = field(init=False)

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise DomainError("p must lie in [0, 1]")
        if self.q <= 0.0:
            raise DomainError("q must be positive")
        m = np.zeros((4, 4), dtype=complex)
        m[0, 0] = (1.0 - 2.0 * self.p) / 2.0
        m[3, 3] = (1.0 + 2.0 * self.p) / 2.0
        m[0, 3] = m[3, 0] = self.q / 2.0
        self.matrix = m
        self.non_physical = bool(np.linalg.eigvalsh(m)[0] < -1e-12)


def input_state(p, q):
    return InputState(p=p, q=q)


@dataclass
class TeleportResult:
    rho_out: np.ndarray
    fidelity: float
    probabilities: np.ndarray  # P_{alpha beta}, shape (4, 4)
    non_physical_input: bool


def bell_weights(channel):
    """Overlaps Tr[E^alpha rho_ch] in Pauli order (0, x, y, z)."""
    rho = np.asarray(channel, dtype=complex)
    return np.array([float(np.real(np.trace(e @ rho))) for e in BELL_PROJECTORS])


def teleport_general(channel, inp, index_order=PRINTED):
    """Teleport an input state through an arbitrary channel state.

    rho_out = sum_{ab} P_ab (sigma_a x sigma_b) rho_in (R_ab) with
    R_ab = sigma_b x sigma_a ('printed') or sigma_a x sigma_b
    ('symmetric'); P_ab is the product of Bell overlaps.
    """
    if index_order not in (PRINTED, SYMMETRIC):
        raise DomainError("index_order must be 'printed' or 'symmetric'")
    w = bell_weights(channel)
    probs = np.outer(w, w)
    rho_in = inp.matrix
    out = np.zeros((4, 4), dtype=complex)
    for a in range(4):
        for b in range(4):
            left = np.kron(_PAULI[a], _PAULI[b])
            right = np.kron(_PAULI[b], _PAULI[a]) if index_order == PRINTED else left
            out += probs[a, b] * (left @ rho_in @ right)
    fid = float(np.real(np.trace(rho_in @ out)))
    return TeleportResult(
        rho_out=out,
        fidelity=fid,
        probabilities=probs,
        non_physical_input=inp.non_physical,
    )


def _require_pattern(channel, zero_positions):
    rho = np.asarray(channel, dtype=complex)
    for i, j in zero_positions:
        if abs(rho[i, j]) > 1e-10:
            raise PatternError("channel entry (%d, %d) must vanish" % (i + 1, j + 1))
    return rho

_EPR_ZEROS = [(i, j) for i in range(4) for j in range(4)
              if i != j and (i, j) not in ((0, 3), (3, 0))]
_NOON_ZEROS = [(i, j) for i in range(4) for j in range(4)
               if i != j and (i, j) not in ((1, 2), (2, 1))]


def closed_form_epr(channel, p, q):
    """Output-state coefficients (k1, k2, k3) for an anti-diagonal X channel."""
    rho = _require_pattern(channel, _EPR_ZEROS)
    s = float(np.real(rho[1, 1] + rho[2, 2]))
    v = float(np.real(rho[0, 0] + rho[3, 3]))
    k1 = 0.5 * (1.0 - 2.0 * p) * s**2 + 0.5 * (1.0 + 2.0 * p) * v**2
    k2 = 2.0 * q * float(np.real(rho[0, 3])) ** 2
    k3 = v * s
    return k1, k2, k3


def closed_form_noon(channel, p, q):
    """Output-state coefficients (a1, a2, a3) for an inner-block X channel."""
    rho = _require_pattern(channel, _NOON_ZEROS)
    s = float(np.real(rho[1, 1] + rho[2, 2]))
    r11 = float(np.real(rho[0, 0]))
    a1 = 0.5 * (1.0 - 2.0 * p) * s**2 + 0.5 * (1.0 + 2.0 * p) * r11**2
    a2 = 2.0 * q * float(np.real(rho[1, 2])) ** 2
    a3 = r11 * s
    return a1, a2, a3


def closed_form_matrix(c1, c2, c3):
    """Assemble the closed-form output block (c1 diag corners, c2/c3 cross)."""
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = m[3, 3] = c1
    m[0, 3] = m[3, 0] = c2
    m[1, 2] = m[2, 1] = c3
    return m


def closed_form_fidelity(c1, c2, q):
    return c1 + q * c2


def closed_form_measures(c1, c2, c3):
    """Closed-form concurrence, log-negativity and discord of the output.

    Eigenvalue sums skip non-positive values, since the closed-form block
    is not normalized for every parameter choice.
    """
    conc = max(0.0, 2.0 * (c3 - c1), 2.0 * c2)
    ln = max(0.0, math.log2(1.0 + 2.0 * max(0.0, c2 + c3 - c1)))
    lam = np.array([c1 + c2, c1 - c2, c3, -c3])
    ssum = 0.0
    for v in lam:
        if v > 1e-15:
            ssum += v * math.log2(v)
    h = correlations._h2
    s = 0.5 * (1.0 + math.sqrt((1.0 - 2.0 * c1) ** 2 + 4.0 * (c2 + c3) ** 2))
    q1 = h(c1) + ssum + h(s)
    q2 = ssum + 2.0 * c1
    return {"concurrence": conc, "log_negativity": ln, "discord": min(q1, q2)}


def teleported_measures(result, discord_variant=correlations.DISCORD_CORRECTED):
    """Correlation measures of the (renormalized) teleported state."""
    rho = np.asarray(result.rho_out, dtype=complex)
    tr = float(np.real(np.trace(rho)))
    if tr <= 0.0:
        raise DomainError("teleported state has non-positive trace")
    return correlations.correlation_report(rho / tr, discord_variant=discord_variant)
