import math

import numpy as np
import pytest

from twocav import states
from twocav.errors import DegenerateStateError, DomainError
from twocav.states import FockWindow

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def test_window_rejects_negative_indices():
    with pytest.raises(DomainError):
        FockWindow(-1, 0)
    with pytest.raises(DomainError):
        FockWindow(0, -2)


def test_window_basis_labels():
    assert FockWindow(2, 5).basis_labels() == [(2, 5), (2, 6), (3, 5), (3, 6)]


def test_thermal_occupation_zero_temperature_is_exact_zero():
    assert states.thermal_occupation(0.0, 1e9) == 0.0


def test_thermal_occupation_ln2_point():
    # hbar*nu/(kB*T) = ln 2 gives occupation exactly 1.
    from scipy.constants import hbar, k as k_b

    t = 300.0
    nu = math.log(2.0) * k_b * t / hbar
    assert states.thermal_occupation(t, nu) == pytest.approx(1.0, abs=1e-12)


def test_thermal_occupation_monotone_vanishing():
    nu = 1e12
    vals = [states.thermal_occupation(t, nu) for t in (100.0, 10.0, 1.0, 0.1)]
    assert all(x > y for x, y in zip(vals, vals[1:]))
    assert vals[-1] < 1e-30


def test_thermal_occupation_domain_errors():
    with pytest.raises(DomainError):
        states.thermal_occupation(-1.0, 1e9)
    with pytest.raises(DomainError):
        states.thermal_occupation(1.0, 0.0)


def test_coherent_amplitudes_vacuum_raw_values():
    amp = states.coherent_amplitudes_paper(0.0, FockWindow(0, 0))
    # 0**0 := 1 puts weight on the two zero-exponent slots of the printed
    # form; the b and d slots vanish.
    assert amp.raw[0] == pytest.approx(INV_SQRT2, abs=1e-15)
    assert amp.raw[1] == 0.0
    assert amp.raw[3] == 0.0


def test_coherent_amplitudes_normalized():
    for nb in (0.3, 1.0, 2.7):
        amp = states.coherent_amplitudes_paper(nb, FockWindow(1, 2))
        assert np.sum(np.abs(amp.as_vector()) ** 2) == pytest.approx(1.0, abs=1e-12)
    # A shifted window at zero occupation has no support at all.
    with pytest.raises(DegenerateStateError):
        states.coherent_amplitudes_paper(0.0, FockWindow(1, 2))


def test_coherent_amplitudes_agree_with_projection_at_unit_occupation():
    assert states.amplitude_disagreement(1.0, FockWindow(0, 0)) < 1e-12


def test_projection_amplitudes_unit_occupation():
    amp = states.projection_amplitudes(1.0, FockWindow(0, 0))
    assert np.allclose(amp.as_vector(), 0.5, atol=1e-12)


def test_projection_amplitudes_vacuum():
    amp = states.projection_amplitudes(0.0, FockWindow(0, 0))
    assert np.allclose(amp.as_vector(), [1, 0, 0, 0], atol=1e-15)


def test_projection_amplitudes_symmetric_cross_terms():
    for nb in (0.2, 1.0, 3.0):
        amp = states.projection_amplitudes(nb, FockWindow(0, 0))
        assert amp.b == pytest.approx(amp.c, abs=1e-15)


def test_degenerate_amplitudes_raise():
    # On a shifted window the printed exponents keep weight everywhere, so
    # degeneracy only happens through the projection route at n' = 0 with
    # excited window indices.
    with pytest.raises(DegenerateStateError):
        states.projection_amplitudes(0.0, FockWindow(1, 1))


def test_build_epr_pattern():
    rho = states.build_epr(INV_SQRT2, INV_SQRT2)
    assert rho[0, 0] == pytest.approx(0.5, abs=1e-12)
    assert rho[3, 3] == pytest.approx(0.5, abs=1e-12)
    assert rho[0, 3] == pytest.approx(0.5, abs=1e-12)
    assert abs(rho[1, 1]) == 0.0 and abs(rho[1, 2]) == 0.0


def test_build_epr_product_limit():
    assert np.allclose(states.build_epr(1.0, 0.0), np.diag([1, 0, 0, 0]))


def test_build_noon_pattern():
    rho = states.build_noon(INV_SQRT2, INV_SQRT2)
    assert rho[1, 1] == pytest.approx(0.5, abs=1e-12)
    assert rho[2, 2] == pytest.approx(0.5, abs=1e-12)
    assert rho[1, 2] == pytest.approx(0.5, abs=1e-12)
    assert np.allclose(states.build_noon(0.0, 1.0), np.diag([0, 0, 1, 0]))


def test_builders_reject_unnormalized_inputs():
    with pytest.raises(DomainError):
        states.build_epr(1.0, 0.5)
    with pytest.raises(DomainError):
        states.build_noon(0.9, 0.9)


def test_builder_outputs_are_valid_pure_states():
    for rho in (states.build_epr(0.6, 0.8), states.build_noon(0.28, 0.96)):
        rep = states.validate(rho, tol=1e-10)
        assert rep.is_physical
        eigs = np.linalg.eigvalsh(rho)
        assert eigs[-1] == pytest.approx(1.0, abs=1e-12)  # rank 1


def test_validate_reports():
    rep = states.validate(np.eye(4) / 4.0)
    assert rep.is_physical and rep.min_eigenvalue == pytest.approx(0.25)
    bad = np.eye(4, dtype=complex) / 4.0
    bad[0, 1] = 0.3
    assert states.validate(bad).hermiticity_defect > 0.0
    with pytest.raises(DomainError):
        states.validate(np.eye(4) / 4.0, tol=0.0)


def test_matrix_text_round_trip():
    rng = np.random.default_rng(11)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    back = states.matrix_from_text(states.matrix_to_text(m))
    assert np.array_equal(back, m)  # bit-exact round trip


def test_matrix_from_text_rejects_bad_shapes():
    with pytest.raises(DomainError):
        states.matrix_from_text("1+0j 2+0j\n")
