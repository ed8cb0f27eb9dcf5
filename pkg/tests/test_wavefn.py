import math

import numpy as np
import pytest

from tietz_spectra.errors import DomainError, LevelIndexError, LevelMismatchError, RegimeError
from tietz_spectra.model import PotentialParams, classify_regime, fit_centrifugal_approx
from tietz_spectra.oracle import numerov_wavefunction
from tietz_spectra.spectra import BoundLevel, Method, levels_for
from tietz_spectra.wavefn import (case1_log_norm, case1_wavefunction, case2_wavefunction,
                                  case3_wavefunction, edge_ratios, evaluate, make_wavefunction,
                                  morse_wavefunction, node_count, norm, overlap,
                                  quadrature_log_norm, sample, schrodinger_residual)

CASE1 = PotentialParams.natural(D=10.0, r_e=2.0, b_h=1.0, c_h=0.5)
CASE2 = PotentialParams.natural(D=10.0, r_e=2.0, b_h=1.0, c_h=0.05)
CASE3 = PotentialParams.natural(D=10.0, r_e=2.0, b_h=1.0, c_h=-0.3)
MORSE = PotentialParams.natural(D=25.0, r_e=10.0, b_h=1.0, c_h=0.0)


def _states():
    out = []
    for l in (0, 1, 2):
        out += [(CASE1, lv) for lv in levels_for(CASE1, l)]
    for p in (CASE2, CASE3, MORSE):
        out += [(p, lv) for lv in levels_for(p)]
    return out


STATES = _states()
IDS = [f"{classify_regime(p).kind.value}-l{lv.l}-n{lv.n_r}" for p, lv in STATES]


@pytest.mark.parametrize("p, level", STATES, ids=IDS)
def test_normalized(p, level):
    assert norm(make_wavefunction(p, level)) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("p, level", STATES, ids=IDS)
def test_node_count(p, level):
    assert node_count(make_wavefunction(p, level)) == level.n_r


@pytest.mark.parametrize("p, level", STATES, ids=IDS)
def test_boundary_decay(p, level):
    left, right = edge_ratios(make_wavefunction(p, level))
    assert left <= 1e-8
    assert right <= 1e-8


@pytest.mark.parametrize("p, level", STATES, ids=IDS)
def test_schrodinger_residual(p, level):
    assert schrodinger_residual(make_wavefunction(p, level)) <= 1e-5


@pytest.mark.parametrize("p, level", [s for s in STATES if s[0] is CASE1],
                         ids=[i for i, s in zip(IDS, STATES) if s[0] is CASE1])
def test_case1_analytic_normalization(p, level):
    spec = make_wavefunction(p, level)
    assert spec.log_norm == case1_log_norm(p, level, fit_centrifugal_approx(p))
    assert math.exp(spec.log_norm - quadrature_log_norm(spec)) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("p, level", STATES, ids=IDS)
def test_sign_convention(p, level):
    r, chi = sample(make_wavefunction(p, level))
    first = np.nonzero(np.abs(chi) > 1e-3 * np.max(np.abs(chi)))[0][0]
    assert chi[first] > 0


@pytest.mark.parametrize("p", [CASE1, MORSE, CASE2])
def test_orthogonality(p):
    ground, excited = (make_wavefunction(p, lv) for lv in levels_for(p)[:2])
    assert abs(overlap(ground, excited)) <= 1e-6


def test_overlap_mixed_regimes():
    a = make_wavefunction(CASE1, levels_for(CASE1)[0])
    b = make_wavefunction(MORSE, levels_for(MORSE)[0])
    with pytest.raises(RegimeError):
        overlap(a, b)


def test_matches_oracle_shape():
    level = levels_for(CASE3)[1]
    spec = make_wavefunction(CASE3, level)
    r, chi = numerov_wavefunction(CASE3, 0, level.energy)
    inside = r < spec.r_end
    analytic = evaluate(spec, r[inside][::50])
    assert np.max(np.abs(analytic - chi[inside][::50])) <= 1e-4 * np.max(np.abs(chi))


def test_case1_limits():
    level = levels_for(CASE1)[0]
    spec = make_wavefunction(CASE1, level)
    r0 = classify_regime(CASE1).r0
    peak = np.max(np.abs(sample(spec)[1]))
    assert abs(case1_wavefunction(spec, r0 + 1e-4)) < 1e-8 * peak
    assert abs(case1_wavefunction(spec, 60.0)) < 1e-8 * peak
    with pytest.raises(DomainError):
        case1_wavefunction(spec, r0)


def test_case2_case3_entry_points():
    for p, fn in ((CASE2, case2_wavefunction), (CASE3, case3_wavefunction)):
        level = levels_for(p)[0]
        r = np.array([1.0, 2.0, 3.0])
        np.testing.assert_allclose(fn(p, level, r), evaluate(make_wavefunction(p, level), r))
        with pytest.raises(DomainError):
            fn(p, level, 0.0)


def test_level_mismatch():
    true = levels_for(CASE2)[0]
    wrong = BoundLevel(0, 0, true.energy * 1.01, Method.TRANSCENDENTAL_CASE2)
    with pytest.raises(LevelMismatchError):
        case2_wavefunction(CASE2, wrong, 1.0)
    wrong3 = BoundLevel(0, 0, levels_for(CASE3)[0].energy * 0.99, Method.TRANSCENDENTAL_CASE3)
    with pytest.raises(LevelMismatchError):
        case3_wavefunction(CASE3, wrong3, 1.0)


def test_morse_nodes_and_index():
    ground, first = levels_for(MORSE)[:2]
    r = np.linspace(5.0, 20.0, 3001)
    chi0 = morse_wavefunction(MORSE, ground, r)
    assert np.all(chi0 > 0)
    chi1 = morse_wavefunction(MORSE, first, r)
    keep = chi1[np.abs(chi1) > 1e-9 * np.max(np.abs(chi1))]
    assert np.count_nonzero(keep[:-1] * keep[1:] < 0) == 1
    with pytest.raises(LevelIndexError):
        make_wavefunction(MORSE, BoundLevel(5, 0, 24.9, Method.MORSE))


def test_s_wave_only_outside_case1():
    level = BoundLevel(0, 1, levels_for(CASE2)[0].energy, Method.TRANSCENDENTAL_CASE2)
    with pytest.raises(RegimeError):
        make_wavefunction(CASE2, level)
