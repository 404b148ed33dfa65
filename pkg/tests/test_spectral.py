import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from pffiber.hamiltonian import build_H, build_model
from pffiber.spectral import (
    EnergyCache,
    SpectrumReport,
    cluster_degeneracy,
    convergence_study,
    default_trial_set,
    delta_gap,
    free_delta_gap,
    ground_data,
    low_spectrum,
    low_spectrum_iterative,
    params_fingerprint,
)


def test_low_spectrum_small_diagonal():
    vals, vecs = low_spectrum(np.diag([3.0, 1.0, 2.0]), 2)
    assert_allclose(vals, [1.0, 2.0])
    gram = vecs.conj().T @ vecs
    assert_allclose(gram, np.eye(2), atol=1e-10)


def test_low_spectrum_contract_violations():
    with pytest.raises(ValueError):
        low_spectrum(np.eye(3), 0)
    with pytest.raises(ValueError):
        low_spectrum(np.eye(3), 4)


def test_low_spectrum_matches_free_oracle(default_params):
    model = build_model(default_params.replace(e=0.0))
    P = np.array([0.9, 0.0, 0.0])
    h = build_H(P, model)
    vals, _ = low_spectrum(h, 6)
    rel = P[None, :] - model.pf
    fock = (
        model.params.gamma * np.sqrt(np.sum(rel * rel, axis=1) + model.params.M**2)
        + model.hf
    )
    closed = np.sort(np.concatenate([fock, fock]))[:6]
    assert np.max(np.abs(vals - closed)) <= 1e-10


def test_iterative_agrees_with_dense(small_params):
    model = build_model(small_params.replace(N_max=3))
    h = build_H(np.array([0.5, 0.0, 0.0]), model)
    dense, _ = low_spectrum(h, 5)
    krylov, _ = low_spectrum_iterative(h, 5)
    assert_allclose(krylov, dense, atol=1e-8)


def test_ground_data_iterative_fallback(small_params):
    model = build_model(small_params.replace(N_max=3))
    P = np.array([0.5, 0.0, 0.0])
    dense = ground_data(P, model)
    krylov = ground_data(P, model, dense_dim_limit=10)
    assert krylov[0] == pytest.approx(dense[0], abs=1e-8)
    assert krylov[1] == pytest.approx(dense[1], abs=1e-8)
    assert krylov[2] == dense[2]


def test_cluster_examples():
    assert cluster_degeneracy([1.0, 1.0 + 1e-12, 2.0], 1e-9) == [
        (pytest.approx(1.0), 2),
        (2.0, 1),
    ]
    assert cluster_degeneracy([1.0, 2.0, 3.5], 1e-9) == [(1.0, 1), (2.0, 1), (3.5, 1)]
    with pytest.raises(ValueError):
        cluster_degeneracy([2.0, 1.0], 1e-9)


def test_free_spectrum_all_even_multiplicities(default_params):
    model = build_model(default_params.replace(e=0.0))
    vals = np.linalg.eigvalsh(build_H(np.array([0.3, 0, 0]), model))
    assert all(c[1] % 2 == 0 for c in cluster_degeneracy(vals, 1e-9))


def test_ground_data_free_oracle(default_params):
    p = default_params.replace(e=0.0)
    model = build_model(p)
    e0, e1, mult = ground_data(np.zeros(3), model)
    assert e0 == pytest.approx(p.gamma * p.M, abs=1e-12)
    assert mult == 2
    # cheapest one-photon level, enumerated independently
    expected_e1 = min(
        p.gamma * math.sqrt(k @ k + p.M**2) + om
        for k, om in zip(model.table.k, model.table.omega)
    )
    assert e1 == pytest.approx(expected_e1, abs=1e-10)


def test_ground_multiplicity_exactly_two_with_coupling(default_model):
    for px in (0.0, 1.0, 2.0):
        _, _, mult = ground_data(np.array([px, 0.0, 0.0]), default_model)
        assert mult == 2


def test_parity_of_ground_energy(default_model):
    P = np.array([1.2, 0.0, 0.0])
    ep, _, _ = ground_data(P, default_model)
    em, _, _ = ground_data(-P, default_model)
    assert abs(ep - em) <= 1e-10


def test_delta_ceiling_and_free_match(default_params, default_model):
    P = np.array([1.4, 0.0, 0.0])
    assert delta_gap(P, default_model) <= default_params.m_ph + 1e-12
    p0 = default_params.replace(e=0.0)
    model0 = build_model(p0)
    trial = default_trial_set(model0)
    assert delta_gap(P, model0) == pytest.approx(
        free_delta_gap(P, p0, trial), abs=1e-10
    )


def test_delta_monotone_under_trial_inclusion(default_model):
    P = np.array([0.8, 0.0, 0.0])
    full = default_trial_set(default_model)
    sub = full[:3]
    assert delta_gap(P, default_model, trial_k_set=full) <= delta_gap(
        P, default_model, trial_k_set=sub
    ) + 1e-14


def test_delta_positive_under_gap_hypotheses(default_model):
    for px in (0.0, 1.0, 2.0):
        assert delta_gap(np.array([px, 0.0, 0.0]), default_model) > 0.0


def test_cache_hit_equals_recompute(default_model):
    cache = EnergyCache()
    P = np.array([0.6, 0.0, 0.0])
    first = ground_data(P, default_model, cache=cache)
    again = ground_data(P, default_model, cache=cache)
    fresh = ground_data(P, default_model)
    assert first == again == fresh
    assert cache.hits == 1 and cache.misses == 1


def test_cache_roundtrip(tmp_path, default_model):
    path = tmp_path / "cache.json"
    cache = EnergyCache(path=str(path))
    P = np.array([0.5, 0.0, 0.0])
    value = ground_data(P, default_model, cache=cache)
    cache.save()
    reloaded = EnergyCache(path=str(path))
    assert reloaded.get(EnergyCache.key(default_model.params, P)) == value


def test_fingerprint_distinguishes_params(default_params):
    a = params_fingerprint(default_params)
    b = params_fingerprint(default_params.replace(e=default_params.e + 1e-12))
    assert a != b


def test_convergence_free_theory_exact(small_params):
    p = small_params.replace(e=0.0)
    rows = convergence_study(np.array([0.7, 0, 0]), p, [(0, 1), (1, 1), (2, 1)])
    energies = [r["E"] for r in rows]
    # vacuum is exact at e = 0: rungs agree to eigensolver rounding
    assert max(energies) - min(energies) <= 1e-13
    assert rows[0]["E"] == pytest.approx(p.gamma * math.sqrt(0.49 + p.M**2))


def test_convergence_nmax0_is_vacuum_expectation(small_params):
    rows = convergence_study(np.zeros(3), small_params, [(0, 1)])
    model = build_model(small_params.replace(N_max=0))
    h = build_H(np.zeros(3), model)
    assert rows[0]["E"] == pytest.approx(np.linalg.eigvalsh(h)[0], abs=1e-12)


def test_convergence_differences_shrink(small_params):
    rows = convergence_study(
        np.array([0.5, 0, 0]), small_params, [(0, 1), (1, 1), (2, 1)]
    )
    diffs = [abs(r["diff_prev"]) for r in rows if r["diff_prev"] is not None]
    assert diffs[1] <= diffs[0]


def test_report_serialization():
    rep = SpectrumReport(
        P=(0.0, 0.0, 0.0), E=0.5, E1=1.0, ground_multiplicity=2,
        delta=0.4, sigma_minus=0.6, eigencount_below_sigma=2,
        residuals={"eigenpair": 1e-12},
    )
    data = json.loads(rep.to_json())
    assert data["E"] == 0.5
    assert data["residuals"]["eigenpair"] == 1e-12
