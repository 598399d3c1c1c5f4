import numpy as np
import pytest

from helpers import tv_distance
from qpe_lab.channels import make_channel
from qpe_lab.circuit import Circuit, build_qpe
from qpe_lab.engine import (
    PhaseDistribution,
    SimSpec,
    distribution_stats,
    qpe_distribution,
    run_exact,
    run_trajectories,
)
from qpe_lab.transpile import transpile


def _spec(n, theta, kind, p, **kw):
    return SimSpec(circuit=transpile(build_qpe(n, theta)), channel=make_channel(kind, p), **kw)


def test_exact_representable_half():
    d = run_exact(_spec(5, 0.5, "bitflip", 0.0))
    assert d.probs[16] == pytest.approx(1.0, abs=1e-10)
    assert d.mode == "exact"
    assert abs(d.probs.sum() - 1.0) <= 1e-10


def test_exact_table_theta():
    d = run_exact(_spec(5, 0.03125, "depolarizing", 0.0))
    assert d.probs[1] == pytest.approx(1.0, abs=1e-10)


def test_exact_full_depolarization_is_uniform():
    d = run_exact(_spec(5, 0.03125, "depolarizing", 1.0))
    assert np.max(np.abs(d.probs - 1 / 32)) <= 1e-6


def test_exact_state_stays_physical():
    # validity checked after every single op
    d = run_exact(_spec(3, 0.3, "bitphaseflip", 0.05), check_every=1)
    assert abs(d.probs.sum() - 1.0) <= 1e-10
    assert np.all(d.probs >= 0)


def test_exact_width_limit():
    circuit = Circuit(width=13, ops=(), measured=tuple(range(12)))
    spec = SimSpec(circuit=circuit, channel=make_channel("bitflip", 0.0))
    with pytest.raises(ValueError, match="width"):
        run_exact(spec)


def test_two_qubit_noise_policy_validation():
    with pytest.raises(ValueError, match="two_qubit_noise"):
        _spec(2, 0.25, "bitflip", 0.1, two_qubit_noise="control")


def test_policies_differ_and_none_is_weakest():
    results = {}
    for policy in ("both", "target", "none"):
        d = run_exact(_spec(4, 1 / 16, "depolarizing", 0.02, two_qubit_noise=policy))
        results[policy] = distribution_stats(d)[1]
    assert results["none"] < results["target"] < results["both"]


def test_trajectories_noiseless_deterministic_outcome():
    d = run_trajectories(_spec(3, 0.75, "bitflip", 0.0, seed=5), shots=100)
    assert d.shots == 100
    assert d.probs[6] == 1.0  # t = 0.75 * 8


def test_trajectories_seed_reproducibility():
    spec = _spec(3, 0.25, "phaseflip", 0.02, seed=77)
    a = run_trajectories(spec, 3000)
    b = run_trajectories(spec, 3000)
    assert np.array_equal(a.probs, b.probs)
    c = run_trajectories(_spec(3, 0.25, "phaseflip", 0.02, seed=78), 3000)
    assert not np.array_equal(a.probs, c.probs)


def test_trajectories_chunking_invariance():
    # chunk boundary must not change the consumed stream
    import qpe_lab.engine as engine

    spec = _spec(2, 0.25, "depolarizing", 0.05, seed=13)
    full = run_trajectories(spec, 1000)
    original = engine._TRAJECTORY_CHUNK
    engine._TRAJECTORY_CHUNK = 64
    try:
        chunked = run_trajectories(spec, 1000)
    finally:
        engine._TRAJECTORY_CHUNK = original
    assert np.array_equal(full.probs, chunked.probs)


def test_trajectories_match_exact_oracle():
    spec = _spec(3, 0.25, "bitflip", 0.01, seed=123)
    exact = run_exact(spec)
    sampled = run_trajectories(spec, 50_000)
    assert tv_distance(exact.probs, sampled.probs) <= 0.02


def test_trajectories_validation():
    with pytest.raises(ValueError, match="shots"):
        run_trajectories(_spec(2, 0.25, "bitflip", 0.1), 0)


def test_stats_point_mass():
    d = PhaseDistribution(n=5, probs=np.eye(32)[16], mode="exact")
    assert distribution_stats(d) == (0.5, 0.0)
    d0 = PhaseDistribution(n=5, probs=np.eye(32)[0], mode="exact")
    assert distribution_stats(d0) == (0.0, 0.0)


def test_stats_uniform_against_enumeration():
    probs = np.full(32, 1 / 32)
    theta_bar, delta_theta = distribution_stats(
        PhaseDistribution(n=5, probs=probs, mode="exact")
    )
    # brute-force moments of {0..31}/32
    values = np.arange(32) / 32
    mean = values.mean()
    std = np.sqrt(np.mean((values - mean) ** 2))
    assert theta_bar == pytest.approx(mean, abs=1e-15)
    assert theta_bar == pytest.approx(31 / 64, abs=1e-15)
    assert delta_theta == pytest.approx(std, abs=1e-15)
    assert delta_theta == pytest.approx(0.2885, abs=1e-4)


def test_saturation_limit_mixing_channels():
    # at p = 0.9 the three channels with an incoherent large-p limit drive the
    # register to the maximally mixed state (bit flip is nearly coherent at
    # p near 1 and is exercised separately in the acceptance suite)
    for kind in ("phaseflip", "bitphaseflip", "depolarizing"):
        theta_bar, delta_theta = distribution_stats(
            run_exact(_spec(5, 1 / 32, kind, 0.9))
        )
        assert abs(theta_bar - 31 / 64) <= 0.01
        assert abs(delta_theta - 0.2885) <= 0.01


def test_delta_theta_rises_in_the_small_p_window():
    # exponential rise regime; the large-p tail is covered by acceptance
    for kind in ("bitflip", "depolarizing"):
        previous = -1.0
        for p in (0.0, 0.0025, 0.005, 0.0075, 0.01):
            _, delta_theta = distribution_stats(run_exact(_spec(5, 1 / 32, kind, p)))
            assert delta_theta > previous
            previous = delta_theta


def test_qpe_distribution_modes():
    exact = qpe_distribution(3, 0.125, "phaseflip", 0.01)
    sampled = qpe_distribution(3, 0.125, "phaseflip", 0.01, mode="sampled", shots=2000, seed=3)
    assert exact.mode == "exact" and sampled.mode == "sampled"
    assert tv_distance(exact.probs, sampled.probs) <= 0.06
    with pytest.raises(ValueError, match="mode"):
        qpe_distribution(3, 0.125, "phaseflip", 0.01, mode="approximate")


def test_measured_register_required():
    circuit = Circuit(width=2, ops=(), measured=())
    with pytest.raises(ValueError, match="measured"):
        run_exact(SimSpec(circuit=circuit, channel=make_channel("bitflip", 0.0)))
