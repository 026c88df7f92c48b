import numpy as np
import pytest

from gatequiz import problems, qcore
from gatequiz.automata import failure_probability
from gatequiz.qcore import DensityMatrix, apply_channel, validate_cptp
from gatequiz.robust import (
    GaugeParams,
    NoiseFamily,
    channel_model,
    child_seed,
    eb_channel,
    eb_demo,
    gauge_objective,
    infidelity,
    noise_channel,
    noise_curve,
    noisy_model,
    sample_random_channel,
    slope_estimate,
    soundness_bound,
    survey,
    target_model,
    write_noise_curve_csv,
    write_survey_csv,
)

# regression constant from the one-off dense-grid gauge oracle
# (about 10^6 uniform points over (alpha, beta, theta) x {conjugation})
DEPOL_T01_INFID = 0.05


def bloch_z_after_even_word(kind, t, i):
    """Independent closed-form Pr[correct] for diagonal-symmetric noise.

    Depolarizing shrinks the whole Bloch vector by (1-t) per symbol;
    dephasing shrinks only the equatorial components, and the trajectory
    sits on the z axis after every even-length word.
    """
    if kind == "depolarizing":
        return (1 + (1 - t) ** (2 * i)) / 2
    if kind == "dephasing":
        return (1 + (1 - t) ** i) / 2
    raise ValueError(kind)


def test_noise_channels_extreme_points():
    rho = DensityMatrix(np.diag([1.0, 0.0]))
    out = apply_channel(noise_channel(NoiseFamily("depolarizing", 1.0)), rho)
    assert np.allclose(out.matrix, np.eye(2) / 2, atol=1e-14)
    plus = qcore.KET_PLUS.density()
    out = apply_channel(noise_channel(NoiseFamily("dephasing", 1.0)), plus)
    assert np.allclose(out.matrix, np.eye(2) / 2, atol=1e-14)
    out = apply_channel(noise_channel(NoiseFamily("amplitude_raising", 1.0)), rho)
    assert np.allclose(out.matrix, np.diag([0.0, 1.0]), atol=1e-14)
    out = apply_channel(noise_channel(NoiseFamily("amplitude_damping", 1.0)),
                        DensityMatrix(np.diag([0.0, 1.0])))
    assert np.allclose(out.matrix, np.diag([1.0, 0.0]), atol=1e-14)


def test_noise_channels_cptp_on_grid():
    for kind in ("depolarizing", "dephasing", "amplitude_damping", "amplitude_raising"):
        for t in np.linspace(0.0, 1.0, 11):
            report = validate_cptp(noise_channel(NoiseFamily(kind, float(t))))
            assert report.valid, (kind, t)


def test_noise_family_validation():
    with pytest.raises(ValueError):
        NoiseFamily("depolarizing", 1.5)
    with pytest.raises(ValueError):
        NoiseFamily("thermal", 0.5)


def test_noisy_model_zero_noise_is_identity():
    target = target_model()
    model = noisy_model(target, NoiseFamily("depolarizing", 0.0))
    for word in ("", "s", "ss", "sss"):
        assert model.label_probabilities(word) == pytest.approx(
            target.label_probabilities(word), abs=1e-14
        )


def test_noisy_model_failure_matches_bloch_oracle():
    p = problems.make_eo(1, 3)
    target = target_model()
    for kind in ("depolarizing", "dephasing"):
        for t in (0.1, 0.2, 0.5):
            model = noisy_model(target, NoiseFamily(kind, t))
            expected = 1 - sum(
                bloch_z_after_even_word(kind, t, i) for i in range(4)
            ) / 4
            assert failure_probability(model, p) == pytest.approx(expected, abs=1e-12)


def test_depolarizing_medium_noise_between_floors():
    model = noisy_model(target_model(), NoiseFamily("depolarizing", 0.2))
    pf = failure_probability(model, problems.make_eo(1, 3))
    assert 0.0 < pf < 0.25
    assert pf == pytest.approx(0.211032, abs=1e-6)


def test_infidelity_of_target_is_zero():
    target = target_model()
    fid, gauge = infidelity(target, target, seed=7)
    assert fid <= 1e-9
    assert gauge.conjugate is False


def test_infidelity_amplitude_raising_floor():
    target = target_model()
    model = noisy_model(target, NoiseFamily("amplitude_raising", 1.0))
    fid, _ = infidelity(model, target, seed=3)
    assert fid == pytest.approx(0.5, abs=1e-3)


def test_infidelity_depolarizing_regression():
    target = target_model()
    model = noisy_model(target, NoiseFamily("depolarizing", 0.1))
    fid, _ = infidelity(model, target, seed=5)
    assert fid == pytest.approx(DEPOL_T01_INFID, abs=1e-4)


def test_infidelity_validation():
    target = target_model()
    other = noisy_model(target, NoiseFamily("dephasing", 0.2))
    with pytest.raises(ValueError):
        infidelity(other, target)  # no seed or rng
    bad = channel_model(target.channels["s"])
    bad = type(bad)(bad.initial, {"x": bad.channels["s"]}, bad.povm)
    with pytest.raises(ValueError):
        infidelity(bad, target, seed=1)


def test_identity_gauge_upper_bounds_optimum():
    target = target_model()
    identity = GaugeParams(0.0, 0.0, 0.0, False)
    for kind, t in (("dephasing", 0.3), ("amplitude_damping", 0.4)):
        model = noisy_model(target, NoiseFamily(kind, t))
        at_identity = gauge_objective(model, target, identity)
        best, gauge = infidelity(model, target, seed=11)
        assert best <= at_identity + 1e-12
        assert best == pytest.approx(gauge_objective(model, target, gauge), abs=1e-12)


def test_conjugate_branch_convergence():
    target = target_model()
    rng = np.random.default_rng(12)
    for kind, t in (("depolarizing", 0.15), ("amplitude_raising", 0.35)):
        model = noisy_model(target, NoiseFamily(kind, t))
        best, gauge = infidelity(model, target, rng=rng)
        flipped = GaugeParams(gauge.alpha, gauge.beta, gauge.theta, not gauge.conjugate)
        assert gauge_objective(model, target, flipped) >= best - 1e-6


def test_general_objective_agrees_with_reduced():
    """Same optimum whether the reduced shortcut or the full three-term
    objective evaluates the gauge (the model structures coincide here)."""
    target = target_model()
    model = noisy_model(target, NoiseFamily("amplitude_damping", 0.3))
    from gatequiz.robust import _GeneralGaugeObjective

    for params in ([0.0, 0.0, 0.0], [0.3, 1.2, 0.4], [2.0, 0.7, 2.5]):
        for conj in (False, True):
            gp = GaugeParams(*params, conj)
            reduced = gauge_objective(model, target, gp)
            general = _GeneralGaugeObjective(model, target, np.array([conj]))(
                np.array([[params]])
            )[0, 0]
            assert reduced == pytest.approx(general, abs=1e-12)


def test_gauge_params_unitary():
    gp = GaugeParams(0.4, 1.1, 0.7, False)
    u = gp.unitary()
    assert np.abs(u @ u.conj().T - np.eye(2)).max() < 1e-12


def test_sample_random_channel_contract():
    ranks = set()
    for seed in range(60):
        ch = sample_random_channel(seed)
        report = validate_cptp(ch)
        assert report.trace_defect <= 1e-10 and report.cp_defect <= 1e-10
        ranks.add(ch.rank)
    assert ranks == {1, 2, 3, 4}
    a = sample_random_channel(123)
    b = sample_random_channel(123)
    assert all(np.array_equal(x, y) for x, y in zip(a.kraus_ops, b.kraus_ops))


def test_child_seed_mixing():
    seen = {child_seed(5, i) for i in range(1000)}
    assert len(seen) == 1000
    assert child_seed(5, 1) != child_seed(6, 1)


def test_survey_determinism_and_order():
    p = problems.make_eo(1, 3)
    a = survey(p, 300, master_seed=7, threads=1, batch_size=64)
    b = survey(p, 300, master_seed=7, threads=2, batch_size=64)
    c = survey(p, 300, master_seed=7, threads=2, batch_size=128)
    assert a == b == c
    assert [pt.index for pt in a] == list(range(300))
    assert {pt.kraus_rank for pt in a} <= {1, 2, 3, 4}


def test_survey_rejects_unrestricted():
    with pytest.raises(ValueError):
        survey(problems.make_eo(1), 10, master_seed=1)
    with pytest.raises(ValueError):
        survey(problems.make_eo(2, 3), 10, master_seed=1)


def test_survey_spread():
    p = problems.make_eo(1, 3)
    pts = survey(p, 10_000, master_seed=31)
    pf = np.array([pt.p_fail for pt in pts])
    assert (pf < 0.05).any()
    assert (pf > 0.25).any()


def test_survey_csv_format(tmp_path):
    p = problems.make_eo(1, 3)
    pts = survey(p, 5, master_seed=3)
    path = tmp_path / "survey.csv"
    write_survey_csv(pts, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "index,seed,p_fail,infid,kraus_rank"
    assert len(lines) == 6
    first = lines[1].split(",")
    assert int(first[0]) == 0
    assert float(first[2]) == pts[0].p_fail  # 17 significant digits round-trip


def test_slope_estimates_quick():
    est = slope_estimate("depolarizing", 3, seed=1)
    assert est.alpha_hat == pytest.approx(1 / 3, rel=0.05)
    est = slope_estimate("dephasing", 5, seed=2)
    assert est.alpha_hat == pytest.approx(4 / 15, rel=0.05)
    with pytest.raises(ValueError):
        slope_estimate("depolarizing", 4, seed=1)


def test_soundness_bound_values():
    assert soundness_bound(3) == pytest.approx(2.0, abs=1e-6)
    assert soundness_bound(5) == pytest.approx(1.5, abs=1e-6)
    assert soundness_bound(2) == pytest.approx(1.5, abs=1e-6)
    assert soundness_bound(problems.make_eo(1, 3)) == pytest.approx(2.0, abs=1e-6)
    with pytest.raises(ValueError):
        soundness_bound(problems.make_cl())


def test_eb_demo_exact_values():
    result = eb_demo()
    assert result.pr_reject_s2 == pytest.approx(5 / 8, abs=1e-12)
    assert result.pr_accept_s4 == pytest.approx(17 / 32, abs=1e-12)
    assert result.success == pytest.approx(23 / 32, abs=1e-12)
    assert result.beats_classical and result.success > 2 / 3
    assert result.trace_defect <= 1e-10 and result.cp_defect <= 1e-10
    assert result.ppt_min_eigenvalue >= -1e-10
    assert result.entanglement_breaking


def test_eb_channel_bloch_map():
    # one application sends (x, y, z) to (-y/2, x/2, 0)
    ch = eb_channel()
    rng = np.random.default_rng(4)
    for _ in range(10):
        v = rng.uniform(-1, 1, size=3)
        v /= max(1.0, np.linalg.norm(v))
        rho = DensityMatrix(
            0.5 * (np.eye(2) + v[0] * qcore.PAULI_X + v[1] * qcore.PAULI_Y + v[2] * qcore.PAULI_Z)
        )
        out = apply_channel(ch, rho).matrix
        got = np.array([
            np.trace(qcore.PAULI_X @ out).real,
            np.trace(qcore.PAULI_Y @ out).real,
            np.trace(qcore.PAULI_Z @ out).real,
        ])
        assert np.allclose(got, [-v[1] / 2, v[0] / 2, 0.0], atol=1e-12)


def test_noise_monotonicity_on_grid():
    """p_fail and optimized infidelity are 0 at t=0 and nondecreasing in t.

    Exception forced by the math: amplitude raising returns to the classical
    floor 1/4 at t=1 (it realizes the optimal two-state strategy there), so
    its p_fail peaks near t = 0.75 and descends afterwards.
    """
    target = target_model()
    p = problems.make_eo(1, 3)
    t_grid = np.linspace(0.0, 1.0, 21)
    for kind in ("depolarizing", "dephasing", "amplitude_damping", "amplitude_raising"):
        pf_prev, fid_prev = -1.0, -1.0
        for idx, t in enumerate(t_grid):
            model = noisy_model(target, NoiseFamily(kind, float(t)))
            pf = failure_probability(model, p)
            fid, _ = infidelity(model, target, seed=child_seed(77, idx))
            if idx == 0:
                assert pf <= 1e-9 and fid <= 1e-9
            if kind != "amplitude_raising" or t <= 0.75:
                assert pf >= pf_prev - 1e-9, (kind, t)
            else:
                assert 0.25 - 1e-9 <= pf <= pf_prev + 1e-9, (kind, t)
            assert fid >= fid_prev - 1e-9, (kind, t)
            pf_prev, fid_prev = pf, fid


def test_noise_curve_rows(tmp_path):
    rows = noise_curve(3, seed=5, t_grid=np.linspace(0, 1, 3))
    assert len(rows) == 12
    path = tmp_path / "curves.csv"
    write_noise_curve_csv(rows, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "family,t,p_fail,infid"
    assert len(lines) == 13
    again = tmp_path / "curves2.csv"
    write_noise_curve_csv(noise_curve(3, seed=5, t_grid=np.linspace(0, 1, 3)), again)
    assert path.read_text() == again.read_text()
