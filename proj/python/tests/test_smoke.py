import math

import pytest

import qfid

GAMMA_I = (-2.0, 0.8)


def test_single_mode_relations():
    di = qfid.dvector("xy", GAMMA_I, math.pi / 2)
    df = qfid.dvector("xy", (0.0, -2.0), math.pi / 2)
    assert qfid.lbar_k(di, df) == pytest.approx(4 / 29, abs=1e-15)
    fq = qfid.quench_fidelity_k(di, df)
    assert qfid.relation_lbar_from_fidelity(fq) == pytest.approx(4 / 29, abs=1e-14)
    assert qfid.numeric_lbar(di, df) == pytest.approx(4 / 29, abs=1e-10)
    t = qfid.critical_times(df, 1)[0]
    assert t == pytest.approx(math.pi / (2 * df.norm()))


def test_quartet_modes():
    expected = {-2.0: (False, 0), -1.1: (True, 2), 0.0: (True, 1), 2.0: (False, 0)}
    for hf, (dqpt, n_kc) in expected.items():
        report = qfid.analyze_modes(GAMMA_I, (hf, -2.0))
        assert report["dqpt_exists"] is dqpt
        assert report["n_kc"] == n_kc
        assert qfid.dqpt_exists(GAMMA_I, (hf, -2.0)) is dqpt
    roots = sorted(math.cos(k) for k in qfid.analyze_modes(GAMMA_I, (-1.1, -2.0))["kc_roots"])
    assert roots == pytest.approx([0.2431238509, 0.9491838414], abs=1e-9)


def test_boundary_and_winding():
    assert qfid.xy_boundary_fidelities(GAMMA_I, (0.0, -2.0)) == (0, 1)
    assert qfid.xy_winding_number(0.0, 1.0) == 1
    assert qfid.xy_winding_number(0.0, -1.0) == -1
    assert qfid.xy_winding_number(2.0, 1.0) == 0
    with pytest.raises(qfid.CriticalBoundary):
        qfid.xy_boundary_fidelities(GAMMA_I, (1.0, -2.0))


def test_rates():
    lbar, alpha = qfid.rates_thermodynamic(GAMMA_I, (0.0, -2.0))
    assert lbar == pytest.approx(0.8019904418, abs=1e-8)
    assert alpha == pytest.approx(0.3990390321, abs=1e-8)
    lbar_l, alpha_l = qfid.rates(GAMMA_I, (0.0, -2.0), 30)
    assert math.isfinite(lbar_l)
    assert math.isinf(alpha_l)
    echo, rate = qfid.loschmidt_series(GAMMA_I, GAMMA_I, 20, [0.0, 1.0, 2.0])
    assert echo == pytest.approx([1.0, 1.0, 1.0])
    assert rate == pytest.approx([0.0, 0.0, 0.0], abs=1e-15)


def test_gap_closure_raises():
    with pytest.raises(qfid.GapClosed):
        qfid.loschmidt_series(GAMMA_I, (0.0, 0.0), 8, [0.1])


def test_scan_and_verify():
    cells = qfid.scan(GAMMA_I, ("h", (-0.5, 0.5, 3)), ("eta", (-2.0, -1.0, 2)), rates="finite")
    assert len(cells) == 6
    assert all(c["status"] == "ok" and c["dqpt_exists"] for c in cells)
    reports = qfid.verify(seed=3, trials=20)
    assert all(r["pass"] for r in reports)
    assert not all(r["pass"] for r in qfid.verify(seed=3, trials=20, inject_fault=True))


def test_cli_exit_codes(tmp_path):
    code, out, _ = qfid.run_cli(["modes", "--gamma-i", "-2,0.8", "--gamma-f", "0,-2",
                                 "-o", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "roots.csv").exists()
    code, _, err = qfid.run_cli(["quench", "--gamma-i", "-2,0.8"])
    assert code == 2
    assert "gamma_f" in err or "system.size" in err
