import json

import numpy as np
import pytest
from click.testing import CliRunner

from ringglow.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def test_pattern_writes_grid_and_sidecar(runner, tmp_path):
    out = tmp_path / "fig2a_l1.csv"
    res = runner.invoke(main, [
        "pattern", "--kind", "single", "--n-phi", "4", "--r", "0.2",
        "--m", "2", "--l", "1", "--pol", "x", "--n-theta", "7",
        "--n-phi-grid", "9", "--output", str(out)])
    assert res.exit_code == 0, res.output
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "theta,phi,omega_f"
    assert len(lines) == 1 + 7 * 9
    sidecar = json.loads((tmp_path / "fig2a_l1.csv.config.json").read_text())
    assert sidecar["command"] == "pattern"
    assert sidecar["n_phi"] == 4 and sidecar["l"] == 1


def test_pattern_stacked_fig5(runner, tmp_path):
    out = tmp_path / "fig5a.csv"
    res = runner.invoke(main, [
        "pattern", "--kind", "stacked", "--n-phi", "8", "--n-rings", "2",
        "--r", "0.2", "--d-z", "0.35", "--m", "2", "--l", "2",
        "--n-theta", "5", "--n-phi-grid", "8", "--output", str(out)])
    assert res.exit_code == 0, res.output
    assert out.exists()


def test_pattern_missing_r_exits_2(runner, tmp_path):
    res = runner.invoke(main, [
        "pattern", "--kind", "single", "--n-phi", "4",
        "--output", str(tmp_path / "x.csv")])
    assert res.exit_code == 2
    assert "--r" in res.output or "'r'" in res.output


def test_pattern_determinism(runner, tmp_path):
    args = ["pattern", "--kind", "single", "--n-phi", "6", "--r", "0.2",
            "--m", "2", "--l", "2", "--n-theta", "9", "--n-phi-grid", "12"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert runner.invoke(main, args + ["--output", str(a)]).exit_code == 0
    assert runner.invoke(main, args + ["--output", str(b)]).exit_code == 0
    assert a.read_bytes() == b.read_bytes()


def test_pattern_json_format(runner, tmp_path):
    out = tmp_path / "g.json"
    res = runner.invoke(main, [
        "pattern", "--kind", "concentric", "--n-phi", "8", "--n-rings", "2",
        "--r", "0.2", "--m", "2", "--l", "2", "--n-theta", "5",
        "--n-phi-grid", "8", "--format", "json", "--output", str(out)])
    assert res.exit_code == 0, res.output
    d = json.loads(out.read_text())
    assert d["metadata"]["geometry"]["kind"] == "concentric"
    assert d["metadata"]["geometry"]["d_r"] == 0.2  # default d_r = r


def test_spectrum_row_counts(runner, tmp_path):
    out = tmp_path / "spec.csv"
    res = runner.invoke(main, [
        "spectrum", "--kind", "single", "--n-phi", "4", "--r", "0.2",
        "--m", "2", "--l", "2", "--output", str(out)])
    assert res.exit_code == 0, res.output
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "index,rate_over_half_gamma,shift_over_half_gamma,weight"
    assert len(lines) == 1 + 6

    out12 = tmp_path / "spec12.csv"
    res = runner.invoke(main, [
        "spectrum", "--kind", "single", "--n-phi", "12", "--r", "0.2",
        "--m", "2", "--output", str(out12)])
    assert res.exit_code == 0
    assert len(out12.read_text().strip().split("\n")) == 1 + 66


def test_spectrum_far_separated(runner, tmp_path):
    out = tmp_path / "spec.csv"
    res = runner.invoke(main, [
        "spectrum", "--kind", "single", "--n-phi", "4", "--r", "0.2",
        "--m", "2", "--scale", "1000", "--output", str(out)])
    assert res.exit_code == 0
    rates = [float(line.split(",")[1])
             for line in out.read_text().strip().split("\n")[1:]]
    assert all(abs(r - 2) / 2 < 0.01 for r in rates)


def test_fluorescence_traces(runner, tmp_path):
    res = runner.invoke(main, [
        "fluorescence", "--kind", "single", "--n-phi", "4", "--r", "0.2",
        "--m", "2", "--l", "1", "--l", "2", "--l", "4", "--t-max", "4",
        "--n-t", "41", "--output-dir", str(tmp_path)])
    assert res.exit_code == 0, res.output
    for l in (1, 2, 4):
        lines = (tmp_path / f"trace_l{l}.csv").read_text().strip().split("\n")
        assert lines[0] == "gamma_t,intensity,reference"
        assert len(lines) == 1 + 41
        t0, i0, r0 = map(float, lines[1].split(","))
        assert t0 == 0.0 and r0 == 1.0
        assert i0 == pytest.approx(1.0, abs=1e-12)


def test_fluorescence_tmax_zero(runner, tmp_path):
    res = runner.invoke(main, [
        "fluorescence", "--kind", "single", "--n-phi", "4", "--r", "0.2",
        "--m", "2", "--l", "1", "--t-max", "0", "--n-t", "1",
        "--output-dir", str(tmp_path)])
    assert res.exit_code == 0, res.output
    lines = (tmp_path / "trace_l1.csv").read_text().strip().split("\n")
    assert len(lines) == 2
    assert float(lines[1].split(",")[1]) == pytest.approx(1.0, abs=1e-12)


def test_sweep_cartesian_product(runner, tmp_path):
    res = runner.invoke(main, [
        "sweep", "--kind", "stacked", "--n-phi", "4", "--r", "0.2",
        "--d-z", "0.35", "--m", "2", "--l", "1", "--l", "2",
        "--n-rings-list", "1", "--n-rings-list", "2",
        "--n-theta", "5", "--n-phi-grid", "8", "--output-dir", str(tmp_path)])
    assert res.exit_code == 0, res.output
    files = sorted(p.name for p in tmp_path.glob("*.csv"))
    assert files == ["pattern_stacked_nr1_l1.csv", "pattern_stacked_nr1_l2.csv",
                     "pattern_stacked_nr2_l1.csv", "pattern_stacked_nr2_l2.csv"]
    assert all((tmp_path / (f + ".config.json")).exists() for f in files)


def test_verify_passes(runner):
    res = runner.invoke(main, ["verify", "--max-dim", "70"])
    assert res.exit_code == 0, res.output
    assert "FAIL" not in res.output
    assert "PASS" in res.output


def test_verify_skips_capped_checks(runner):
    res = runner.invoke(main, ["verify", "--max-dim", "3"])
    assert "SKIP" in res.output


def test_injected_phase_sign_error_detected():
    # mutation test: a wrong sign in the helical phase maps l to -l, which
    # the l <-> N-l symmetry itself absorbs on an even-N ring, but the
    # label-based double-sum oracle catches the inconsistency
    import numpy as np
    from ringglow import (Direction, Polarization, build_single_ring,
                          omega_f, omega_f_bruteforce)
    from ringglow.manifold import (MultiphotonState, enumerate_manifold,
                                   _config_position_sums, K_L_DEFAULT)

    arr = build_single_ring(5, 0.2)  # odd N: pattern not l-sign symmetric
    man = enumerate_manifold(5, 2)
    r_m = _config_position_sums(man, arr)
    f = ((man.configs - 1) % arr.n_phi + 1).sum(axis=1)
    l = 1
    phases = r_m @ K_L_DEFAULT - 2 * np.pi * l * (f - 1) / arr.n_phi
    bad = MultiphotonState(man, np.exp(1j * phases) / np.sqrt(man.size),
                           {"oam": l}, K_L_DEFAULT)
    d = Direction(1.1, 0.7)
    a = omega_f(bad, arr, d, Polarization.x())
    b = omega_f_bruteforce(bad, arr, d, Polarization.x())
    assert abs(a - b) > 1e-3 * max(1.0, abs(b))


def test_nonlinear_phase_corruption_breaks_mode_symmetry():
    import numpy as np
    from ringglow import checks
    from ringglow.manifold import (MultiphotonState, enumerate_manifold,
                                   _config_position_sums, K_L_DEFAULT)

    def mutated_builder(array, m, l, k_l=None):
        k_l = K_L_DEFAULT if k_l is None else k_l
        man = enumerate_manifold(array.n_atoms, m)
        r_m = _config_position_sums(man, array)
        f = ((man.configs - 1) % array.n_phi + 1).sum(axis=1)
        # quadratic-in-f corruption of the imprinted phase
        phases = r_m @ k_l + 2 * np.pi * l * (f - 1) / array.n_phi \
            + 0.1 * l * f ** 2
        amps = np.exp(1j * phases) / np.sqrt(man.size)
        return MultiphotonState(man, amps, {"oam": int(l)}, k_l)

    name, status, detail = checks.check_mode_symmetry(
        ns=(4,), state_builder=mutated_builder)
    assert status == "fail"
