import json
import math
import os

import pytest

from qtomo import qtcli
from qtomo.lib import constants


def run(capsys, *argv):
    code = qtcli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture()
def workdir(tmp_path, capsys):
    vacuum = str(tmp_path / "vacuum.qtf")
    coherent = str(tmp_path / "coherent.qtf")
    assert run(capsys, "state", "fock", "0", "--count", "64", "--kernel", "-o", vacuum)[0] == 0
    assert run(capsys, "state", "coherent", "0.5+0.5i", "--count", "64", "-o", coherent)[0] == 0
    return tmp_path


def test_state_reports_and_writes(tmp_path, capsys):
    path = str(tmp_path / "fock.qtf")
    code, out, _ = run(capsys, "state", "fock", "2", "--count", "64", "-o", path)
    assert code == constants.exit_ok
    assert out.startswith("# qtomo ")
    assert "# command: qtcli state fock 2" in out
    assert float(out.split("norm ")[1].split()[0]) == pytest.approx(1.0, abs=1e-12)
    assert f"wrote {path} xxh64=" in out


def test_rewriting_identical_output_is_fine(tmp_path, capsys):
    path = str(tmp_path / "fock.qtf")
    assert run(capsys, "state", "fock", "1", "--count", "64", "-o", path)[0] == 0
    assert run(capsys, "state", "fock", "1", "--count", "64", "-o", path)[0] == 0


def test_existing_output_needs_replace(workdir, capsys, monkeypatch):
    monkeypatch.setattr("qtomo.lib.fileio.send2trash", os.remove)
    path = str(workdir / "vacuum.qtf")
    code, _, err = run(capsys, "state", "fock", "1", "--count", "64", "--kernel", "-o", path)
    assert code == constants.exit_io
    assert "already exists" in err
    assert run(capsys, "--replace", "state", "fock", "1", "--count", "64", "--kernel", "-o", path)[0] == 0


def test_missing_input_is_an_io_error(tmp_path, capsys):
    code, _, err = run(capsys, "char", str(tmp_path / "missing.qtf"), "-o", str(tmp_path / "out.qtf"))
    assert code == constants.exit_io
    assert "error:" in err


def test_bad_parameters_are_usage_errors(tmp_path, capsys):
    out = str(tmp_path / "out.qtf")
    assert run(capsys, "state", "fock", "zero", "-o", out)[0] == constants.exit_usage
    assert run(capsys, "state", "fock", "0", "1", "-o", out)[0] == constants.exit_usage
    assert run(capsys, "state", "mix", "0.5", "-o", out)[0] == constants.exit_usage
    assert run(capsys, "state", "box", "9", "--count", "64", "-o", out)[0] == constants.exit_usage


def test_unknown_command_exits_with_usage():
    with pytest.raises(SystemExit) as error:
        qtcli.main(["teleport"])
    assert error.value.code == constants.exit_usage


def test_mix(workdir, capsys):
    vacuum = str(workdir / "vacuum.qtf")
    coherent = str(workdir / "coherent.qtf")
    code, out, _ = run(capsys, "state", "mix", f"0.5:{vacuum}", f"0.5:{coherent}", "-o", str(workdir / "mix.qtf"))
    assert code == 0
    assert "hermitian True" in out
    trace = float(out.split("trace ")[1].split()[0])
    assert trace == pytest.approx(1.0, abs=1e-12)


def test_char_and_wigner(workdir, capsys):
    vacuum = str(workdir / "vacuum.qtf")
    char = str(workdir / "vacuum-char.qtf")
    code, out, _ = run(capsys, "char", vacuum, "-o", char)
    assert code == 0
    assert "f(0,0) " in out

    code, out, _ = run(capsys, "--csv", "wigner", char, "--from", "char", "-o", str(workdir / "wigner.qtf"))
    assert code == 0
    integral = float(out.split("integral ")[1].split()[0])
    assert integral == pytest.approx(2 * math.pi, abs=1e-6)
    assert (workdir / "wigner.csv").exists()


def test_frft(workdir, capsys):
    code, out, _ = run(capsys, "frft", str(workdir / "coherent.qtf"), "--alpha", "0.5", "-o", str(workdir / "f.qtf"))
    assert code == 0
    assert float(out.split("norm ")[1].split()[0]) == pytest.approx(1.0, abs=1e-10)


def test_tomogram_routes_and_reconstruction(workdir, capsys):
    vacuum = str(workdir / "vacuum.qtf")
    prefix = str(workdir / "vacuum")
    code, out, _ = run(capsys, "--angles", "8", "tomogram", vacuum, "--route", "all", "-o", prefix)
    assert code == 0
    assert "v_gate True" in out
    assert "max pairwise deviation" in out
    for route in ("char", "wigner", "rotate"):
        assert (workdir / f"vacuum-{route}.qtg").exists()

    code, out, _ = run(
        capsys, "--angles", "8", "reconstruct", prefix + "-char.qtg", "--compare", vacuum, "-o", str(workdir / "r.qtf")
    )
    assert code == 0
    assert float(out.split("relative L2 ")[1].split()[0]) < 5e-2


def test_fidelity(workdir, capsys):
    vacuum = str(workdir / "vacuum.qtf")
    coherent = str(workdir / "coherent.qtf")
    code, out, _ = run(capsys, "fidelity", vacuum, coherent)
    assert code == 0
    assert "normalization_constant:" not in out
    direct = float(out.split("direct ")[1].split()[0])
    assert direct == pytest.approx(math.exp(-0.5), abs=1e-8)


def test_fidelity_all_routes(workdir, capsys):
    vacuum = str(workdir / "vacuum.qtf")
    code, out, _ = run(capsys, "--angles", "16", "fidelity", vacuum, vacuum, "--route", "all")
    assert code == 0
    assert "# normalization_constant: " in out
    for route in ("direct", "characteristic", "tomographic"):
        assert f"\n{route} " in out
    assert "deviation direct-characteristic" in out


def test_regularity(workdir, capsys):
    code, out, _ = run(capsys, "regularity", str(workdir / "coherent.qtf"), "--nu", "1")
    assert code == 0
    records = [json.loads(line) for line in out.splitlines() if line.startswith("{")]
    assert len(records) == 8
    assert records[3]["verdict"] in ("stable", "diverging", "inconclusive")


def test_output_options_after_the_subcommand(workdir, capsys, monkeypatch):
    vacuum = str(workdir / "vacuum.qtf")
    prefix = str(workdir / "late")
    code, out, _ = run(capsys, "tomogram", vacuum, "--angles", "8", "--route", "all", "--csv", "-o", prefix)
    assert code == 0
    assert "# angles=8 " in out
    assert (workdir / "late-char.csv").exists()

    monkeypatch.setattr("qtomo.lib.fileio.send2trash", os.remove)
    code, _, _ = run(capsys, "state", "fock", "1", "--count", "64", "--kernel", "-o", vacuum, "--replace")
    assert code == 0


def test_global_options_still_apply(workdir, capsys):
    code, out, _ = run(capsys, "--angles", "8", "tomogram", str(workdir / "vacuum.qtf"), "-o", str(workdir / "g"))
    assert code == 0
    assert "# angles=8 " in out


def test_bad_mixture_weight_is_a_usage_error(workdir, capsys):
    vacuum = str(workdir / "vacuum.qtf")
    code, _, err = run(capsys, "state", "mix", f"half:{vacuum}", "-o", str(workdir / "m.qtf"))
    assert code == constants.exit_usage
    assert "mixture weight" in err


def test_header_echoes_the_input_grid(workdir, capsys):
    code, out, _ = run(capsys, "--angles", "8", "tomogram", str(workdir / "vacuum.qtf"), "-o", str(workdir / "t"))
    assert code == 0
    grid = next(line for line in out.splitlines() if line.startswith("# grid: "))
    assert "count=64" in grid
    assert "extent=8.0" in grid
    assert "count=256" not in grid


def test_report_values_are_plain_numbers(workdir, capsys):
    code, out, _ = run(capsys, "wigner", str(workdir / "vacuum.qtf"), "-o", str(workdir / "w.qtf"))
    assert code == 0
    for line in out.splitlines():
        if line.startswith(("integral ", "max |Im W| ")):
            float(line.rsplit(" ", 1)[1])
