import pytest

from qtomo.services.selftest import CHECKS, Rig, check_baker, check_determinism, check_fourier, check_routes


@pytest.fixture(scope="module")
def rig():
    return Rig(8.0, 128, 16, threads=2)


def test_rig_caches_kernels(rig):
    assert rig.kernel("fock:1") is rig.kernel("fock:1")
    assert rig.kernel("mix").trace().real == pytest.approx(1.0)


def test_fourier_check(rig):
    result = check_fourier(rig)
    assert result.passed, result.detail


def test_baker_check(rig):
    result = check_baker(rig)
    assert result.passed, result.detail


def test_determinism_writes_outputs(rig, tmp_path):
    result = check_determinism(rig, str(tmp_path))
    assert result.passed
    assert "digests" in result.detail
    for name in ("mix.qtf", "mix-char.qtf", "mix.qtg"):
        assert (tmp_path / name).exists()


def test_check_order():
    assert [check.__name__ for check in CHECKS][:2] == ["check_fourier", "check_baker"]


def test_route_check(rig):
    result = check_routes(rig)
    assert result.passed, result.detail
