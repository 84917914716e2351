import math

import pytest

import warpite


def disk(index):
    return warpite.Manifold(2, "cap", "1", ["0", "1"], index)


def cylinder(index):
    return warpite.Manifold(2, "shell", "pi", ["1"], index, inner="0")


def test_disk_dtn_mode_zero():
    # -J1(1)/J0(1) from the power series of the Bessel functions.
    def j(nu, x):
        return sum((-1) ** k * (x / 2) ** (2 * k + nu) / (math.factorial(k) * math.factorial(k + nu)) for k in range(30))

    value = disk(["1"]).dtn(1.0, 0)
    assert value.shape == (1, 1)
    assert value[0, 0] == pytest.approx(-j(1, 1.0) / j(0, 1.0), rel=1e-8)


def test_dtn_pole_is_none():
    assert cylinder(["1"]).dtn(1.0, 0) is None


def test_spectrum_and_counting():
    first = disk(["1"]).dirichlet_spectrum(0, 10.0)
    assert first[0][0] == pytest.approx(2.404825557695773 ** 2, rel=1e-9)
    assert cylinder(["1"]).counting(10.0) == 15


def test_weyl_constant():
    assert disk(["1"]).weyl_constant() == pytest.approx(0.25, rel=1e-10)
    assert cylinder(["1"]).weyl_constant() == pytest.approx(math.pi / 2, rel=1e-10)


def test_pair_and_ites():
    pair = warpite.Pair(cylinder(["1"]), cylinder(["4"]), [0.0, 0.0])
    assert pair.case == "A21" and pair.gamma == 1
    ites = pair.find_ites(0.1, 5.0, l_max=40)
    assert any(r["kind"] == "singular" and abs(r["lambda"] - 4.0) < 1e-6 for r in ites)


def test_identical_pair_is_rejected():
    with pytest.raises(warpite.WarpiteError, match="AssumptionViolation"):
        warpite.Pair(disk(["1"]), disk(["1"]), [0.0])


def test_difference_symbol_closed_form():
    coeff, closed, ok = warpite.difference_symbol("A21")
    assert ok and coeff == closed
