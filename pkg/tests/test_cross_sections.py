import math

import pytest

import oracles
from lane_emden_lab import cross_sections as cs
from lane_emden_lab.errors import DomainError


def test_catalog_examples():
    assert cs.lambda1(cs.Interval(1)) == pytest.approx(9.8696, abs=1e-4)
    assert cs.lambda1(cs.Rectangle(1, 2)) == pytest.approx(2.4674, abs=1e-4)
    assert cs.lambda1(cs.Disk(1)) == pytest.approx(3.38996, abs=1e-4)
    assert cs.lambda1(cs.Custom(4.2)) == 4.2


def test_bessel_root():
    r = cs.bessel_j1prime_root()
    assert r == pytest.approx(1.841184, abs=1e-6)
    assert r == pytest.approx(oracles.bessel_j1prime_root(), abs=1e-9)
    assert abs(cs.bessel_j1_prime(r)) < 1e-10
    assert cs.bessel_j1_prime(1.0) > 0 > cs.bessel_j1_prime(3.0)


def test_bessel_series_against_recurrence():
    for x in (0.3, 1.0, 1.7, 2.5, 3.0):
        assert cs.bessel_j1_prime(x) == pytest.approx(cs.bessel_j1_prime_recurrence(x), abs=1e-14)
    assert cs.bessel_j(0, 0.0) == 1.0
    assert cs.bessel_j(1, 2.0) == pytest.approx(0.5767248077568734, abs=1e-15)


@pytest.mark.parametrize("sec", [cs.Interval(0.7), cs.Rectangle(0.5, 1.5), cs.Disk(2.0)])
@pytest.mark.parametrize("s", [0.1, 3.0, 17.0])
def test_dilation(sec, s):
    assert cs.lambda1(sec.scaled(s)) == pytest.approx(cs.lambda1(sec) / s**2, rel=1e-15)


def test_square_equals_interval():
    for a in (0.3, 1.0, 2.5):
        assert cs.lambda1(cs.Rectangle(a, a)) == cs.lambda1(cs.Interval(a))


def test_validation():
    for build in (lambda: cs.Interval(0), lambda: cs.Rectangle(1, -2), lambda: cs.Disk(math.nan), lambda: cs.Custom(0)):
        with pytest.raises(DomainError):
            build()
    with pytest.raises(DomainError):
        cs.lambda1("square")
    with pytest.raises(DomainError):
        cs.parse_section("hexagon", 1)
    with pytest.raises(DomainError):
        cs.parse_section("rectangle", 1)
    assert cs.parse_section("Disk", 2.0) == cs.Disk(2.0)
