"""Step-size schedules: per-kind validation and evaluation."""

import pytest

from byzopt.schedules import StepSchedule, harmonic, power


def test_harmonic_values():
    sched = harmonic(2.0)
    assert sched.alpha(0) == 2.0
    assert sched.alpha(3) == 0.5


def test_power_values():
    sched = power(1.0, 0.75)
    assert sched.alpha(0) == 1.0
    assert abs(sched.alpha(15) - 16 ** -0.75) < 1e-15


def test_positive_and_nonincreasing():
    for sched in (harmonic(0.3), power(2.0, 0.6)):
        values = [sched.alpha(t) for t in range(200)]
        assert all(v > 0 for v in values)
        assert all(a >= b for a, b in zip(values, values[1:]))


def test_validation():
    with pytest.raises(ValueError):
        harmonic(0.0)
    with pytest.raises(ValueError):
        power(1.0, 0.5)   # sum of squares would diverge
    with pytest.raises(ValueError):
        power(1.0, 1.5)   # sum would converge
    with pytest.raises(ValueError):
        StepSchedule("exponential", 1.0)
    with pytest.raises(ValueError):
        harmonic(1.0).alpha(-1)
