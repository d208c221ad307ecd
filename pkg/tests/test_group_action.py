from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from galconf.exact_algebra import UnsupportedOperation, equal, factor_power, jet, param, var
from galconf.group_action import (C, Boost, Conformal, Dilation, OffShellError, PolyTrajectory,
                                  Rotation, TimeShift, apply_point_transform, commutator, compose,
                                  generator_field, identity_spec, level_images, parse_spec,
                                  plane_rotation, verify_prolongation)
from galconf.model import ModelConfig

ODD3 = ModelConfig(3, 3)
rationals = st.fractions(min_value=-3, max_value=3, max_denominator=6)


def field(name, cfg=ODD3):
    return generator_field(name, cfg)


def test_sl2_commutators():
    H, D, K = field(("h",)), field(("d",)), field(("k",))
    assert (commutator(H, D) + H).is_zero()
    assert (commutator(D, K) + K).is_zero()


@pytest.mark.parametrize("k", [1, 2, 3])
def test_hamiltonian_lowers_boost_level(k):
    lhs = commutator(field(("h",)), field(("c", k, 1)))
    assert (lhs + k * field(("c", k - 1, 1))).is_zero()


def test_boosts_commute():
    for j in range(4):
        for k in range(4):
            assert commutator(field(("c", j, 1)), field(("c", k, 2))).is_zero()


def test_compose_one_parameter_families():
    third, sixth = Fraction(1, 3), Fraction(1, 6)
    assert compose(Conformal(third), Conformal(sixth)) == Conformal(Fraction(1, 2))
    assert compose(Dilation(2), Dilation(3)) == Dilation(6)
    assert compose(TimeShift(third), TimeShift(-third)) == identity_spec(TimeShift(third), 3)
    with pytest.raises(UnsupportedOperation):
        compose(Dilation(2), TimeShift(1))
    with pytest.raises(UnsupportedOperation):
        compose(Boost(1, (1, 0, 0)), Boost(2, (1, 0, 0)))


@given(rationals, rationals)
@settings(max_examples=25, deadline=None)
def test_conformal_composition_on_trajectories(a, b):
    traj = PolyTrajectory.from_coeffs([[1, 0, 0], [2, 1, 0], [0, 0, 3], [1, 1, 1]])
    two_step = apply_point_transform(Conformal(a), apply_point_transform(Conformal(b), traj, ODD3), ODD3)
    assert two_step == apply_point_transform(Conformal(a + b), traj, ODD3)


def test_conformal_first_level_image():
    c, q0, q1 = var(C), var(jet(0, 1)), var(jet(1, 1))
    image = level_images(Conformal(c), ODD3)[1][0]
    expected = q1 * factor_power(-c, -1) + 3 * c * q0 * factor_power(-c, -2)
    assert equal(image, expected)


def test_boost_image():
    x = Fraction(1, 2)
    traj = PolyTrajectory.from_coeffs([[0, 0, 0]])
    out = apply_point_transform(Boost(2, (x, 0, 0)), traj, ODD3)
    assert out.coeffs()[2][0] == x


def test_shift_and_dilation_examples():
    traj = PolyTrajectory.from_coeffs([[0, 0, 0], [0, 0, 0], [1, 0, 0]])
    assert [row[0] for row in apply_point_transform(TimeShift(1), traj, ODD3).coeffs()] == [1, -2, 1]
    cubic = PolyTrajectory.from_coeffs([[0, 0, 0]] * 3 + [[1, 0, 0]])
    assert apply_point_transform(Dilation(2), cubic, ODD3).coeffs()[3][0] == Fraction(1, 8)


def test_off_shell_trajectory_rejected():
    traj = PolyTrajectory.from_coeffs([[0, 0, 0]] * 4 + [[1, 0, 0]])
    with pytest.raises(OffShellError):
        apply_point_transform(TimeShift(1), traj, ODD3)


@pytest.mark.parametrize("spec", [Conformal(var(C)), Dilation(var(param("sigma"))),
                                  TimeShift(var(param("tau"))), Boost(2, (1, 2, 3)),
                                  plane_rotation(3, "yz", Fraction(5, 13), Fraction(12, 13))])
def test_prolongation_property(spec):
    assert verify_prolongation(ODD3, spec).ok


def test_parse_spec():
    assert parse_spec("conformal:c=1/2", 3) == Conformal(Fraction(1, 2))
    assert parse_spec("dilate:sigma=2", 2) == Dilation(2)
    assert parse_spec("shift:tau=-1/3", 3) == TimeShift(Fraction(-1, 3))
    assert parse_spec("boost:k=1,x=1,0", 2) == Boost(1, (1, 0))
    assert isinstance(parse_spec("rotate:xy=0,1", 2), Rotation)
    for bad in ("spin:w=1", "boost:k=1,x=1,0,0", "dilate:sigma=0", "rotate:xz=0,1"):
        with pytest.raises(ValueError):
            parse_spec(bad, 2)


def test_rotation_validation():
    with pytest.raises(ValueError):
        Rotation(((1, 0), (0, -1)))
