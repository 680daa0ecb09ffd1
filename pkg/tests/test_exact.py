from fractions import Fraction as Fr

import pytest

from kstab.errors import KStabError
from kstab.exact import (
    PiecewisePoly,
    Poly,
    is_negative_definite,
    piecewise_integrate,
    poly_eval,
    poly_integrate,
    poly_interpolate,
    rat,
    solve_linear,
)

u = Poly.x()


def test_rat_accepts_exact_forms():
    assert rat("3/6") == Fr(1, 2)
    assert rat(4) == Fr(4)
    assert rat(Fr(2, 4)) == Fr(1, 2)


def test_rat_refuses_floats():
    with pytest.raises(TypeError):
        rat(0.5)
    with pytest.raises(KStabError) as e:
        rat("0.5x")
    assert e.value.code == "bad-rational"


def test_fraction_canonical_form():
    a = rat("182/352")
    assert (a.numerator, a.denominator) == (91, 176)
    assert hash(a) == hash(Fr(91, 176))


def test_poly_trims_and_degree():
    assert Poly((1, 0, 0)).degree == 0
    assert Poly().degree == -1
    assert Poly((0, 0)).is_zero()


@pytest.mark.parametrize(
    "p, x, want",
    [
        (22 - 2 * u**3, Fr(1), Fr(20)),
        (Poly(), Fr(7, 3), Fr(0)),
        (Fr(11, 32) * (4 - 3 * u) ** 3, Fr(4, 3), Fr(0)),
    ],
)
def test_poly_eval_examples(p, x, want):
    assert poly_eval(p, x) == want


def test_poly_integrate_examples():
    assert poly_integrate(22 - 2 * u**3, 0, 1) == Fr(43, 2)
    assert poly_integrate(Fr(11, 32) * (4 - 3 * u) ** 3, 0, Fr(4, 3)) == Fr(22, 3)
    assert poly_integrate(u**2 + 5, Fr(3, 7), Fr(3, 7)) == 0


def test_poly_integrate_reversed_bounds():
    with pytest.raises(KStabError) as e:
        poly_integrate(u, 1, 0)
    assert e.value.code == "empty-interval"


def test_interpolate_examples():
    assert poly_interpolate([(0, 0), (1, 1), (2, 4)], 2) == u**2
    assert poly_interpolate([(0, 22), (1, 20)], 1) == 22 - 2 * u
    cubic = 2 * (u - 3) * (u**2 - 3 * u - 3)
    xs = [Fr(1), Fr(3, 2), Fr(2), Fr(11, 4)]
    assert poly_interpolate([(x, cubic(x)) for x in xs], 3) == cubic


def test_interpolate_errors():
    with pytest.raises(KStabError) as e:
        poly_interpolate([(1, 0), (1, 2)], 1)
    assert e.value.code == "singular-system"
    with pytest.raises(KStabError) as e:
        poly_interpolate([(1, 0)], 1)
    assert e.value.code == "bad-sample-count"


def test_piecewise_examples():
    f = PiecewisePoly(
        (0, 1, 2, 3),
        (22 - 2 * u**3, (u + 1) * (u**2 - 10 * u + 19), 3 * (u - 3) * (2 * u - 7)),
        continuous=True,
    )
    assert piecewise_integrate(f) == Fr(161, 4)
    assert piecewise_integrate(PiecewisePoly((0, 1), (Poly(),))) == 0
    g = PiecewisePoly(
        (0, 1, 2, 3),
        (22 - 2 * u**3, -6 * u**2 + 6 * u + 20, 2 * (6 - u) * (u - 3) ** 2),
        continuous=True,
    )
    assert piecewise_integrate(g) == 39


def test_piecewise_continuity_flag():
    with pytest.raises(KStabError) as e:
        PiecewisePoly((0, 1, 2), (Poly.const(1), Poly.const(2)), continuous=True)
    assert e.value.code == "discontinuous"
    # the same data is fine when no continuity is claimed
    f = PiecewisePoly((0, 1, 2), (Poly.const(1), Poly.const(2)))
    assert piecewise_integrate(f) == 3


def test_piecewise_bad_breakpoints():
    with pytest.raises(KStabError):
        PiecewisePoly((0, 0), (Poly(),))
    with pytest.raises(KStabError):
        PiecewisePoly((0, 1), ())


def test_min_on_quadratic_vertex():
    p = (u - Fr(1, 3)) ** 2 - 1
    assert p.min_on(0, 1) == -1
    assert p.min_on(1, 2) == Fr(4, 9) - 1
    assert p.max_on(0, 1) == Fr(4, 9) - 1
    with pytest.raises(KStabError):
        (u**3).min_on(0, 1)


def test_solve_linear_and_singular():
    assert solve_linear([[Fr(2), Fr(1)], [Fr(1), Fr(3)]], [Fr(3), Fr(5)]) == [Fr(4, 5), Fr(7, 5)]
    with pytest.raises(KStabError):
        solve_linear([[Fr(1), Fr(2)], [Fr(2), Fr(4)]], [Fr(0), Fr(0)])


def test_negative_definite():
    assert is_negative_definite([])
    assert is_negative_definite([[Fr(-1), Fr(0)], [Fr(0), Fr(-1)]])
    assert not is_negative_definite([[Fr(-1), Fr(1)], [Fr(1), Fr(-1)]])
    assert not is_negative_definite([[Fr(1)]])


def test_poly_str():
    assert str(Poly()) == "0"
    assert str(3 - u + Fr(1, 2) * u**2) == "3 - u + 1/2*u^2"
