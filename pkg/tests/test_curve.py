import random
from fractions import Fraction
from importlib.resources import files

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from qmendo.curve import (
    CurveFileError,
    CurveModel,
    ReducedCurve,
    bad_primes,
    count_points,
    format_curve,
    integral_model,
    load_curve,
    parse_curve,
    poly_discriminant,
    poly_mul,
    reduce_curve,
)
from qmendo.quadfield import BadReductionError, DegreeOnePrime, QuadElem

from .oracles import naive_count_deg1, naive_count_deg2

X = sp.Symbol("X")
S = sp.Symbol("S")


def q(d, u, v=0):
    return QuadElem(d, Fraction(u), Fraction(v))


def test_integral_model_simple():
    raw = CurveModel(1, (0, Fraction(1, 2), 0, 0, 0, 0, 1))
    model = integral_model(raw)
    assert model.integral
    assert [c.u for c in model.coeffs] == [0, 2, 0, 0, 0, 0, 4]


def test_integral_model_keeps_integral_input():
    raw = CurveModel(1, (1, 0, 0, 0, 0, 0, 1))
    assert integral_model(raw).coeffs == raw.coeffs


def test_integral_model_c2(c2_raw):
    model = integral_model(c2_raw)
    assert all(c.u.denominator == 1 for c in model.coeffs)
    # expanded denominators have lcm 240; 120^2 already clears them
    assert model.coeffs[6].u == Fraction(83, 30) * 240 ** 2
    assert all((c.u * 120 ** 2).denominator == 1 for c in c2_raw.coeffs)


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        CurveModel(1, (0, 0, 0, 0, 0, 0, 0))


def test_degree_four_rejected():
    with pytest.raises(ValueError):
        CurveModel(1, (1, 0, 0, 0, 1))


def _sympy_disc(model):
    f = sum(sp.Rational(c.u.numerator, c.u.denominator) * X**k
            + sp.Rational(c.v.numerator, c.v.denominator) * S * X**k
            for k, c in enumerate(model.coeffs))
    return sp.expand(sp.discriminant(f, X).subs(S, sp.sqrt(model.d)))


@pytest.mark.parametrize("name", ["c1", "c2"])
def test_discriminant_matches_sympy(name, request):
    model = request.getfixturevalue(name)
    mine = model.binary_discriminant
    oracle = _sympy_disc(model)
    assert sp.simplify(oracle - (sp.Rational(mine.u.numerator, mine.u.denominator)
                                 + sp.Rational(mine.v.numerator, mine.v.denominator)
                                 * sp.sqrt(model.d))) == 0


def test_bad_primes_examples(c1, c2):
    assert bad_primes(integral_model(CurveModel(1, (1, 0, 0, 0, 0, 0, 1)))) == {2, 3}
    assert bad_primes(c1) == {2, 3, 5}
    assert 7 in bad_primes(c2)
    assert bad_primes(c2) == {2, 3, 5, 7}


def test_bad_primes_needs_integral_model(c2_raw):
    with pytest.raises(ValueError):
        bad_primes(c2_raw)


def test_singular_curve():
    # (x^2 + 1)^2 (x^2 + 2) has a repeated factor
    f = poly_mul(poly_mul([q(1, 1), q(1, 0), q(1, 1)], [q(1, 1), q(1, 0), q(1, 1)]),
                 [q(1, 2), q(1, 0), q(1, 1)])
    model = integral_model(CurveModel(1, tuple(f)))
    with pytest.raises(ValueError):
        bad_primes(model)


def test_fixture_matches_product_expansion(c1_raw, c2_raw):
    quartic = [q(2, Fraction(-25, 6), -25), q(2, 100), q(2, Fraction(-490, 6)), q(2, 20),
               q(2, Fraction(-1, 6), 1)]
    assert tuple(poly_mul([q(2, 5), q(2, 0), q(2, 1)], quartic)) == c1_raw.coeffs
    quartic = [q(1, Fraction(-1813, 120)), q(1, 49), q(1, Fraction(-1519, 30)), q(1, 14),
               q(1, Fraction(83, 30))]
    assert tuple(poly_mul([q(1, Fraction(7, 2)), q(1, 0), q(1, 1)], quartic)) == c2_raw.coeffs


def test_reduce_c1_at_7(c1):
    rc = reduce_curve(c1, DegreeOnePrime(7, 3))
    # c6 = 36(-1/6 + sqrt2) -> 36 * 4 = 144 = 4 mod 7
    assert rc.coeffs[6] == 36 * 4 % 7
    assert rc.lc_degree == 6
    assert rc.coeffs == tuple(
        (int(c.u) + int(c.v) * 3) % 7 for c in c1.coeffs
    )


def test_reduce_at_bad_prime(c1):
    with pytest.raises(BadReductionError):
        reduce_curve(c1, DegreeOnePrime(5, 0))
    with pytest.raises(BadReductionError):
        reduce_curve(c1, DegreeOnePrime(2, 0))


def test_reduce_over_q_is_plain_reduction(c2):
    rc = reduce_curve(c2, DegreeOnePrime(11, 0))
    assert rc.coeffs == tuple(int(c.u) % 11 for c in c2.coeffs)


def test_degree_drop_at_71(c1):
    # one prime above 71 kills c6 yet keeps the discriminant a unit
    rc = reduce_curve(c1, DegreeOnePrime(71, 12))
    assert rc.coeffs[6] == 0 and rc.lc_degree == 5
    assert count_points(rc, 1) == naive_count_deg1(list(rc.coeffs), 71)
    other = reduce_curve(c1, DegreeOnePrime(71, 59))
    assert other.lc_degree == 6
    assert count_points(rc, 1) == count_points(other, 1)
    assert count_points(rc, 2) == count_points(other, 2)


def test_count_examples(c1):
    rc = ReducedCurve(7, (1, 0, 0, 0, 0, 0, 1), 6)
    assert count_points(rc, 1) == 16
    c7 = reduce_curve(c1, DegreeOnePrime(7, 3))
    assert count_points(c7, 1) == 8
    assert count_points(c7, 2) == 62


def _random_smooth(rng, p, quintic=False):
    while True:
        coeffs = [rng.randrange(p) for _ in range(7)]
        if quintic:
            coeffs[6] = 0
            coeffs[5] = rng.randrange(1, p)
        else:
            coeffs[6] = rng.randrange(1, p)
        poly = sp.Poly(list(reversed(coeffs)), X, modulus=p)
        if sp.gcd(poly, poly.diff(X)).degree() == 0:
            return coeffs


def test_counts_against_naive_loops():
    rng = random.Random(20240)
    for p in (3, 5, 7, 11, 13, 31, 53):
        for quintic in (False, True):
            coeffs = _random_smooth(rng, p, quintic)
            rc = ReducedCurve(p, tuple(coeffs), 5 if quintic else 6)
            assert count_points(rc, 1) == naive_count_deg1(coeffs, p)
            assert count_points(rc, 2) == naive_count_deg2(coeffs, p)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([7, 11, 13, 17, 19, 23, 29, 37, 41, 43, 97, 199]), st.integers(0, 2**32))
def test_count_bounds(p, seed):
    coeffs = _random_smooth(random.Random(seed), p)
    rc = ReducedCurve(p, tuple(coeffs), 6)
    for deg in (1, 2):
        n = count_points(rc, deg)
        qq = p ** deg
        assert 0 <= n <= 2 * qq + 2
        assert (n - (qq + 1)) ** 2 <= 16 * qq


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=7, max_size=7),
       st.integers(1, 6), st.sampled_from([11, 13, 17, 19]))
def test_integralization_preserves_counts(nums, den, p):
    if nums[6] == 0:
        nums[6] = 1
    raw = CurveModel(1, tuple(Fraction(n, den) for n in nums))
    if not raw.binary_discriminant:
        return
    model = integral_model(raw)
    qp = DegreeOnePrime(p, 0)
    try:
        a, b = reduce_curve(raw, qp), reduce_curve(model, qp)
    except BadReductionError:
        return
    assert count_points(a, 1) == count_points(b, 1)
    assert count_points(a, 2) == count_points(b, 2)


def test_curve_file_round_trip(c1_raw):
    assert parse_curve(format_curve(c1_raw, "C1")) == c1_raw


def test_curve_file_errors():
    good = "d 2\n" + "".join(f"c {k} 1/1 0/1\n" for k in range(7))
    parse_curve(good)
    with pytest.raises(CurveFileError) as err:
        parse_curve(good.replace("c 3 1/1 0/1", "c 3 1/0 0/1"))
    assert err.value.line == 5
    with pytest.raises(CurveFileError):
        parse_curve("d 4\n")
    with pytest.raises(CurveFileError):
        parse_curve(good.replace("c 6 1/1 0/1\n", ""))
    with pytest.raises(CurveFileError) as err:
        parse_curve("# header\nd 2\nbogus\n")
    assert err.value.line == 3
    with pytest.raises(CurveFileError):
        parse_curve("d 1\n" + "".join(f"c {k} 1/1 1/1\n" for k in range(7)))


def test_bundled_fixture_loads():
    model = load_curve(files("qmendo") / "data" / "c1.curve")
    assert model.d == 2 and model.degree == 6


def test_poly_discriminant_small():
    # x^2 + 1 -> -4
    assert poly_discriminant([q(1, 1), q(1, 0), q(1, 1)]) == q(1, -4)
