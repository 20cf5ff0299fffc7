from fractions import Fraction
from itertools import product

import pytest

from src.arithmetic.exact_core import GoodTriple, Sign, SignMaps, as_rational, is_good, psi, sign_maps
from src.utils.exceptions import ParseError, PreconditionViolated

F = Fraction


class TestPsi:

    @pytest.mark.parametrize("x, expected", [
        (0, 0), ("7/10", F(3, 10)), ("-5/6", F(1, 6)), ("1/2", F(1, 2)), ("5/2", F(1, 2)), (3, 0),
    ])
    def test_examples(self, x, expected):
        assert psi(x) == expected

    def test_symmetric_and_periodic(self):
        for k in range(1, 13):
            x = F(k, 13)
            assert psi(x) == psi(-x) == psi(x + 4) == psi(x - 7)

    def test_range(self):
        for k in range(-30, 31):
            assert 0 <= psi(F(k, 7)) <= F(1, 2)

    def test_rejects_garbage(self):
        with pytest.raises(ParseError):
            as_rational("one third")
        with pytest.raises(ParseError):
            as_rational("1/0")


class TestIsGood:

    @pytest.mark.parametrize("triple, expected", [
        (("1/6", "1/6", "1/6"), True),
        (("1/2", "1/4", "1/8"), False),
        (("1/6", "1/4", "1/3"), True),
        (("1/4", "1/4", "1/2"), False),
    ])
    def test_examples(self, triple, expected):
        assert is_good(*triple) is expected

    def test_good_triple_validates(self):
        assert GoodTriple("1/6", "1/4", "1/3").eta == F(1, 4)
        with pytest.raises(PreconditionViolated):
            GoodTriple("1/4", "1/4", "1/2")


class TestSign:

    def test_negation_and_parity(self):
        assert -Sign.PLUS is Sign.MINUS
        assert -Sign.MINUS is Sign.PLUS
        assert Sign.parity(4) is Sign.PLUS
        assert Sign.parity(-1) is Sign.MINUS


class TestSignMaps:

    def test_constant_phi_identity_theta(self):
        maps = sign_maps("1/6", "1/4", "1/3")
        assert maps.phi == {Sign.PLUS: Sign.PLUS, Sign.MINUS: Sign.PLUS}
        assert maps.theta == {Sign.PLUS: Sign.PLUS, Sign.MINUS: Sign.MINUS}

    def test_negating_eta_swaps_maps(self):
        first = sign_maps("1/6", "1/4", "1/3")
        second = sign_maps("1/6", "-1/4", "1/3")
        assert second.phi == first.theta
        assert second.theta == first.phi

    def test_as_dict(self):
        maps = sign_maps("1/3", "2/5", "3/7")
        assert maps.as_dict() == {'phi': {'1': -1, '-1': 1}, 'theta': {'1': 1, '-1': -1}}

    @pytest.mark.parametrize("triple", [
        ("1/4", "1/4", "1/2"),   # xi + eta + zeta = 1
        ("1/3", "1/3", "1/3"),   # good, but the sum is 1
        ("1", "1/3", "1/3"),     # integer coordinate
        ("1/2", "1/4", "1/8"),   # not good
    ])
    def test_preconditions(self, triple):
        with pytest.raises(PreconditionViolated):
            sign_maps(*triple)

    @pytest.mark.slow
    def test_exhaustive_small_denominators(self):
        values = sorted({F(n, d) for d in range(2, 13) for n in range(1, d)})
        checked = 0
        for xi, eta, zeta in product(values, repeat=3):
            if not is_good(xi, eta, zeta):
                continue
            if any((xi + s * eta + t * zeta).denominator == 1 for s in (1, -1) for t in (1, -1)):
                continue
            maps = sign_maps(xi, eta, zeta)
            assert maps.phi != maps.theta
            assert SignMaps.is_bijection(maps.phi) or SignMaps.is_bijection(maps.theta)
            checked += 1
        assert checked > 1000
