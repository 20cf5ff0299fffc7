from fractions import Fraction

import pytest
from sympy import Poly, cyclotomic_poly

from src.seifert.alexander import LaurentPoly, alexander_torus, cyclotomic_candidates, is_cyclotomic_squarefree, t
from src.seifert.surgery import (FAIL, NOT_CHECKED, NOT_COMPUTABLE, PASS, connected_sum_surgery_data, euler_number,
                                 format_seifert, normalize_pairs, parse_seifert, surgery_conditions_check,
                                 torus_surgery_data)
from src.utils.exceptions import InvalidTorusParameters, ParseError, PreconditionViolated


class TestSeifertData:

    def test_trefoil_surgery(self):
        s = torus_surgery_data(3, 2)
        assert format_seifert(s) == "S2(2,3,6) ; (3,2) (2,3) (6,-13)"
        assert euler_number(s) == 0

    @pytest.mark.parametrize("p, q", [(3, 2), (5, 2), (5, 3), (7, 4), (11, 6)])
    def test_euler_number_vanishes(self, p, q):
        assert euler_number(torus_surgery_data(p, q)) == 0
        assert euler_number(connected_sum_surgery_data(p, q)) == 0

    def test_connected_sum_base(self):
        assert connected_sum_surgery_data(3, 2).base.cone_orders == (2, 2, 3, 3)

    def test_normalize_keeps_euler_number(self):
        s = normalize_pairs(torus_surgery_data(3, 2))
        assert s.pairs == ((3, 2), (2, 1), (6, 5), (1, -2))
        assert euler_number(s) == 0

    def test_euler_number(self):
        s = parse_seifert("S2(2,3,5) ; (2,1) (3,1) (5,1) (1,-1)")
        assert euler_number(s) == Fraction(-1, 30)

    @pytest.mark.parametrize("p, q", [(2, 3), (4, 2), (3, 1), (6, 4)])
    def test_invalid_torus_parameters(self, p, q):
        with pytest.raises(InvalidTorusParameters):
            torus_surgery_data(p, q)

    @pytest.mark.parametrize("text", [
        "S2(2,3,6) (3,2) (2,3) (6,-13)",
        "D(3;3) ; (3,1)",
        "S2(2,3,6) ; (3,2) (2,3) (6,-13) x",
    ])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            parse_seifert(text)

    @pytest.mark.parametrize("text", [
        "S2(2,3,6) ; (3,2) (2,3)",
        "S2(2,4,5) ; (2,1) (4,2) (5,1)",
    ])
    def test_inconsistent_pairs(self, text):
        with pytest.raises(PreconditionViolated):
            parse_seifert(text)


class TestSurgeryConditions:

    def test_trefoil_passes(self):
        report = surgery_conditions_check(torus_surgery_data(3, 2), LaurentPoly.parse("t^2 - t + 1"))
        outcomes = {k: c.outcome for k, c in report.conditions.items()}
        assert outcomes == {'1': PASS, '2': PASS, '3': PASS, '4': NOT_COMPUTABLE, '5': PASS}
        assert report.overall

    def test_without_alexander(self):
        report = surgery_conditions_check(torus_surgery_data(5, 2))
        assert report.conditions['5'].outcome == NOT_CHECKED
        assert report.overall

    def test_bad_alexander(self):
        report = surgery_conditions_check(torus_surgery_data(3, 2), LaurentPoly.parse("t^2 - 3*t + 1"))
        assert report.conditions['5'].outcome == FAIL
        assert not report.overall

    def test_nonzero_euler_number(self):
        report = surgery_conditions_check(parse_seifert("S2(2,3,5) ; (2,1) (3,1) (5,1) (1,-1)"))
        assert report.conditions['1'].outcome == FAIL
        assert report.conditions['2'].outcome == FAIL

    def test_known_discrepancy_is_noted(self, mocker):
        logger = mocker.patch('src.seifert.surgery.logger')
        report = surgery_conditions_check(parse_seifert("S2(2,3,19) ; (2,1) (3,1) (19,1)"))
        assert len(report.notes) == 1
        assert "2, 3 and 19" in report.notes[0]
        assert report.conditions['2'].outcome == FAIL
        logger.warning.assert_called_once()


class TestLaurentPoly:

    def test_parse_negative_exponents(self):
        f = LaurentPoly.parse("t^-1 - 1 + t")
        assert (f.low, f.coeffs) == (-1, (1, -1, 1))
        assert f.format() == "t^-1 - 1 + t"
        assert f.is_palindromic()
        assert f.span == 2

    def test_trims_zero_ends(self):
        assert LaurentPoly(0, (0, 0, 2, 0)) == LaurentPoly(2, (2,))

    @pytest.mark.parametrize("text", ["t^(1/2)", "x + 1", "t/2", "t +"])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            LaurentPoly.parse(text)


class TestAlexander:

    def test_trefoil(self):
        f = alexander_torus(3, 2)
        assert f == LaurentPoly.parse("t^2 - t + 1")
        assert f.format() == "1 - t + t^2"
        assert f.at_one() == 1

    @pytest.mark.parametrize("p, q, factors", [(3, 2, (6,)), (5, 2, (10,)), (5, 3, (15,)), (4, 3, (6, 12))])
    def test_cyclotomic_factors(self, p, q, factors):
        f = alexander_torus(p, q)
        assert f.span == (p - 1) * (q - 1)
        assert f.is_palindromic()
        report = is_cyclotomic_squarefree(f)
        assert report.squarefree
        assert report.cyclotomic_factors == factors

    def test_single_cyclotomic_polynomials(self):
        for n in range(1, 40):
            f = LaurentPoly.from_poly(Poly(cyclotomic_poly(n, t), t))
            assert is_cyclotomic_squarefree(f).cyclotomic_factors == (n,), n

    def test_sign_unit(self):
        assert is_cyclotomic_squarefree(LaurentPoly.parse("-(t^2 - t + 1)")).cyclotomic_factors == (6,)

    @pytest.mark.parametrize("text, squarefree", [("t^2 - 2*t + 1", False), ("t^2 + t + 2", True),
                                                  ("t^2 - 3*t + 1", True)])
    def test_not_cyclotomic(self, text, squarefree):
        report = is_cyclotomic_squarefree(LaurentPoly.parse(text))
        assert report.squarefree is squarefree
        assert report.cyclotomic_factors is None

    def test_zero_polynomial(self):
        with pytest.raises(PreconditionViolated):
            is_cyclotomic_squarefree(LaurentPoly.parse("0"))

    def test_candidates_cover_degree(self):
        assert cyclotomic_candidates(2) == [1, 2, 3, 4, 6]
