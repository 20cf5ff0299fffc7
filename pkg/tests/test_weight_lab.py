from fractions import Fraction

import pytest

from src.arithmetic.weight_lab import (FALLBACK_ROUTE, QuasiPrimeTriple, ResidueData, RstWitness, Verdict,
                                       commuting_trace_angles, find_rst_bruteforce, find_rst_constructive,
                                       is_case_analysis_route, is_quasiprime, is_valid_witness, quasiprime_triples,
                                       quasiprimes_up_to, residue_classes, weight_certificate)
from src.utils.exceptions import ExcludedTriple, NoRstWitness, PreconditionViolated


def _folded(residue, modulus):
    k = residue % (2 * modulus)
    return min(k, 2 * modulus - k)


class TestQuasiPrimes:

    @pytest.mark.parametrize("n, expected", [(4, True), (3, True), (23, True), (2, False), (9, False),
                                             (1, False), (8, False)])
    def test_is_quasiprime(self, n, expected):
        assert is_quasiprime(n) is expected

    def test_rejects_nonpositive(self):
        with pytest.raises(PreconditionViolated):
            is_quasiprime(0)

    def test_up_to(self):
        assert quasiprimes_up_to(13) == [3, 4, 5, 7, 11, 13]

    def test_triples_exclude_345(self):
        triples = quasiprime_triples(7)
        assert [t.moduli for t in triples] == [(3, 4, 7), (3, 5, 7), (4, 5, 7)]
        assert len(quasiprime_triples(7, include_exceptional=True)) == 4

    @pytest.mark.parametrize("moduli", [(3, 3, 5), (3, 4, 6), (2, 5, 7)])
    def test_triple_validation(self, moduli):
        with pytest.raises(PreconditionViolated):
            QuasiPrimeTriple(*moduli)

    def test_residue_classes_are_units(self):
        classes = list(residue_classes(QuasiPrimeTriple(3, 4, 5)))
        # units mod 6, 8 and 10
        assert len(classes) == 2 * 4 * 4
        assert all(r.d % 2 and r.e % 2 and r.f % 2 for r in classes)


class TestBruteforce:

    @pytest.mark.parametrize("residues", [(1, 1, 3), (1, 3, 1)])
    def test_exceptional_counterexamples(self, residues):
        assert find_rst_bruteforce(QuasiPrimeTriple(3, 4, 5), ResidueData(*residues)) is None

    def test_first_witness(self):
        witness = find_rst_bruteforce(QuasiPrimeTriple(3, 5, 7), ResidueData(1, 1, 1))
        assert witness.values == (1, 1, 1)
        assert witness.route == 'bruteforce'

    def test_rejects_non_unit_residue(self):
        with pytest.raises(PreconditionViolated):
            find_rst_bruteforce(QuasiPrimeTriple(3, 5, 7), ResidueData(3, 1, 1))


class TestConstructive:

    @pytest.mark.parametrize("moduli, residues", [
        ((3, 5, 7), (1, 1, 1)),
        ((5, 7, 11), (3, 1, 1)),
        ((4, 3, 7), (1, 1, 5)),
        ((13, 4, 23), (5, 7, 9)),
    ])
    def test_witness_validates(self, moduli, residues):
        triple, res = QuasiPrimeTriple(*moduli), ResidueData(*residues)
        witness = find_rst_constructive(triple, res)
        assert is_valid_witness(triple, res, *witness.values)
        assert find_rst_bruteforce(triple, res) is not None

    def test_even_multiplier_at_four_moves_to_next_family(self):
        # u = 2 lands on the modulus 4
        witness = find_rst_constructive(QuasiPrimeTriple(4, 3, 7), ResidueData(1, 1, 5))
        assert witness.route == 'two-v'
        assert witness.values == (1, 1, 2)

    def test_excludes_345(self):
        with pytest.raises(ExcludedTriple):
            find_rst_constructive(QuasiPrimeTriple(5, 3, 4), ResidueData(1, 1, 1))

    @pytest.mark.parametrize("moduli, residues", [
        ((3, 4, 7), (1, 3, 1)),
        ((3, 4, 7), (5, 5, 13)),
        ((4, 5, 7), (3, 1, 1)),
        ((4, 19, 23), (3, 1, 1)),
    ])
    def test_classes_without_witness(self, moduli, residues):
        triple, res = QuasiPrimeTriple(*moduli), ResidueData(*residues)
        assert find_rst_bruteforce(triple, res) is None
        with pytest.raises(NoRstWitness):
            find_rst_constructive(triple, res)

    def test_case_analysis_covers_small_triples(self):
        missing = set()
        for triple in quasiprime_triples(7):
            for res in residue_classes(triple):
                if find_rst_bruteforce(triple, res) is None:
                    with pytest.raises(NoRstWitness):
                        find_rst_constructive(triple, res)
                    missing.add((triple.moduli, tuple(_folded(k, m) for k, m in zip(res.values, triple.moduli))))
                    continue
                witness = find_rst_constructive(triple, res)
                assert is_case_analysis_route(witness.route), (triple.moduli, res.values, witness.route)
                assert is_valid_witness(triple, res, *witness.values)
        assert missing == {((3, 4, 7), (1, 3, 1)), ((4, 5, 7), (3, 1, 1))}

    @pytest.mark.slow
    def test_agrees_with_bruteforce_up_to_23(self):
        for triple in quasiprime_triples(23):
            for res in residue_classes(triple):
                expected = find_rst_bruteforce(triple, res)
                if expected is None:
                    with pytest.raises(NoRstWitness):
                        find_rst_constructive(triple, res)
                else:
                    witness = find_rst_constructive(triple, res)
                    assert is_valid_witness(triple, res, *witness.values), (triple.moduli, res.values)

    def test_parity_adjustment_at_four(self, mocker):
        # sorted coordinates (7, 5, 4): the 2 lands on the modulus 4
        mocker.patch('src.arithmetic.weight_lab._proof_candidates', return_value=[('u11', (1, 1, 2))])
        logger = mocker.patch('src.arithmetic.weight_lab.logger')
        witness = find_rst_constructive(QuasiPrimeTriple(4, 5, 7), ResidueData(1, 1, 1))
        assert witness.route == 'u11+parity'
        assert witness.values == (1, 1, 1)
        assert is_case_analysis_route(witness.route)
        logger.warning.assert_called_once()

    def test_fallback_is_labelled(self, mocker):
        mocker.patch('src.arithmetic.weight_lab._proof_candidates', return_value=[('u11', (2, 4, 6))])
        logger = mocker.patch('src.arithmetic.weight_lab.logger')
        witness = find_rst_constructive(QuasiPrimeTriple(3, 5, 7), ResidueData(1, 1, 1))
        assert witness.route == FALLBACK_ROUTE
        assert witness.values == (1, 1, 1)
        assert not is_case_analysis_route(witness.route)
        logger.warning.assert_called_once()


class TestTraceAngles:

    def test_angles(self):
        triple, res = QuasiPrimeTriple(3, 5, 7), ResidueData(1, 1, 1)
        angles = commuting_trace_angles(RstWitness(1, 1, 1), triple, res)
        assert angles.alpha == Fraction(71, 210)
        assert angles.delta == Fraction(-1, 210)
        assert angles.parities == {'+++': 1, '++-': 1, '+-+': 1, '+--': -1}
        assert angles.distinct_classes

    def test_pattern_relations(self):
        triple, res = QuasiPrimeTriple(3, 5, 7), ResidueData(1, 1, 1)
        angles = commuting_trace_angles(RstWitness(1, 1, 1), triple, res)
        assert angles.beta == angles.alpha - 2 * Fraction(1, 14)
        assert angles.gamma == angles.alpha - 2 * Fraction(1, 10)

    def test_rejects_non_witness(self):
        with pytest.raises(PreconditionViolated):
            commuting_trace_angles(RstWitness(2, 4, 6), QuasiPrimeTriple(3, 5, 7), ResidueData(1, 1, 1))


class TestWeightCertificate:

    def test_even_e_u(self):
        cert = weight_certificate(QuasiPrimeTriple(3, 5, 7), (2, 0, 0, 0))
        assert cert.verdict is Verdict.KILLED_BY_DIVISIBILITY
        assert cert.reason == 'E_u even'

    def test_a_divides_d(self):
        cert = weight_certificate(QuasiPrimeTriple(3, 5, 7), (1, 1, 0, 0))
        assert cert.verdict is Verdict.KILLED_BY_DIVISIBILITY
        assert cert.reason == 'a divides d'
        assert cert.derived_residues.values == (3, 1, 1)

    def test_obstructed(self):
        triple = QuasiPrimeTriple(3, 5, 7)
        cert = weight_certificate(triple, (1, 0, 0, 0))
        assert cert.verdict is Verdict.OBSTRUCTED_BY_GOOD_TRIPLE
        assert cert.derived_residues.values == (1, 1, 1)
        assert is_valid_witness(triple, cert.derived_residues, *cert.witness.values)
        assert cert.angles is not None
        assert cert.upper_bound == "normal closure of {xy, u}"

    def test_exceptional_triple_uses_bruteforce(self):
        triple = QuasiPrimeTriple(3, 4, 5)
        cert = weight_certificate(triple, (1, 0, 0, -1))
        assert cert.derived_residues.values == (1, 1, -1)
        expected = find_rst_bruteforce(triple, ResidueData(1, 1, -1))
        if expected is None:
            assert cert.verdict is Verdict.NOT_OBSTRUCTED
        else:
            assert cert.verdict is Verdict.OBSTRUCTED_BY_GOOD_TRIPLE
            assert cert.witness.values == expected.values

    def test_exceptional_counterexample_is_not_obstructed(self):
        # (E_u, E_x, E_y, E_z) = (1, 0, 0, 1) gives (d, e, f) = (1, 1, 3)
        cert = weight_certificate(QuasiPrimeTriple(3, 4, 5), (1, 0, 0, 1))
        assert cert.verdict is Verdict.NOT_OBSTRUCTED
        assert cert.witness is None

    def test_class_without_witness_is_not_obstructed(self):
        # (E_u, E_x, E_y, E_z) = (1, 0, 1, 0) gives (d, e, f) = (1, 3, 1)
        cert = weight_certificate(QuasiPrimeTriple(3, 4, 7), (1, 0, 1, 0))
        assert cert.verdict is Verdict.NOT_OBSTRUCTED
        assert cert.witness is None
        assert cert.reason == "no (r, s, t) exists for (3, 4, 7) at these residues"
