import pytest

from src.groups.quotients import witness_kills_small_quotients
from src.orbifolds.bases import (CaseTag, DiskBase, SphereBase, classify_base, format_base,
                                 max_disjoint_common_factor_pairs, normal_generator_witness, orbifold_presentation,
                                 parse_base, twist_spin_base_check)
from src.utils.exceptions import ParseError, PreconditionViolated


class TestParseBase:

    @pytest.mark.parametrize("text, expected", [
        ("S2(2,3,6)", SphereBase((2, 3, 6))),
        ("s2( 2, 3, 6 )", SphereBase((2, 3, 6))),
        ("D(3;3,3,3)", DiskBase((3,), (3, 3, 3))),
        ("D(;2,3,5)", DiskBase((), (2, 3, 5))),
    ])
    def test_parse(self, text, expected):
        assert parse_base(text) == expected

    @pytest.mark.parametrize("text", ["P2(3,4,5)", "D(;2,3,5)", "D(3,5;)"])
    def test_format(self, text):
        assert format_base(parse_base(text)) == text

    @pytest.mark.parametrize("text", ["T2(2,3)", "S2(2;3)", "S2(2,x)", "S2 2,3,6"])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            parse_base(text)

    def test_order_one(self):
        with pytest.raises(PreconditionViolated):
            parse_base("S2(1,3,5)")


class TestClassifyBase:

    @pytest.mark.parametrize("text, tag, open_status", [
        ("S2(2,3,6)", CaseTag.S2, None),
        ("S2(2,3,5,7,11)", CaseTag.S2, "weight 1 unknown for m >= 5"),
        ("P2(3,4,5)", CaseTag.P2_345, "weight 1 unknown for P2(3,4,5)"),
        ("P2(2,3)", CaseTag.P2, None),
        ("P2(2,3,5)", CaseTag.P2, "weight 1 unknown for m = 3"),
        ("D(3;3)", CaseTag.DISK, None),
        ("D(3,5;2)", CaseTag.DISK, "weight 1 unknown for p = 2"),
        ("D(;2,3,5)", CaseTag.DISK, None),
    ])
    def test_admissible(self, text, tag, open_status):
        verdict = classify_base(parse_base(text))
        assert verdict.admissible
        assert verdict.case_tag is tag
        assert verdict.open_status == open_status

    @pytest.mark.parametrize("text, failing", [
        ("S2(2,4,6)", "no three cone orders share a nontrivial factor"),
        ("S2(2,3)", "m = 2 >= 3"),
        ("S2(2,4,3,9,5,25)", "at most two disjoint pairs share a factor (found 3)"),
        ("P2(3,5,7)", "one cone order is 2 when m = 3"),
        ("P2(2,4)", "cone orders pairwise coprime"),
        ("D(3,5,7;)", "p = 3 <= 2"),
        ("D(2;3)", "cone orders all odd"),
        ("D(;2,4,3)", "at most one corner order even (found 2)"),
        ("D(;2)", "2p + q = 1 >= 3"),
    ])
    def test_rejected(self, text, failing):
        verdict = classify_base(parse_base(text))
        assert not verdict.admissible
        assert verdict.case_tag is CaseTag.REJECTED
        assert f"FAIL: {failing}" in verdict.reasons

    def test_matching_size(self):
        assert max_disjoint_common_factor_pairs([2, 4, 3, 9]) == 2
        assert max_disjoint_common_factor_pairs([6, 10, 15]) == 1
        assert max_disjoint_common_factor_pairs([5, 7, 11]) == 0


class TestOrbifoldPresentation:

    def test_sphere(self):
        op = orbifold_presentation(parse_base("S2(2,3,6)"))
        assert op.presentation.generator_names == ('v1', 'v2', 'v3')
        assert op.presentation.format_relators() == ['v1^2', 'v2^3', 'v3^6', 'v1 v2 v3']
        assert op.presentation.annotations['base'] == "S2(2,3,6)"

    def test_projective(self):
        op = orbifold_presentation(parse_base("P2(3,5)"))
        assert op.presentation.format_relators() == ['u^-2 v1 v2', 'v1^3', 'v2^5']
        assert op.orientation_of('u') == 'reversing'
        assert op.orientation_of('v2') == 'preserving'

    def test_disk(self):
        op = orbifold_presentation(parse_base("D(3;3)"))
        assert op.presentation.generator_names == ('v1', 'x1', 'x2')
        assert op.presentation.format_relators() == [
            'v1^3', 'x1^2', 'x2^2', 'x1 x2 x1 x2 x1 x2', 'x2 v1 x1^-1 v1^-1']
        assert op.orientation_of('x1') == 'reversing'


class TestNormalGeneratorWitness:

    @pytest.mark.parametrize("text, word", [
        ("S2(2,3,6)", 'v2^-1 v3'),
        ("S2(3,4,5)", 'v1^-1 v2'),
        ("S2(2,3,5,7)", 'v1 v2'),
        ("P2(2,3)", 'v1^-1 u'),
        ("D(;3,3,3)", 'x1'),
        ("D(;2,3,5)", 'x1'),
        ("D(3;2,3)", 'v1 x1'),
        ("D(5;4)", 'v1 x1'),
    ])
    def test_witness_kills_small_quotients(self, text, word):
        base = parse_base(text)
        witness = normal_generator_witness(base)
        assert witness.text == word
        assert witness_kills_small_quotients(orbifold_presentation(base).presentation, witness.word)

    @pytest.mark.parametrize("text", ["S2(2,4,6)", "S2(2,2,2,2)", "P2(3,4,5)", "D(3,5;3)", "D(;2,4,3)", "D(3;3,2)"])
    def test_no_witness(self, text):
        assert normal_generator_witness(parse_base(text)) is None


class TestTwistSpin:

    def test_sphere_with_twist(self):
        ok, detail = twist_spin_base_check(parse_base("S2(2,3,6)"), 6)
        assert ok
        assert detail == "S2(a, b, r) with (a, b) = (2, 3) coprime and r = 6"

    def test_twist_in_any_position(self):
        assert twist_spin_base_check(parse_base("S2(5,2,3)"), 5)[0]

    def test_wrong_twist(self):
        assert not twist_spin_base_check(parse_base("S2(2,3,6)"), 5)[0]

    def test_corner_disk(self):
        assert twist_spin_base_check(parse_base("D(;2,3,5)"), 2)[0]
        assert not twist_spin_base_check(parse_base("D(;2,3,5)"), 3)[0]

    def test_projective_never(self):
        assert not twist_spin_base_check(parse_base("P2(2,3)"), 2)[0]
