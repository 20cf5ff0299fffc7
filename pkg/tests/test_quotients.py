from types import SimpleNamespace

import pytest
from sympy.combinatorics.fp_groups import low_index_subgroups

from src.groups.presentations import parse_presentation
from src.groups.quotients import (coset_table_is_action, index_bound_for_order, to_fp_group,
                                  witness_kills_small_quotients)
from src.utils.exceptions import PreconditionViolated

A5 = "x, y\nx^2\ny^3\n(x y)^5\n"


class TestIndexBound:

    @pytest.mark.parametrize("max_order, expected", [(1, 1), (59, 1), (60, 5), (167, 5), (168, 7), (660, 11)])
    def test_bounds(self, max_order, expected):
        assert index_bound_for_order(max_order) == expected

    def test_cap(self):
        with pytest.raises(PreconditionViolated):
            index_bound_for_order(661)


class TestWitnessKillsSmallQuotients:

    def test_trivialising_witness(self):
        p = parse_presentation("x, y\nx^2\ny^3\n")
        assert witness_kills_small_quotients(p, p.word('x y')) is True

    def test_abelian_quotient_survives(self):
        p = parse_presentation("x, y\nx^2\ny^3\n")
        assert witness_kills_small_quotients(p, p.word('x')) is False

    def test_perfect_quotient_survives(self):
        p = parse_presentation(A5)
        assert witness_kills_small_quotients(p, p.word('x^2')) is False

    def test_order_cap_hides_perfect_quotients(self):
        p = parse_presentation(A5)
        assert witness_kills_small_quotients(p, p.word('x^2'), max_order=59) is True

    def test_fp_group_order(self):
        assert to_fp_group(parse_presentation(A5)).order() == 60


def _table(fp, *columns):
    """Coset table with one column per generator; inverse columns are left unfilled."""
    a_dict = {}
    for i, gen in enumerate(fp.generators):
        a_dict[gen], a_dict[gen ** -1] = 2 * i, 2 * i + 1
    rows = [[entry for column in columns for entry in (column[alpha], None)] for alpha in range(len(columns[0]))]
    return SimpleNamespace(omega=list(range(len(columns[0]))), A_dict=a_dict, table=rows)


class TestCosetTableIsAction:
    Z2 = "x\nx^2\n"

    def test_swap_satisfies_relator(self):
        p = parse_presentation(self.Z2)
        assert coset_table_is_action(_table(to_fp_group(p), [1, 0]), to_fp_group(p), p)

    def test_three_cycle_violates_relator(self):
        p = parse_presentation(self.Z2)
        assert not coset_table_is_action(_table(to_fp_group(p), [1, 2, 0]), to_fp_group(p), p)

    def test_incomplete_column(self):
        p = parse_presentation(self.Z2)
        assert not coset_table_is_action(_table(to_fp_group(p), [1, None]), to_fp_group(p), p)

    def test_sympy_tables_for_a5(self):
        p = parse_presentation(A5)
        fp = to_fp_group(p)
        valid = [t for t in low_index_subgroups(fp, 5) if coset_table_is_action(t, fp, p)]
        assert any(len(t.omega) == 5 for t in valid)

    def test_spurious_tables_are_discarded(self, mocker):
        p = parse_presentation("x\nx^2\n")
        fp = to_fp_group(p)
        mocker.patch('src.groups.quotients.low_index_subgroups',
                     return_value=[_table(fp, [0]), _table(fp, [1, 2, 0])])
        assert witness_kills_small_quotients(p, p.word('x')) is True

    def test_genuine_table_keeps_quotient(self, mocker):
        p = parse_presentation("x, y\nx^2\n")
        fp = to_fp_group(p.with_relators([p.word('y')]))
        mocker.patch('src.groups.quotients.low_index_subgroups',
                     return_value=[_table(fp, [0], [0]), _table(fp, [1, 0], [0, 1])])
        mocker.patch('src.groups.quotients.abelianization', return_value=SimpleNamespace(rank=0, torsion=()))
        assert witness_kills_small_quotients(p, p.word('y')) is False
