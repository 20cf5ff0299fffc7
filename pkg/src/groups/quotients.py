"""Desk-scale check that a word normally generates: no nontrivial small finite quotient survives killing it."""
import logging
from typing import List, Tuple

from sympy.combinatorics.coset_table import CosetTable
from sympy.combinatorics.fp_groups import FpGroup, low_index_subgroups
from sympy.combinatorics.free_groups import free_group

from src.groups.presentations import Presentation
from src.groups.smith import abelianization
from src.groups.words import Word
from src.utils.exceptions import PreconditionViolated

logger = logging.getLogger(__name__)

# (order, least index of a proper subgroup) for the nonabelian simple groups of order <= 660
SMALL_SIMPLE_GROUPS: List[Tuple[int, int]] = [(60, 5), (168, 7), (360, 6), (504, 9), (660, 11)]


def to_fp_group(p: Presentation) -> FpGroup:
    free, *gens = free_group(', '.join(p.generator_names))
    relators = []
    for word in p.relators:
        element = free.identity
        for g, e in word.letters:
            element = element * gens[g] ** e
        relators.append(element)
    return FpGroup(free, relators)


def coset_table_is_action(table: CosetTable, fp: FpGroup, p: Presentation) -> bool:
    """True when every generator column is a permutation of the cosets and every relator acts trivially."""
    cosets = list(table.omega)
    perms = []
    for gen in fp.generators:
        column = table.A_dict[gen]
        image = {alpha: table.table[alpha][column] for alpha in cosets}
        if set(image.values()) != set(cosets):
            return False
        perms.append(image)
    inverses = [{beta: alpha for alpha, beta in perm.items()} for perm in perms]
    for word in p.relators:
        for alpha in cosets:
            beta = alpha
            for g, e in word.letters:
                step = perms[g] if e > 0 else inverses[g]
                for _ in range(abs(e)):
                    beta = step[beta]
            if beta != alpha:
                return False
    return True


def index_bound_for_order(max_order: int) -> int:
    """Largest subgroup index that must be searched to see every perfect quotient of order <= max_order."""
    if max_order > SMALL_SIMPLE_GROUPS[-1][0]:
        raise PreconditionViolated(f"quotient order cap {max_order} is above {SMALL_SIMPLE_GROUPS[-1][0]}")
    indices = [index for order, index in SMALL_SIMPLE_GROUPS if order <= max_order]
    return max(indices, default=1)


def witness_kills_small_quotients(p: Presentation, witness: Word, max_order: int = 60) -> bool:
    """True when every quotient of order <= max_order in which the witness dies is trivial.

    A nontrivial finite quotient either has a nontrivial abelianization or maps
    onto a nonabelian simple group, which has a proper subgroup of small index.
    """
    killed = p.with_relators([witness])
    report = abelianization(killed)
    if report.rank or report.torsion:
        logger.debug(f"witness leaves abelian quotient {report.describe()}")
        return False
    bound = index_bound_for_order(max_order)
    if bound < 2:
        return True
    fp = to_fp_group(killed)
    tables = low_index_subgroups(fp, bound)
    candidates = [t for t in tables if len(t.omega) > 1]
    # low_index_subgroups can return tables that violate a relator
    proper = [t for t in candidates if coset_table_is_action(t, fp, killed)]
    if len(proper) < len(candidates):
        logger.debug(f"discarded {len(candidates) - len(proper)} coset tables that are not actions")
    logger.debug(f"{len(proper)} proper subgroups of index <= {bound} after killing the witness")
    return not proper
