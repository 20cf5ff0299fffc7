"""Seifert data of knot manifolds over S^2 and the arithmetic conditions such data must meet.

Text form (round-trips with ``format_seifert``)::

    S2(2,3,6) ; (3,2) (2,3) (6,-13)
"""
import logging
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from src.orbifolds.bases import (SphereBase, format_base, has_triple_common_factor,
                                 max_disjoint_common_factor_pairs, parse_base)
from src.seifert.alexander import LaurentPoly, check_torus_parameters, is_cyclotomic_squarefree
from src.utils.exceptions import ParseError, PreconditionViolated

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]

KNOWN_DISCREPANCIES = {
    (2, 3, 19): "reported as the base of a Seifert fibred knot manifold although 2, 3 and 19 are "
                "pairwise coprime, which this condition excludes",
}


@dataclass(frozen=True)
class SeifertData:
    """Base S^2(alpha_i) and unnormalized pairs (alpha_i, beta_i); extra pairs (1, b) are allowed."""
    base: SphereBase
    pairs: Tuple[Pair, ...]

    def __post_init__(self):
        if not isinstance(self.base, SphereBase):
            raise PreconditionViolated("Seifert data here is over an S2 base")
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        object.__setattr__(self, 'pairs', pairs)
        for alpha, beta in pairs:
            if alpha < 1 or gcd(alpha, abs(beta)) != 1:
                raise PreconditionViolated(f"pair ({alpha}, {beta}) needs alpha >= 1 and gcd(alpha, |beta|) = 1")
        exceptional = Counter(a for a, _ in pairs if a >= 2)
        if exceptional != Counter(self.base.cone_orders):
            raise PreconditionViolated(
                f"pair multiplicities {sorted(exceptional.elements())} do not match base "
                f"{format_base(self.base)}")


def euler_number(s: SeifertData) -> Fraction:
    """-sum beta_i / alpha_i"""
    return -sum((Fraction(beta, alpha) for alpha, beta in s.pairs), Fraction(0))


def normalize_pairs(s: SeifertData) -> SeifertData:
    """Move each beta_i into [0, alpha_i), collecting the integer parts in a single (1, b) pair."""
    shift = 0
    pairs: List[Pair] = []
    for alpha, beta in s.pairs:
        if alpha == 1:
            shift += beta
            continue
        q, r = divmod(beta, alpha)
        shift += q
        pairs.append((alpha, r))
    if shift:
        pairs.append((1, shift))
    return SeifertData(s.base, tuple(pairs))


def torus_surgery_data(p: int, q: int) -> SeifertData:
    """0-surgery on the (p, q) torus knot: pairs (p, q), (q, p), (pq, -p^2 - q^2)."""
    check_torus_parameters(p, q)
    return SeifertData(SphereBase(tuple(sorted((p, q, p * q)))),
                       ((p, q), (q, p), (p * q, -p * p - q * q)))


def connected_sum_surgery_data(p: int, q: int) -> SeifertData:
    """0-surgery on k_{p,q} # -k_{p,q}, over S^2(p, p, q, q)."""
    check_torus_parameters(p, q)
    return SeifertData(SphereBase(tuple(sorted((p, p, q, q)))),
                       ((p, q), (q, p), (p, -q), (q, -p)))


_PAIR = re.compile(r'\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)')


def parse_seifert(text: str) -> SeifertData:
    base_text, sep, pairs_text = text.partition(';')
    if not sep:
        raise ParseError("expected 'S2(...) ; (a,b) ...'", text)
    base = parse_base(base_text)
    if not isinstance(base, SphereBase):
        raise ParseError("Seifert data needs an S2 base", text)
    leftover = _PAIR.sub('', pairs_text).strip()
    if leftover:
        raise ParseError(f"unexpected {leftover!r} in pair list", text)
    pairs = tuple((int(a), int(b)) for a, b in _PAIR.findall(pairs_text))
    return SeifertData(base, pairs)


def format_seifert(s: SeifertData) -> str:
    return f"{format_base(s.base)} ; " + ' '.join(f"({a},{b})" for a, b in s.pairs)


PASS, FAIL, NOT_COMPUTABLE, NOT_CHECKED = 'pass', 'fail', 'not computable', 'not checked'


@dataclass(frozen=True)
class ConditionOutcome:
    outcome: str
    detail: str


@dataclass(frozen=True)
class SurgeryConditionsReport:
    conditions: Dict[str, ConditionOutcome]
    notes: Tuple[str, ...] = ()

    @property
    def overall(self) -> bool:
        checked = [c for c in self.conditions.values() if c.outcome in (PASS, FAIL)]
        return all(c.outcome == PASS for c in checked)


def _isolated_orders(orders: Sequence[int]) -> List[int]:
    return [a for i, a in enumerate(orders)
            if all(gcd(a, b) == 1 for j, b in enumerate(orders) if j != i)]


def surgery_conditions_check(s: SeifertData, alexander: Optional[LaurentPoly] = None) -> SurgeryConditionsReport:
    """Arithmetic necessary conditions for a Seifert fibred knot manifold over S^2(a_1, ..., a_m)."""
    orders = s.base.cone_orders
    m = len(orders)
    eps = euler_number(s)
    conditions: Dict[str, ConditionOutcome] = {}
    notes: List[str] = []

    ok1 = m >= 3 and eps == 0
    conditions['1'] = ConditionOutcome(PASS if ok1 else FAIL,
                                       f"base S2 with m = {m} (need >= 3), euler number {eps} (need 0)")

    isolated = _isolated_orders(orders)
    pairs = max_disjoint_common_factor_pairs(orders)
    triple = has_triple_common_factor(orders)
    ok2 = not isolated and pairs <= 2 and not triple
    conditions['2'] = ConditionOutcome(
        PASS if ok2 else FAIL,
        f"orders coprime to all others: {isolated or 'none'}; disjoint pairs sharing a factor: {pairs}; "
        f"three sharing a factor: {'yes' if triple else 'no'}")

    reciprocal_sum = sum((Fraction(1, a) for a in orders), Fraction(0))
    ok3 = reciprocal_sum <= m - 2
    conditions['3'] = ConditionOutcome(PASS if ok3 else FAIL, f"sum 1/a_i = {reciprocal_sum} <= m - 2 = {m - 2}")

    conditions['4'] = ConditionOutcome(NOT_COMPUTABLE, "fibredness of the knot is not decided here")

    if alexander is None:
        conditions['5'] = ConditionOutcome(NOT_CHECKED, "no Alexander polynomial quotient supplied")
    else:
        report = is_cyclotomic_squarefree(alexander)
        ok5 = report.squarefree and report.cyclotomic_factors is not None
        conditions['5'] = ConditionOutcome(
            PASS if ok5 else FAIL,
            f"{alexander.format()}: squarefree={report.squarefree}, cyclotomic factors={report.cyclotomic_factors}")

    key = tuple(sorted(orders))
    if key in KNOWN_DISCREPANCIES:
        notes.append(f"S2{key}: {KNOWN_DISCREPANCIES[key]}")
        logger.warning(f"Known discrepancy for base S2{key}")

    return SurgeryConditionsReport(conditions, tuple(notes))
