"""Base 2-orbifolds over which a knot manifold can be Seifert fibred.

Text syntax (round-trips with ``format_base``)::

    S2(2,3,6)       sphere with cone points
    P2(3,4,5)       projective plane with cone points
    D(3;3,3,3)      disk: cone orders before ';', corner orders after
    D(;2,3,5)       disk with corners only
"""
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, permutations
from math import gcd
from typing import List, Optional, Sequence, Tuple, Union

from src.groups.presentations import Presentation
from src.groups.words import Word
from src.utils.exceptions import ParseError, PreconditionViolated
from src.utils.helpers import gcd_all

logger = logging.getLogger(__name__)


def _check_orders(orders: Sequence[int], what: str) -> Tuple[int, ...]:
    orders = tuple(int(n) for n in orders)
    if any(n < 2 for n in orders):
        raise PreconditionViolated(f"{what} orders must be >= 2, got {orders}")
    return orders


@dataclass(frozen=True)
class SphereBase:
    cone_orders: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'cone_orders', _check_orders(self.cone_orders, 'cone'))


@dataclass(frozen=True)
class ProjectiveBase:
    cone_orders: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'cone_orders', _check_orders(self.cone_orders, 'cone'))


@dataclass(frozen=True)
class DiskBase:
    cone_orders: Tuple[int, ...]
    corner_orders: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'cone_orders', _check_orders(self.cone_orders, 'cone'))
        object.__setattr__(self, 'corner_orders', _check_orders(self.corner_orders, 'corner'))


BaseOrbifold = Union[SphereBase, ProjectiveBase, DiskBase]

_BASE = re.compile(r'^\s*(S2|P2|D)\s*\(([^)]*)\)\s*$', re.IGNORECASE)


def _int_list(text: str, source: str) -> List[int]:
    items = [s.strip() for s in text.split(',') if s.strip()]
    try:
        return [int(s) for s in items]
    except ValueError:
        raise ParseError("orders must be integers", source)


def parse_base(text: str) -> BaseOrbifold:
    m = _BASE.match(text)
    if not m:
        raise ParseError("expected S2(...), P2(...) or D(...;...)", text)
    family, body = m.group(1).upper(), m.group(2)
    if family == 'D':
        cones, _, corners = body.partition(';')
        return DiskBase(tuple(_int_list(cones, text)), tuple(_int_list(corners, text)))
    if ';' in body:
        raise ParseError("only disk bases have corner points", text)
    orders = tuple(_int_list(body, text))
    return SphereBase(orders) if family == 'S2' else ProjectiveBase(orders)


def format_base(b: BaseOrbifold) -> str:
    def join(xs):
        return ','.join(str(x) for x in xs)
    if isinstance(b, SphereBase):
        return f"S2({join(b.cone_orders)})"
    if isinstance(b, ProjectiveBase):
        return f"P2({join(b.cone_orders)})"
    return f"D({join(b.cone_orders)};{join(b.corner_orders)})"


class CaseTag(str, Enum):
    S2 = 'S2'
    P2 = 'P2'
    P2_345 = 'P2_345'
    DISK = 'Disk'
    REJECTED = 'Rejected'


@dataclass(frozen=True)
class AdmissibilityVerdict:
    admissible: bool
    case_tag: CaseTag
    reasons: Tuple[str, ...]
    open_status: Optional[str] = None


def _check(reasons: List[str], ok: bool, text: str) -> bool:
    reasons.append(f"{'pass' if ok else 'FAIL'}: {text}")
    return ok


def max_disjoint_common_factor_pairs(orders: Sequence[int]) -> int:
    """Size of a largest matching among pairs of orders with gcd > 1."""
    n = len(orders)
    edges = [(i, j) for i, j in combinations(range(n), 2) if gcd(orders[i], orders[j]) > 1]

    def best(used: frozenset, start: int) -> int:
        result = 0
        for k in range(start, len(edges)):
            i, j = edges[k]
            if i not in used and j not in used:
                result = max(result, 1 + best(used | {i, j}, k + 1))
        return result

    return best(frozenset(), 0)


def has_triple_common_factor(orders: Sequence[int]) -> bool:
    return any(gcd_all(triple) > 1 for triple in combinations(orders, 3))


def pairwise_coprime(orders: Sequence[int]) -> bool:
    return all(gcd(x, y) == 1 for x, y in combinations(orders, 2))


def classify_base(b: BaseOrbifold) -> AdmissibilityVerdict:
    """Necessary conditions for the base of a Seifert fibred knot manifold."""
    reasons: List[str] = []
    if isinstance(b, SphereBase):
        a = b.cone_orders
        ok = _check(reasons, len(a) >= 3, f"m = {len(a)} >= 3")
        ok &= _check(reasons, not has_triple_common_factor(a), "no three cone orders share a nontrivial factor")
        pairs = max_disjoint_common_factor_pairs(a)
        ok &= _check(reasons, pairs <= 2, f"at most two disjoint pairs share a factor (found {pairs})")
        tag = CaseTag.S2
        open_status = "weight 1 unknown for m >= 5" if len(a) >= 5 else None
    elif isinstance(b, ProjectiveBase):
        bs = b.cone_orders
        if sorted(bs) == [3, 4, 5]:
            _check(reasons, True, "exceptional base P2(3,4,5)")
            return AdmissibilityVerdict(True, CaseTag.P2_345, tuple(reasons),
                                        "weight 1 unknown for P2(3,4,5)")
        ok = _check(reasons, len(bs) in (2, 3), f"m = {len(bs)} is 2 or 3")
        ok &= _check(reasons, pairwise_coprime(bs), "cone orders pairwise coprime")
        if len(bs) == 3:
            ok &= _check(reasons, 2 in bs, "one cone order is 2 when m = 3")
        tag = CaseTag.P2
        open_status = "weight 1 unknown for m = 3" if len(bs) == 3 else None
    else:
        c, d = b.cone_orders, b.corner_orders
        p, q = len(c), len(d)
        ok = _check(reasons, p <= 2, f"p = {p} <= 2")
        ok &= _check(reasons, 2 * p + q >= 3, f"2p + q = {2 * p + q} >= 3")
        ok &= _check(reasons, all(x % 2 for x in c), "cone orders all odd")
        ok &= _check(reasons, pairwise_coprime(c), "cone orders pairwise coprime")
        evens = sum(1 for x in d if x % 2 == 0)
        ok &= _check(reasons, evens <= 1, f"at most one corner order even (found {evens})")
        tag = CaseTag.DISK
        open_status = "weight 1 unknown for p = 2" if p == 2 else None

    if not ok:
        return AdmissibilityVerdict(False, CaseTag.REJECTED, tuple(reasons))
    return AdmissibilityVerdict(True, tag, tuple(reasons), open_status)


@dataclass(frozen=True)
class OrbifoldPresentation:
    presentation: Presentation
    orientation: Tuple[Tuple[str, str], ...] = field(default=())

    def orientation_of(self, name: str) -> str:
        return dict(self.orientation)[name]


def orbifold_presentation(b: BaseOrbifold) -> OrbifoldPresentation:
    """Presentation of the orbifold fundamental group, generators annotated by orientation character."""
    if isinstance(b, SphereBase):
        m = len(b.cone_orders)
        names = [f"v{i + 1}" for i in range(m)]
        relators = [Word.gen(i, a) for i, a in enumerate(b.cone_orders)]
        relators.append(Word(tuple((i, 1) for i in range(m))))
        orientation = [(n, 'preserving') for n in names]
    elif isinstance(b, ProjectiveBase):
        m = len(b.cone_orders)
        names = ['u'] + [f"v{i + 1}" for i in range(m)]
        # u^2 = v1 ... vm
        relators = [Word(((0, -2),) + tuple((i + 1, 1) for i in range(m)))]
        relators += [Word.gen(i + 1, bi) for i, bi in enumerate(b.cone_orders)]
        orientation = [('u', 'reversing')] + [(n, 'preserving') for n in names[1:]]
    else:
        p, q = len(b.cone_orders), len(b.corner_orders)
        v_names = [f"v{i + 1}" for i in range(p)]
        x_names = [f"x{j + 1}" for j in range(q + 1)]
        names = v_names + x_names
        x = [Word.gen(p + j) for j in range(q + 1)]
        relators = [Word.gen(i, ci) for i, ci in enumerate(b.cone_orders)]
        relators += [xj ** 2 for xj in x]
        relators += [(x[j] * x[j + 1]) ** d for j, d in enumerate(b.corner_orders)]
        prod_v = Word(tuple((i, 1) for i in range(p)))
        # x_{q+1} (prod v) = (prod v) x_1
        relators.append(x[q] * prod_v * (prod_v * x[0]).inverse())
        orientation = [(n, 'preserving') for n in v_names] + [(n, 'reversing') for n in x_names]
    annotations = {'base': format_base(b)}
    return OrbifoldPresentation(Presentation(tuple(names), tuple(relators), annotations), tuple(orientation))


@dataclass(frozen=True)
class GeneratorWitness:
    word: Word
    text: str
    justification: str


def _coprime_pairing(a: Sequence[int]) -> Optional[Tuple[Tuple[int, int], Tuple[int, int]]]:
    for pairing in (((0, 1), (2, 3)), ((1, 2), (3, 0)), ((0, 2), (1, 3))):
        if all(gcd(a[i], a[j]) == 1 for i, j in pairing):
            return pairing
    return None


def normal_generator_witness(b: BaseOrbifold) -> Optional[GeneratorWitness]:
    """Explicit weight-one element of the orbifold group where one is known."""
    p = orbifold_presentation(b).presentation
    names = p.generator_names
    if isinstance(b, SphereBase):
        a = b.cone_orders
        if len(a) == 3 and gcd_all(a) == 1:
            odd = next((k for k in range(3) if a[k] % 2), None)
            if odd is not None:
                nxt = (odd + 1) % 3
                word = Word.gen(odd, -1) * Word.gen(nxt)
                return GeneratorWitness(word, word.format(names),
                                        f"a{odd + 1} = {a[odd]} is odd: killing it makes every v_i a power of "
                                        f"v{odd + 1} of order dividing gcd = 1")
        if len(a) == 4:
            pairing = _coprime_pairing(a)
            if pairing is None:
                return None
            if pairing == ((0, 1), (2, 3)):
                word = Word.gen(0) * Word.gen(1)
            elif pairing == ((1, 2), (3, 0)):
                word = Word.gen(1) * Word.gen(2)
            else:
                # v1 becomes conjugate to v3^-1, then v2 v4 = 1
                word = Word.gen(0) * Word.gen(1) * Word.gen(2) * Word.gen(1, -1)
            pairs = ', '.join(f"(a{i + 1}, a{j + 1}) = 1" for i, j in pairing)
            return GeneratorWitness(word, word.format(names), f"two coprime pairs: {pairs}")
        return None
    if isinstance(b, ProjectiveBase):
        if len(b.cone_orders) == 2 and pairwise_coprime(b.cone_orders):
            word = Word.gen(1, -1) * Word.gen(0)
            return GeneratorWitness(word, word.format(names), "m = 2: v1 = u forces v1 = v2 of coprime orders")
        return None
    p_count, d = len(b.cone_orders), b.corner_orders
    if p_count == 0 and d and sum(1 for dj in d if dj % 2 == 0) <= 1:
        word = Word.gen(0)
        return GeneratorWitness(word, word.format(names),
                                "corner reflectors: killing x1 kills each neighbour across an odd corner, "
                                "and at most one corner is even")
    if p_count == 1 and d and b.cone_orders[0] % 2 and all(dj % 2 for dj in d[1:]):
        word = Word.gen(0) * Word.gen(1)
        return GeneratorWitness(word, word.format(names),
                                f"x1 = v1^-1 has order dividing gcd(2, {b.cone_orders[0]}) = 1, so x{len(d) + 1} "
                                f"dies by conjugacy and the odd corners d2, ..., dq kill the rest")
    return None


def twist_spin_base_check(b: BaseOrbifold, twist: int) -> Tuple[bool, str]:
    """Whether b can be the base of a Seifert fibred twist spin with the given twist."""
    if isinstance(b, SphereBase) and len(b.cone_orders) == 3:
        orders = b.cone_orders
        for k in range(3):
            x, y = (orders[i] for i in range(3) if i != k)
            if orders[k] == twist and gcd(x, y) == 1:
                return True, f"S2(a, b, r) with (a, b) = ({x}, {y}) coprime and r = {twist}"
        return False, "S2 base needs the form S2(a, b, r) with (a, b) = 1 and r the twist"
    if isinstance(b, DiskBase) and not b.cone_orders:
        if twist == 2:
            return True, "corner-only disk base with twist 2"
        return False, "corner-only disk bases only arise for twist 2"
    return False, "only S2(a, b, r) and corner-only disk bases occur"
