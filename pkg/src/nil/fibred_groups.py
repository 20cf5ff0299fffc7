"""Groups of Seifert fibred 4-dimensional knot manifolds with a torus fibre, one family per base case.

Generators y, z span the fibre Z^2. Over S^2 the fibre is central; over P^2
the orientation-reversing generator u swaps y and z; over a disk each
reflector x_j squares to y and inverts z.
"""
import logging
import random
from dataclasses import dataclass, field
from math import gcd, prod
from typing import Dict, List, Optional, Tuple

from src.groups.presentations import Presentation
from src.groups.smith import AbelianizationReport, abelianization
from src.groups.words import Word, commutator
from src.orbifolds.bases import pairwise_coprime
from src.utils.exceptions import MalformedInstance
from src.utils.helpers import gcd_all

logger = logging.getLogger(__name__)

CASES = ('S2', 'P2', 'Disk')


@dataclass(frozen=True)
class FibredGroupInstance:
    """cone_orders are a_i (S2), b_i (P2) or c_i (Disk); e, f go with cone points, g, h with corners."""
    case_tag: str
    cone_orders: Tuple[int, ...]
    e: Tuple[int, ...]
    f: Tuple[int, ...]
    k: int = 0
    l: int = 0
    corner_orders: Tuple[int, ...] = ()
    g: Tuple[int, ...] = ()
    h: Tuple[int, ...] = ()

    def __post_init__(self):
        for name in ('cone_orders', 'e', 'f', 'corner_orders', 'g', 'h'):
            object.__setattr__(self, name, tuple(int(v) for v in getattr(self, name)))
        if self.case_tag not in CASES:
            raise MalformedInstance(f"unknown case {self.case_tag!r}, expected one of {CASES}")
        if any(a < 2 for a in self.cone_orders + self.corner_orders):
            raise MalformedInstance("cone and corner orders must be >= 2")
        if not (len(self.e) == len(self.f) == len(self.cone_orders)):
            raise MalformedInstance("e and f need one entry per cone point")
        if not (len(self.g) == len(self.h) == len(self.corner_orders)):
            raise MalformedInstance("g and h need one entry per corner point")
        if self.case_tag == 'Disk':
            if not self.cone_orders and not self.corner_orders:
                raise MalformedInstance("a disk base needs a cone or corner point")
        else:
            if not self.cone_orders:
                raise MalformedInstance(f"{self.case_tag} case needs at least one cone point")
            if self.corner_orders:
                raise MalformedInstance(f"{self.case_tag} case has no corner points")


def build_fibred_presentation(inst: FibredGroupInstance) -> Presentation:
    if inst.case_tag == 'S2':
        return _sphere_presentation(inst)
    if inst.case_tag == 'P2':
        return _projective_presentation(inst)
    return _disk_presentation(inst)


def _fibre_relator(gen: Word, order: int, y: Word, z: Word, ey: int, fz: int) -> Word:
    # gen^order = y^ey z^fz
    return gen ** order * y ** -ey * z ** -fz


def _sphere_presentation(inst: FibredGroupInstance) -> Presentation:
    m = len(inst.cone_orders)
    names = [f"x{i + 1}" for i in range(m)] + ['y', 'z']
    x = [Word.gen(i) for i in range(m)]
    y, z = Word.gen(m), Word.gen(m + 1)
    relators = [_fibre_relator(x[i], a, y, z, inst.e[i], inst.f[i]) for i, a in enumerate(inst.cone_orders)]
    for xi in x:
        relators += [commutator(xi, y), commutator(xi, z)]
    relators.append(Word.product(x) * z ** -inst.l * y ** -inst.k)
    relators.append(commutator(y, z))
    return Presentation(tuple(names), tuple(relators), {'case': 'S2'})


def _projective_presentation(inst: FibredGroupInstance) -> Presentation:
    m = len(inst.cone_orders)
    names = ['u'] + [f"x{i + 1}" for i in range(m)] + ['y', 'z']
    u = Word.gen(0)
    x = [Word.gen(i + 1) for i in range(m)]
    y, z = Word.gen(m + 1), Word.gen(m + 2)
    # u^2 = x_1 ... x_m y^k z^l
    relators = [u ** 2 * (Word.product(x) * y ** inst.k * z ** inst.l).inverse()]
    relators += [_fibre_relator(x[i], b, y, z, inst.e[i], inst.f[i]) for i, b in enumerate(inst.cone_orders)]
    for xi in x:
        relators += [commutator(xi, y), commutator(xi, z)]
    relators.append(u * y * u.inverse() * z.inverse())
    relators.append(commutator(y, z))
    return Presentation(tuple(names), tuple(relators), {'case': 'P2'})


def _disk_presentation(inst: FibredGroupInstance) -> Presentation:
    if inst.k != 0:
        # x_{q+1}^2 = x_1^2 forces k = 0
        raise MalformedInstance(f"disk case needs k = 0, got k = {inst.k}")
    p, q = len(inst.cone_orders), len(inst.corner_orders)
    names = [f"w{i + 1}" for i in range(p)] + [f"x{j + 1}" for j in range(q + 1)] + ['y', 'z']
    w = [Word.gen(i) for i in range(p)]
    x = [Word.gen(p + j) for j in range(q + 1)]
    y, z = Word.gen(p + q + 1), Word.gen(p + q + 2)
    relators = [_fibre_relator(w[i], c, y, z, inst.e[i], inst.f[i]) for i, c in enumerate(inst.cone_orders)]
    for wi in w:
        relators += [commutator(wi, y), commutator(wi, z)]
    for xj in x:
        relators += [xj ** 2 * y.inverse(), xj * z * xj.inverse() * z]
    relators += [_fibre_relator(x[j] * x[j + 1], d, y, z, inst.g[j], inst.h[j])
                 for j, d in enumerate(inst.corner_orders)]
    prod_w = Word.product(w)
    # x_{q+1} (prod w) = (prod w) x_1 z^l
    relators.append(x[q] * prod_w * (prod_w * x[0] * z ** inst.l).inverse())
    relators.append(commutator(y, z))
    return Presentation(tuple(names), tuple(relators), {'case': 'Disk'})


@dataclass(frozen=True)
class FibredConditionReport:
    predicted: bool
    oracle: bool
    agree: bool
    abelianization: AbelianizationReport
    minors: Tuple[int, ...] = ()
    printed_minors: Tuple[int, ...] = ()
    printed_predicted: Optional[bool] = None
    torsion_flags: Tuple[int, ...] = ()
    readings: Dict[str, bool] = field(default_factory=dict)


def sphere_minors(inst: FibredGroupInstance) -> Tuple[int, ...]:
    """Maximal minors of the exponent matrix, up to sign: M_k, M_l, then N_i for each cone point."""
    a, e, f, k, l = inst.cone_orders, inst.e, inst.f, inst.k, inst.l
    m = len(a)
    total = prod(a)

    def without(*skip: int) -> int:
        return prod(a[j] for j in range(m) if j not in skip)

    m_k = k * total - sum(e[i] * without(i) for i in range(m))
    m_l = l * total - sum(f[i] * without(i) for i in range(m))
    n = [(k * f[i] - l * e[i]) * without(i)
         + sum((e[i] * f[j] - e[j] * f[i]) * without(i, j) for j in range(m) if j != i)
         for i in range(m)]
    return (m_k, m_l) + tuple(n)


def printed_sphere_minors(inst: FibredGroupInstance) -> Tuple[int, ...]:
    """The same list with each N_i written as (k f_i - l e_i + sum_j (e_i f_j - e_j f_i)/a_j) prod a."""
    minors = sphere_minors(inst)
    return minors[:2] + tuple(n * a for n, a in zip(minors[2:], inst.cone_orders))


def projective_condition(inst: FibredGroupInstance) -> bool:
    b = inst.cone_orders
    sums = [ei + fi for ei, fi in zip(inst.e, inst.f)]
    parity_ok = any(bi % 2 == 0 for bi in b) or (inst.k + inst.l + sum(sums)) % 2 == 1
    return pairwise_coprime(b) and all(gcd(bi, s) == 1 for bi, s in zip(b, sums)) and parity_ok


def disk_readings(inst: FibredGroupInstance) -> Dict[str, bool]:
    """Two readings of the corner condition: through the corner exponents g_j, or through e_j."""
    p = len(inst.cone_orders)
    corners = list(enumerate(inst.corner_orders))
    reading_g = all(inst.g[j] == d and gcd_all((2, d, inst.h[j])) == 1 for j, d in corners)
    reading_e = all(j < p and inst.e[j] == d and gcd_all((2, d, inst.h[j])) == 1 for j, d in corners)
    return {'g': reading_g, 'e': reading_e}


def check_fibred_conditions(inst: FibredGroupInstance) -> FibredConditionReport:
    """Closed-form prediction of an infinite cyclic abelianization against the Smith normal form."""
    report = abelianization(build_fibred_presentation(inst))
    oracle = report.is_infinite_cyclic

    if inst.case_tag == 'S2':
        minors = sphere_minors(inst)
        printed = printed_sphere_minors(inst)
        predicted = gcd_all(minors) == 1
        torsion = tuple(i + 1 for i, a in enumerate(inst.cone_orders)
                        if gcd_all((a, inst.e[i], inst.f[i])) > 1)
        result = FibredConditionReport(predicted, oracle, predicted == oracle, report, minors, printed,
                                       gcd_all(printed) == 1, torsion)
    elif inst.case_tag == 'P2':
        predicted = projective_condition(inst)
        result = FibredConditionReport(predicted, oracle, predicted == oracle, report)
    else:
        readings = disk_readings(inst)
        predicted = readings['g']
        result = FibredConditionReport(predicted, oracle, predicted == oracle, report, readings=readings)
        for name, value in readings.items():
            if value != oracle:
                logger.debug(f"disk reading '{name}' predicts {value}, abelianization is {report.describe()}")
        return result

    if not result.agree:
        logger.warning(f"{inst.case_tag} instance {inst}: predicted {predicted}, abelianization {report.describe()}")
    return result


def random_instance(rng: random.Random, case_tag: str, max_order: int = 9, max_exponent: int = 9,
                    max_points: int = 3) -> FibredGroupInstance:
    """Random well-formed instance; P2 cone orders are drawn pairwise coprime."""

    def exponent() -> int:
        return rng.randint(-max_exponent, max_exponent)

    def exponents(n: int) -> Tuple[int, ...]:
        return tuple(exponent() for _ in range(n))

    if case_tag == 'S2':
        orders = tuple(rng.randint(2, max_order) for _ in range(rng.randint(1, max_points)))
        return FibredGroupInstance('S2', orders, exponents(len(orders)), exponents(len(orders)),
                                   exponent(), exponent())
    if case_tag == 'P2':
        count = rng.randint(1, max_points)
        orders: List[int] = []
        while len(orders) < count:
            pool = [n for n in range(2, max_order + 1) if all(gcd(n, b) == 1 for b in orders)]
            if not pool:
                logger.warning(f"only {len(orders)} pairwise coprime cone orders fit under {max_order}, "
                               f"{count} requested")
                break
            orders.append(rng.choice(pool))
        return FibredGroupInstance('P2', tuple(orders), exponents(len(orders)), exponents(len(orders)),
                                   exponent(), exponent())
    if case_tag == 'Disk':
        p = rng.randint(0, 2)
        q = rng.randint(max(0, 3 - 2 * p), max_points)
        cones = tuple(rng.randint(2, max_order) for _ in range(p))
        corners = tuple(rng.randint(2, max_order) for _ in range(q))
        # bias the corner exponents towards g_j = d_j so both readings get exercised
        g = tuple(d if rng.random() < 0.5 else exponent() for d in corners)
        e = tuple(corners[i] if i < q and rng.random() < 0.5 else exponent() for i in range(p))
        return FibredGroupInstance('Disk', cones, e, exponents(p), 0, exponent(), corners, g, exponents(q))
    raise MalformedInstance(f"unknown case {case_tag!r}")
