"""Weight obstructions for <u, x, y, z | u^2 = xyz, x^a = y^b = z^c = 1>.

A word w can only normally generate the group if its exponent sums avoid a
few divisibility traps; when it does, a good triple (rd/2a, se/2b, tf/2c)
with r/a + s/b + t/c < 1 rules it out. The searches below find such (r, s, t).
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations, product
from math import floor, gcd
from typing import Dict, Iterator, List, Optional, Tuple

from sympy import isprime

from src.arithmetic.exact_core import psi
from src.utils.exceptions import ExcludedTriple, InternalInconsistency, NoRstWitness, PreconditionViolated

logger = logging.getLogger(__name__)

EXCEPTIONAL_MODULI = frozenset({3, 4, 5})
WEIGHT_UPPER_BOUND = "normal closure of {xy, u}"
PROOF_ROUTES = ('u11', 'two-v', 'two', 'y12', 'z12')
FALLBACK_ROUTE = 'bruteforce-fallback'


def is_quasiprime(n: int) -> bool:
    """n = 4 or n an odd prime."""
    if n < 1:
        raise PreconditionViolated(f"quasi-prime test needs n >= 1, got {n}")
    return n == 4 or (n % 2 == 1 and isprime(n))


@dataclass(frozen=True)
class QuasiPrimeTriple:
    a: int
    b: int
    c: int

    def __post_init__(self):
        for n in self.moduli:
            if not is_quasiprime(n):
                raise PreconditionViolated(f"{n} is not a quasi-prime")
        if len(set(self.moduli)) != 3:
            raise PreconditionViolated(f"quasi-primes {self.moduli} are not pairwise distinct")

    @property
    def moduli(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)

    @property
    def is_exceptional(self) -> bool:
        return set(self.moduli) == EXCEPTIONAL_MODULI


@dataclass(frozen=True)
class ResidueData:
    d: int
    e: int
    f: int

    @property
    def values(self) -> Tuple[int, int, int]:
        return (self.d, self.e, self.f)

    def check_against(self, triple: QuasiPrimeTriple) -> None:
        for name, residue, modulus in zip('def', self.values, triple.moduli):
            if gcd(residue, 2 * modulus) != 1:
                raise PreconditionViolated(f"{name} = {residue} is not coprime to {2 * modulus}")


@dataclass(frozen=True)
class RstWitness:
    r: int
    s: int
    t: int
    route: str = 'bruteforce'

    @property
    def values(self) -> Tuple[int, int, int]:
        return (self.r, self.s, self.t)


def _psi_numerator(k: int, modulus2: int) -> int:
    k %= modulus2
    return min(k, modulus2 - k)


def is_valid_witness(triple: QuasiPrimeTriple, res: ResidueData, r: int, s: int, t: int) -> bool:
    """Coprimality, r/a + s/b + t/c < 1 and goodness, in integer arithmetic."""
    a, b, c = triple.moduli
    if min(r, s, t) < 1:
        return False
    if gcd(r, a) != 1 or gcd(s, b) != 1 or gcd(t, c) != 1:
        return False
    if r * b * c + s * a * c + t * a * b >= a * b * c:
        return False
    # psi values scaled by 2abc
    x = _psi_numerator(r * res.d, 2 * a) * b * c
    y = _psi_numerator(s * res.e, 2 * b) * a * c
    z = _psi_numerator(t * res.f, 2 * c) * a * b
    return 2 * max(x, y, z) < x + y + z


def find_rst_bruteforce(triple: QuasiPrimeTriple, res: ResidueData) -> Optional[RstWitness]:
    """Lexicographically least (r, s, t) with 1 <= r < a, 1 <= s < b, 1 <= t < c, or None."""
    res.check_against(triple)
    a, b, c = triple.moduli
    abc = a * b * c
    for r in range(1, a):
        if r * b * c + a * c + a * b >= abc:
            break
        if gcd(r, a) != 1:
            continue
        for s in range(1, b):
            if r * b * c + s * a * c + a * b >= abc:
                break
            if gcd(s, b) != 1:
                continue
            for t in range(1, c):
                if r * b * c + s * a * c + t * a * b >= abc:
                    break
                if is_valid_witness(triple, res, r, s, t):
                    return RstWitness(r, s, t)
    return None


def _normalize_residue(residue: int, modulus: int) -> int:
    k = residue % (2 * modulus)
    return 2 * modulus - k if k > modulus else k


def _first_exceeding(step: Fraction, start: Fraction, target: Fraction) -> int:
    """min{rho in Z : rho * step + start > target} for step > 0."""
    return floor((target - start) / step) + 1


def _proof_candidates(alpha: Fraction, beta: Fraction, gamma: Fraction,
                      moduli: Tuple[int, int, int], e_numerator: int) -> List[Tuple[str, Tuple[int, int, int]]]:
    """Candidates of the case analysis, proof route first, in sorted coordinates."""
    big_a, big_b, big_c = moduli
    u = _first_exceeding(alpha, beta, gamma)
    psi2g = psi(2 * gamma)
    v = _first_exceeding(psi2g, alpha, beta)
    y = _first_exceeding(alpha, psi2g, beta) if psi2g < beta else None
    z = _first_exceeding(alpha, beta, psi2g) if psi2g > beta else None

    candidates = {
        'u11': (u, 1, 1),
        'two-v': (1, 1, 2 * v) if v >= 1 else None,
        'two': (1, 1, 2),
        'y12': (y, 1, 2) if y and y >= 1 else None,
        'z12': (z, 1, 2) if z and z >= 1 else None,
    }

    if Fraction(u, big_a) + Fraction(1, big_b) + Fraction(1, big_c) < 1:
        route = 'u11'
    elif psi2g < alpha:
        route = 'two-v'
    elif e_numerator > 1:
        route = 'two'
    elif psi2g < beta:
        route = 'y12'
    else:
        route = 'z12'

    order = [route] + [name for name in candidates if name != route]
    return [(name, candidates[name]) for name in order if candidates[name] is not None]


def find_rst_constructive(triple: QuasiPrimeTriple, res: ResidueData) -> RstWitness:
    """Build (r, s, t) by the case analysis on the sorted ratios d/2a < e/2b < f/2c.

    Residues are first moved into (0, modulus) using psi(x) = psi(-x) = psi(x + n).
    The case analysis can hand back an even multiplier for the modulus 4; when
    that happens the other candidate families are tried, then each family with
    that multiplier replaced by 1 or 3. Every result is validated before it is
    returned.

    Some classes with the modulus 4 have no (r, s, t) at all, e.g. (3, 4, 7)
    with (1, 3, 1): those raise NoRstWitness once the exhaustive search agrees.
    If the case analysis fails while a witness exists, the exhaustive witness is
    returned with route 'bruteforce-fallback'.
    """
    if triple.is_exceptional:
        raise ExcludedTriple(f"{{a, b, c}} = {{3, 4, 5}} is excluded: {triple.moduli}")
    res.check_against(triple)

    moduli = triple.moduli
    numerators = [_normalize_residue(k, m) for k, m in zip(res.values, moduli)]
    ratios = [Fraction(n, 2 * m) for n, m in zip(numerators, moduli)]
    order = sorted(range(3), key=lambda i: ratios[i])
    alpha, beta, gamma = (ratios[i] for i in order)
    sorted_moduli = tuple(moduli[i] for i in order)

    def unsort(values: Tuple[int, int, int]) -> Tuple[int, int, int]:
        out = [0, 0, 0]
        for position, index in enumerate(order):
            out[index] = values[position]
        return tuple(out)

    candidates = [(route, unsort(values))
                  for route, values in _proof_candidates(alpha, beta, gamma, sorted_moduli, numerators[order[1]])]
    proof_route = candidates[0][0]
    for route, (r, s, t) in candidates:
        if is_valid_witness(triple, res, r, s, t):
            if route != proof_route:
                logger.warning(f"Case analysis route {proof_route} failed for {moduli}, {res.values}; "
                               f"using {route}")
            logger.debug(f"rst witness {(r, s, t)} via {route} for {moduli}, {res.values}")
            return RstWitness(r, s, t, route=route)

    witness = _parity_adjusted(triple, res, candidates)
    if witness is not None:
        logger.warning(f"Case analysis needed an odd multiplier at the modulus 4 for {moduli}, {res.values}; "
                       f"{witness.route} gave {witness.values}")
        return witness

    witness = find_rst_bruteforce(triple, res)
    if witness is None:
        raise NoRstWitness(f"no (r, s, t) exists for {moduli} with residues {res.values}")
    logger.warning(f"Case analysis failed for {moduli}, {res.values} although {witness.values} is a witness")
    return RstWitness(*witness.values, route=FALLBACK_ROUTE)


def _parity_adjusted(triple: QuasiPrimeTriple, res: ResidueData,
                     candidates: List[Tuple[str, Tuple[int, int, int]]]) -> Optional[RstWitness]:
    """Candidates with an even multiplier at the modulus 4 retried with the units 1 and 3 there."""
    if 4 not in triple.moduli:
        return None
    position = triple.moduli.index(4)
    for route, values in candidates:
        if values[position] % 2:
            continue
        for unit in (1, 3):
            adjusted = list(values)
            adjusted[position] = unit
            if is_valid_witness(triple, res, *adjusted):
                return RstWitness(*adjusted, route=f"{route}+parity")
    return None


def is_case_analysis_route(route: str) -> bool:
    return route.split('+')[0] in PROOF_ROUTES


@dataclass(frozen=True)
class TraceAngles:
    """Angles, in multiples of pi, of the commuting representations."""
    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    delta: Fraction

    @property
    def parities(self) -> Dict[str, int]:
        """(-1)^floor for each sign pattern of (rd/2a, se/2b, tf/2c)."""
        patterns = {'+++': self.alpha, '++-': self.beta, '+-+': self.gamma, '+--': self.delta}
        return {k: (-1) ** (floor(v) % 2) for k, v in patterns.items()}

    @property
    def distinct_classes(self) -> bool:
        p = self.parities
        return (p['+++'], p['++-']) != (p['+-+'], p['+--'])

    def as_dict(self) -> Dict[str, object]:
        return {
            'alpha': str(self.alpha),
            'beta': str(self.beta),
            'gamma': str(self.gamma),
            'delta': str(self.delta),
            'parities': self.parities,
            'distinct_classes': self.distinct_classes,
        }


def commuting_trace_angles(w: RstWitness, triple: QuasiPrimeTriple, res: ResidueData) -> TraceAngles:
    res.check_against(triple)
    if not is_valid_witness(triple, res, *w.values):
        raise PreconditionViolated(f"{w.values} is not a witness for {triple.moduli}, {res.values}")
    x = Fraction(w.r * res.d, 2 * triple.a)
    y = Fraction(w.s * res.e, 2 * triple.b)
    z = Fraction(w.t * res.f, 2 * triple.c)
    return TraceAngles(alpha=x + y + z, beta=x + y - z, gamma=x - y + z, delta=x - y - z)


class Verdict(str, Enum):
    KILLED_BY_DIVISIBILITY = 'killed_by_divisibility'
    OBSTRUCTED_BY_GOOD_TRIPLE = 'obstructed_by_good_triple'
    NOT_OBSTRUCTED = 'not_obstructed'


@dataclass(frozen=True)
class WeightCertificate:
    triple: QuasiPrimeTriple
    word_exponents: Tuple[int, int, int, int]
    derived_residues: ResidueData
    verdict: Verdict
    reason: str = ''
    witness: Optional[RstWitness] = None
    angles: Optional[TraceAngles] = None
    upper_bound: str = field(default=WEIGHT_UPPER_BOUND)

    def __post_init__(self):
        e_u, e_x, e_y, e_z = self.word_exponents
        if self.derived_residues.values != (e_u + 2 * e_x, e_u + 2 * e_y, e_u + 2 * e_z):
            raise InternalInconsistency("derived residues do not match the word exponents")


def weight_certificate(triple: QuasiPrimeTriple, word_exponents: Tuple[int, int, int, int]) -> WeightCertificate:
    """Decide whether a word with the given exponent sums (E_u, E_x, E_y, E_z) is ruled out as a weight element."""
    e_u, e_x, e_y, e_z = word_exponents
    res = ResidueData(e_u + 2 * e_x, e_u + 2 * e_y, e_u + 2 * e_z)
    base = dict(triple=triple, word_exponents=tuple(word_exponents), derived_residues=res)

    gates = [
        (res.d % triple.a == 0, 'a divides d'),
        (res.e % triple.b == 0, 'b divides e'),
        (res.f % triple.c == 0, 'c divides f'),
        (e_u % 2 == 0, 'E_u even'),
    ]
    for failed, reason in gates:
        if failed:
            return WeightCertificate(verdict=Verdict.KILLED_BY_DIVISIBILITY, reason=reason, **base)

    if triple.is_exceptional:
        witness = find_rst_bruteforce(triple, res)
        if witness is None:
            return WeightCertificate(verdict=Verdict.NOT_OBSTRUCTED,
                                     reason='no (r, s, t) exists for {3, 4, 5} at these residues', **base)
    else:
        try:
            witness = find_rst_constructive(triple, res)
        except NoRstWitness:
            logger.info(f"No (r, s, t) for {triple.moduli} at residues {res.values}; word is not obstructed")
            return WeightCertificate(verdict=Verdict.NOT_OBSTRUCTED,
                                     reason=f"no (r, s, t) exists for {triple.moduli} at these residues", **base)

    return WeightCertificate(verdict=Verdict.OBSTRUCTED_BY_GOOD_TRIPLE, reason='good triple',
                             witness=witness, angles=commuting_trace_angles(witness, triple, res), **base)


def quasiprimes_up_to(bound: int) -> List[int]:
    return [n for n in range(1, bound + 1) if is_quasiprime(n)]


def quasiprime_triples(bound: int, include_exceptional: bool = False) -> List[QuasiPrimeTriple]:
    """Unordered distinct triples, listed with increasing moduli."""
    triples = [QuasiPrimeTriple(*combo) for combo in combinations(quasiprimes_up_to(bound), 3)]
    return [t for t in triples if include_exceptional or not t.is_exceptional]


def residue_classes(triple: QuasiPrimeTriple) -> Iterator[ResidueData]:
    """Every (d mod 2a, e mod 2b, f mod 2c) with each residue coprime to its modulus."""
    units = [[k for k in range(2 * m) if gcd(k, 2 * m) == 1] for m in triple.moduli]
    for d, e, f in product(*units):
        yield ResidueData(d, e, f)
