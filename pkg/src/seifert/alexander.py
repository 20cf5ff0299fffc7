"""Laurent polynomials in t, torus-knot Alexander polynomials and cyclotomic detection."""
import logging
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import List, Optional, Tuple

from sympy import Add, Poly, Symbol, cyclotomic_poly, expand, isprime, primitive_root, sympify
from sympy.core.sympify import SympifyError

from src.utils.exceptions import InternalInconsistency, InvalidTorusParameters, ParseError, PreconditionViolated

logger = logging.getLogger(__name__)

t = Symbol('t')


@dataclass(frozen=True)
class LaurentPoly:
    """sum coeffs[i] * t^(low + i), trimmed so the end coefficients are nonzero."""
    low: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        coeffs = [int(c) for c in self.coeffs]
        low = self.low
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
            low += 1
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, 'coeffs', tuple(coeffs))
        object.__setattr__(self, 'low', low if coeffs else 0)

    @classmethod
    def from_poly(cls, poly: Poly, low: int = 0) -> 'LaurentPoly':
        return cls(low, tuple(int(c) for c in reversed(poly.all_coeffs())))

    @classmethod
    def parse(cls, text: str) -> 'LaurentPoly':
        try:
            expr = expand(sympify(text, locals={'t': t}))
        except (SympifyError, TypeError):
            raise ParseError("not a polynomial in t", text)
        terms = {}
        for term in Add.make_args(expr):
            coeff, exp = term.as_coeff_exponent(t)
            if coeff.free_symbols or not coeff.is_integer or not exp.is_integer:
                raise ParseError("needs integer coefficients and exponents", text)
            terms[int(exp)] = terms.get(int(exp), 0) + int(coeff)
        if not terms:
            return cls(0, ())
        low = min(terms)
        return cls(low, tuple(terms.get(k, 0) for k in range(low, max(terms) + 1)))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def span(self) -> int:
        """Difference between highest and lowest exponent."""
        return max(len(self.coeffs) - 1, 0)

    def to_poly(self) -> Poly:
        """The polynomial t^-low * self, with nonzero constant term."""
        return Poly(list(reversed(self.coeffs)) or [0], t)

    def at_one(self) -> int:
        return sum(self.coeffs)

    def is_palindromic(self) -> bool:
        return self.coeffs == tuple(reversed(self.coeffs)) or self.coeffs == tuple(-c for c in reversed(self.coeffs))

    def format(self) -> str:
        if not self.coeffs:
            return '0'
        parts: List[str] = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            k = self.low + i
            mono = '' if k == 0 else ('t' if k == 1 else f"t^{k}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            if not parts:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f"{'-' if c < 0 else '+'} {body}")
        return ' '.join(parts)

    def __str__(self) -> str:
        return self.format()


def check_torus_parameters(p: int, q: int) -> None:
    if not (p > q >= 2):
        raise InvalidTorusParameters(f"need p > q >= 2, got p={p}, q={q}")
    if gcd(p, q) != 1:
        raise InvalidTorusParameters(f"p={p} and q={q} are not coprime")


def alexander_torus(p: int, q: int) -> LaurentPoly:
    """(t^pq - 1)(t - 1) / ((t^p - 1)(t^q - 1)), divided exactly."""
    check_torus_parameters(p, q)
    numerator = Poly((t ** (p * q) - 1) * (t - 1), t)
    denominator = Poly((t ** p - 1) * (t ** q - 1), t)
    quotient, remainder = numerator.div(denominator)
    if not remainder.is_zero:
        raise InternalInconsistency(f"torus knot quotient for ({p}, {q}) is not exact")
    return LaurentPoly.from_poly(quotient)


_totient_cache: List[int] = [0, 1]


def _totients(limit: int) -> List[int]:
    global _totient_cache
    if len(_totient_cache) > limit:
        return _totient_cache
    size = max(limit + 1, 2 * len(_totient_cache))
    phi = list(range(size))
    for n in range(2, size):
        if phi[n] == n:
            for k in range(n, size, n):
                phi[k] -= phi[k] // n
    _totient_cache = phi
    return phi


def cyclotomic_candidates(degree: int) -> List[int]:
    """Every n with phi(n) <= degree; phi(n) >= sqrt(n) outside n = 2, 6 bounds the search."""
    limit = max(degree * degree, 6)
    phi = _totients(limit)
    return [n for n in range(1, limit + 1) if phi[n] <= degree]


@lru_cache(maxsize=None)
def _root_of_unity_mod_prime(n: int) -> Tuple[int, int]:
    """(P, w) with P prime, P = 1 mod n and w of multiplicative order n mod P."""
    k = 1
    while not isprime(k * n + 1):
        k += 1
    prime = k * n + 1
    return prime, pow(primitive_root(prime), k, prime)


def _vanishes_mod_prime(coeffs: Tuple[int, ...], n: int) -> bool:
    prime, w = _root_of_unity_mod_prime(n)
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * w + c) % prime
    return acc == 0


@dataclass(frozen=True)
class CyclotomicReport:
    squarefree: bool
    cyclotomic_factors: Optional[Tuple[int, ...]]


def is_cyclotomic_squarefree(f: LaurentPoly) -> CyclotomicReport:
    """Square-freeness up to units t^k, and the indices n when f = +-prod Phi_n over distinct n."""
    if f.is_zero:
        raise PreconditionViolated("the zero polynomial has no factorization")
    poly = f.to_poly()
    squarefree = poly.gcd(poly.diff(t)).degree() == 0
    if not squarefree:
        return CyclotomicReport(False, None)
    return CyclotomicReport(True, _cyclotomic_indices(poly))


def _cyclotomic_indices(poly: Poly) -> Optional[Tuple[int, ...]]:
    coeffs = [int(c) for c in reversed(poly.all_coeffs())]
    if abs(coeffs[0]) != 1 or abs(coeffs[-1]) != 1:
        return None
    remaining = poly
    current = tuple(coeffs)
    found: List[int] = []
    for n in cyclotomic_candidates(poly.degree()):
        if remaining.degree() == 0:
            break
        if _totients(n)[n] > remaining.degree():
            continue
        if not _vanishes_mod_prime(current, n):
            continue
        quotient, rem = remaining.div(Poly(cyclotomic_poly(n, t), t))
        if rem.is_zero:
            remaining = quotient
            current = tuple(int(c) for c in reversed(remaining.all_coeffs()))
            found.append(n)
    if remaining.degree() != 0 or abs(int(remaining.LC())) != 1:
        logger.debug(f"non-cyclotomic cofactor of degree {remaining.degree()} remains")
        return None
    return tuple(found)
