"""Nearest-integer distance, good triples and the sign maps on S^0 = {+1, -1}.

Everything here is exact: goodness and floor parities are discontinuous in
their arguments, so no floating point is used.
"""
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from math import floor
from typing import Dict, Union

from src.utils.exceptions import InternalInconsistency, ParseError, PreconditionViolated

RationalLike = Union[Fraction, int, str]


class Sign(IntEnum):
    PLUS = 1
    MINUS = -1

    def __neg__(self) -> 'Sign':
        return Sign.MINUS if self is Sign.PLUS else Sign.PLUS

    @classmethod
    def parity(cls, n: int) -> 'Sign':
        """(-1)^n"""
        return cls.PLUS if n % 2 == 0 else cls.MINUS


SignMap = Dict[Sign, Sign]


def as_rational(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    try:
        return Fraction(str(x).strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError("not a rational number", str(x))


def psi(x: RationalLike) -> Fraction:
    """Distance from x to the nearest integer; a fractional part of exactly 1/2 gives 1/2."""
    x = as_rational(x)
    frac = x - floor(x)
    return frac if frac <= Fraction(1, 2) else 1 - frac


def is_good(xi: RationalLike, eta: RationalLike, zeta: RationalLike) -> bool:
    values = [psi(xi), psi(eta), psi(zeta)]
    return 2 * max(values) < sum(values)


@dataclass(frozen=True)
class GoodTriple:
    xi: Fraction
    eta: Fraction
    zeta: Fraction

    def __post_init__(self):
        for name in ('xi', 'eta', 'zeta'):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if not is_good(self.xi, self.eta, self.zeta):
            raise PreconditionViolated(f"({self.xi}, {self.eta}, {self.zeta}) is not a good triple")


@dataclass(frozen=True)
class SignMaps:
    phi: SignMap
    theta: SignMap

    @staticmethod
    def is_bijection(table: SignMap) -> bool:
        return table[Sign.PLUS] != table[Sign.MINUS]

    def as_dict(self) -> Dict[str, Dict[str, int]]:
        return {
            'phi': {str(int(k)): int(v) for k, v in self.phi.items()},
            'theta': {str(int(k)): int(v) for k, v in self.theta.items()},
        }


def _is_integer(x: Fraction) -> bool:
    return x.denominator == 1


def sign_maps(xi: RationalLike, eta: RationalLike, zeta: RationalLike) -> SignMaps:
    """phi(e) = (-1)^floor(xi + eta + e*zeta) and theta(e) = (-1)^floor(xi - eta + e*zeta).

    Only defined for good triples in which no coordinate and no signed sum
    +-xi +-eta +-zeta is an integer; anything else raises PreconditionViolated.
    For such triples phi != theta and at least one of them is a bijection.
    """
    xi, eta, zeta = as_rational(xi), as_rational(eta), as_rational(zeta)
    if not is_good(xi, eta, zeta):
        raise PreconditionViolated(f"({xi}, {eta}, {zeta}) is not good")
    for name, value in (('xi', xi), ('eta', eta), ('zeta', zeta)):
        if _is_integer(value):
            raise PreconditionViolated(f"{name} = {value} is an integer")
    for s in (1, -1):
        for t in (1, -1):
            total = xi + s * eta + t * zeta
            if _is_integer(total):
                raise PreconditionViolated(f"signed sum {total} of ({xi}, {eta}, {zeta}) is an integer")

    phi = {eps: Sign.parity(floor(xi + eta + int(eps) * zeta)) for eps in Sign}
    theta = {eps: Sign.parity(floor(xi - eta + int(eps) * zeta)) for eps in Sign}

    maps = SignMaps(phi=phi, theta=theta)
    if phi == theta or not (SignMaps.is_bijection(phi) or SignMaps.is_bijection(theta)):
        raise InternalInconsistency(
            f"sign maps for ({xi}, {eta}, {zeta}) are degenerate: phi={phi}, theta={theta}")
    return maps
