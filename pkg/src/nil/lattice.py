"""Exact models of the wallpaper group p3 = Z^2 x| Z/3 and of a central Z-extension of it.

Translations are integer coordinates over a basis (u, v); the rotation R of
order 3 acts by the matrix [[0, -1], [1, -1]] in that basis.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple, TypeVar

from src.groups.words import Word

Vector = Tuple[int, int]

ROTATION = ((0, -1), (1, -1))


def rotate(s: Vector, times: int) -> Vector:
    x, y = s
    for _ in range(times % 3):
        x, y = ROTATION[0][0] * x + ROTATION[0][1] * y, ROTATION[1][0] * x + ROTATION[1][1] * y
    return (x, y)


def area(s: Vector, s2: Vector) -> int:
    """Standard area form; invariant under the rotation since det R = 1."""
    return s[0] * s2[1] - s[1] * s2[0]


@dataclass(frozen=True)
class P3Element:
    translation: Vector = (0, 0)
    rotation: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'rotation', self.rotation % 3)

    def __mul__(self, other: 'P3Element') -> 'P3Element':
        tx, ty = rotate(other.translation, self.rotation)
        return P3Element((self.translation[0] + tx, self.translation[1] + ty), self.rotation + other.rotation)

    def inverse(self) -> 'P3Element':
        x, y = rotate(self.translation, -self.rotation)
        return P3Element((-x, -y), -self.rotation)

    def is_identity(self) -> bool:
        return self.translation == (0, 0) and self.rotation == 0


@dataclass(frozen=True)
class NilElement:
    """(s, c, rho) with (s,c,rho)(s',c',rho') = (s + R^rho s', c + c' + area(s, R^rho s')/2, rho + rho')."""
    translation: Vector = (0, 0)
    central: Fraction = Fraction(0)
    rotation: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'rotation', self.rotation % 3)
        object.__setattr__(self, 'central', Fraction(self.central))

    def __mul__(self, other: 'NilElement') -> 'NilElement':
        moved = rotate(other.translation, self.rotation)
        return NilElement(
            (self.translation[0] + moved[0], self.translation[1] + moved[1]),
            self.central + other.central + Fraction(area(self.translation, moved), 2),
            self.rotation + other.rotation)

    def inverse(self) -> 'NilElement':
        x, y = rotate(self.translation, -self.rotation)
        return NilElement((-x, -y), -self.central, -self.rotation)

    def quotient(self) -> P3Element:
        return P3Element(self.translation, self.rotation)

    def is_identity(self) -> bool:
        return self.translation == (0, 0) and self.central == 0 and self.rotation == 0


E = TypeVar('E')


def power(g: E, n: int, identity: E) -> E:
    """g^n by repeated squaring; works for any element type with * and inverse()."""
    if n < 0:
        g, n = g.inverse(), -n
    result = identity
    while n:
        if n & 1:
            result = result * g
        g = g * g
        n >>= 1
    return result


def evaluate(word: Word, images: Sequence[E], identity: E) -> E:
    result = identity
    for gen, exp in word.letters:
        result = result * power(images[gen], exp, identity)
    return result

