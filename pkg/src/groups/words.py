from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

Letter = Tuple[int, int]


def _reduce(letters: Iterable[Letter]) -> Tuple[Letter, ...]:
    stack: List[Letter] = []
    for gen, exp in letters:
        if exp == 0:
            continue
        if stack and stack[-1][0] == gen:
            merged = stack[-1][1] + exp
            stack.pop()
            if merged:
                stack.append((gen, merged))
        else:
            stack.append((gen, exp))
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """Freely reduced word: a sequence of (generator index, nonzero exponent) syllables."""
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'letters', _reduce(self.letters))

    @classmethod
    def gen(cls, index: int, exp: int = 1) -> 'Word':
        return cls(((index, exp),))

    @classmethod
    def product(cls, words: Iterable['Word']) -> 'Word':
        letters: List[Letter] = []
        for w in words:
            letters.extend(w.letters)
        return cls(tuple(letters))

    def __mul__(self, other: 'Word') -> 'Word':
        return Word(self.letters + other.letters)

    def inverse(self) -> 'Word':
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, n: int) -> 'Word':
        base = self if n >= 0 else self.inverse()
        return Word(base.letters * abs(n))

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def exponent_sum(self, index: int) -> int:
        return sum(e for g, e in self.letters if g == index)

    def exponent_vector(self, generator_count: int) -> List[int]:
        vector = [0] * generator_count
        for g, e in self.letters:
            vector[g] += e
        return vector

    def generators(self) -> set:
        return {g for g, _ in self.letters}

    def substitute(self, images: Dict[int, 'Word']) -> 'Word':
        """Image under the homomorphism sending generator i to images[i] (identity elsewhere)."""
        return Word.product(
            (images[g] ** e) if g in images else Word.gen(g, e) for g, e in self.letters)

    def rotate(self, k: int) -> 'Word':
        """Cyclic rotation by k letters (a conjugate)."""
        flat = [(g, 1 if e > 0 else -1) for g, e in self.letters for _ in range(abs(e))]
        if not flat:
            return self
        k %= len(flat)
        return Word(tuple(flat[k:] + flat[:k]))

    def format(self, names: Sequence[str]) -> str:
        if not self.letters:
            return '1'
        return ' '.join(names[g] if e == 1 else f"{names[g]}^{e}" for g, e in self.letters)


def commutator(a: Word, b: Word) -> Word:
    """[a, b] = a b a^-1 b^-1"""
    return a * b * a.inverse() * b.inverse()
