"""Finite presentations and their text form.

Text grammar, one item per line, '#' starts a comment::

    x, y, z                 # generator names (commas or spaces)
    x^3 z^-1 x^5            # relator word
    (x z^-1)^3              # parenthesised power
    [x, y]                  # commutator x y x^-1 y^-1
    x^3 = z^3 = y           # equations become x^3 z^-3 and z^3 y^-1
    x^2 = 1                 # '1' is the empty word

Names are letters, digits and underscores starting with a letter. Juxtaposed
single-letter names ("xyz") are split when the whole token is not a name.
"""
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from src.groups.words import Word, commutator
from src.utils.exceptions import ParseError, PreconditionViolated

_TOKEN = re.compile(r'\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<power>\^\s*[+-]?\d+)'
                    r'|(?P<one>1)|(?P<punct>[()\[\],]))')
_NAME = re.compile(r'^[A-Za-z_][A-Za-z0-9_]*$')


@dataclass(frozen=True)
class Presentation:
    generator_names: Tuple[str, ...]
    relators: Tuple[Word, ...] = ()
    annotations: Dict[str, str] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, 'generator_names', tuple(self.generator_names))
        object.__setattr__(self, 'relators', tuple(self.relators))
        if not self.generator_names:
            raise PreconditionViolated("a presentation needs at least one generator")
        if len(set(self.generator_names)) != len(self.generator_names):
            raise PreconditionViolated(f"repeated generator names in {self.generator_names}")
        for relator in self.relators:
            for g in relator.generators():
                if not 0 <= g < self.generator_count:
                    raise PreconditionViolated(f"relator uses generator index {g} of {self.generator_count}")

    @property
    def generator_count(self) -> int:
        return len(self.generator_names)

    def index(self, name: str) -> int:
        return self.generator_names.index(name)

    def word(self, text: str) -> Word:
        return parse_word(text, self.generator_names)

    def with_relators(self, extra: Iterable[Word]) -> 'Presentation':
        return Presentation(self.generator_names, self.relators + tuple(extra), dict(self.annotations))

    def format_relators(self) -> List[str]:
        return [r.format(self.generator_names) for r in self.relators]

    def to_text(self) -> str:
        return '\n'.join([', '.join(self.generator_names)] + self.format_relators()) + '\n'


class _WordParser:
    def __init__(self, text: str, names: Sequence[str]):
        self.text = text
        self.names = list(names)
        self.lookup = {n: i for i, n in enumerate(names)}
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _split_name(self, token: str) -> List[str]:
        if token in self.lookup:
            return [token]
        if all(ch in self.lookup for ch in token):
            return list(token)
        raise ParseError(f"unknown generator {token!r}", self.text)

    def _tokenize(self, text: str) -> List[Tuple[str, str]]:
        tokens = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _TOKEN.match(stripped, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character at offset {pos}", text)
            pos = m.end()
            if m.group('name'):
                tokens.extend(('name', n) for n in self._split_name(m.group('name')))
            elif m.group('power'):
                tokens.append(('power', m.group('power')[1:].strip()))
            elif m.group('one'):
                tokens.append(('one', '1'))
            else:
                tokens.append(('punct', m.group('punct')))
        return tokens

    def peek(self) -> Optional[Tuple[str, str]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def expect(self, value: str) -> None:
        token = self.peek()
        if token != ('punct', value):
            raise ParseError(f"expected {value!r}", self.text)
        self.pos += 1

    def parse(self) -> Word:
        w = self.word()
        if self.peek() is not None:
            raise ParseError(f"unexpected {self.peek()[1]!r}", self.text)
        return w

    def word(self) -> Word:
        factors = []
        while True:
            token = self.peek()
            if token is None or token in (('punct', ')'), ('punct', ']'), ('punct', ',')):
                break
            factors.append(self.factor())
        return Word.product(factors)

    def factor(self) -> Word:
        kind, value = self.peek()
        self.pos += 1
        if kind == 'name':
            atom = Word.gen(self.lookup[value])
        elif kind == 'one':
            atom = Word()
        elif value == '(':
            atom = self.word()
            self.expect(')')
        elif value == '[':
            left = self.word()
            self.expect(',')
            right = self.word()
            self.expect(']')
            atom = commutator(left, right)
        else:
            raise ParseError(f"unexpected {value!r}", self.text)
        token = self.peek()
        if token and token[0] == 'power':
            self.pos += 1
            atom = atom ** int(token[1])
        return atom


def parse_word(text: str, names: Sequence[str]) -> Word:
    return _WordParser(text, names).parse()


def parse_relators(line: str, names: Sequence[str]) -> List[Word]:
    """A relator line; a chain a = b = c gives a b^-1 and b c^-1."""
    sides = [parse_word(part, names) for part in line.split('=')]
    if len(sides) == 1:
        return sides
    return [left * right.inverse() for left, right in zip(sides, sides[1:])]


def parse_generator_names(line: str) -> List[str]:
    names = [n for n in re.split(r'[\s,]+', line.strip()) if n]
    for n in names:
        if not _NAME.match(n):
            raise ParseError(f"bad generator name {n!r}", line)
    return names


def parse_presentation(text: str) -> Presentation:
    lines = [line.split('#', 1)[0].strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    if not lines:
        raise ParseError("empty presentation")
    names = parse_generator_names(lines[0])
    relators: List[Word] = []
    for line in lines[1:]:
        relators.extend(parse_relators(line, names))
    return Presentation(tuple(names), tuple(relators))
