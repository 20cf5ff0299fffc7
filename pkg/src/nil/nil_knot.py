"""The 2-knot group pi = G x|_theta Z built on the Nil lattice G = <x, z | x^3 = (x^(3e-1) z^-1)^3 = z^3>.

G is modelled faithfully as a central Z-extension of p3 (see lattice.py). The
lifts of x and z carry unknown central offsets a and b; the central coordinate
of any word is linear in them with its exponent sums as coefficients, so the
two defining relators fix a and b. Every element then has a unique normal form
h^m u^alpha v^beta x^rho with h = x^3, u = z^-1 x and v = x z^-1.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

from sympy import Matrix, eye

from src.groups.presentations import Presentation, parse_presentation, parse_word
from src.groups.smith import AbelianizationReport, IntMatrix, abelianization, invariants_of, smith_normal_form
from src.groups.words import Word
from src.nil.lattice import NilElement, P3Element, evaluate, power
from src.utils.exceptions import ModelValidationFailed, NormalFormIncomplete, OddParameter

logger = logging.getLogger(__name__)

G_NAMES = ('x', 'z')


def _check_even(e: int) -> None:
    if e % 2:
        raise OddParameter(f"e = {e} must be even")


@dataclass(frozen=True)
class NilKnotGroup:
    e: int
    presentation: Presentation


def build_nil_knot_group(e: int) -> NilKnotGroup:
    """<t, x, z | x^3 = (x^(3e-1) z^-1)^3 = z^3, t x t^-1 = x^-1 z x^(2-3e), t z t^-1 = x^-1>"""
    _check_even(e)
    text = (f"t, x, z\n"
            f"x^3 = (x^{3 * e - 1} z^-1)^3 = z^3\n"
            f"t x t^-1 = x^-1 z x^{2 - 3 * e}\n"
            f"t z t^-1 = x^-1\n")
    presentation = parse_presentation(text)
    return NilKnotGroup(e, Presentation(presentation.generator_names, presentation.relators, {'e': str(e)}))


def g_relators(e: int) -> List[Word]:
    return [parse_word("x^3 z^-3", G_NAMES), parse_word(f"(x^{3 * e - 1} z^-1)^3 z^-3", G_NAMES)]


# theta(x) = x^-1 z x^(2-3e), theta(z) = x^-1, and its inverse
def theta_words(e: int) -> Tuple[Word, Word]:
    return parse_word(f"x^-1 z x^{2 - 3 * e}", G_NAMES), parse_word("x^-1", G_NAMES)


def theta_inverse_words(e: int) -> Tuple[Word, Word]:
    return parse_word("z^-1", G_NAMES), parse_word(f"z^-1 x z^{2 - 3 * e}", G_NAMES)


# automorphisms generating Out(G) together; theta = r k
def automorphism_words(e: int) -> Dict[str, Tuple[Word, Word]]:
    return {
        'b': (parse_word(f"z^2 x^{3 * e - 4}", G_NAMES), parse_word("z", G_NAMES)),
        'r': (parse_word("x^-1", G_NAMES), parse_word("z^-1", G_NAMES)),
        'k': (parse_word(f"x z^-1 x^{3 * e - 2}", G_NAMES), parse_word("x", G_NAMES)),
    }


P3_IDENTITY = P3Element()
NIL_IDENTITY = NilElement()
XBAR = P3Element((0, 1), 1)
ZBAR = P3Element((0, 0), 1)


def p3_quotient_images(e: int) -> Tuple[P3Element, P3Element]:
    """Images of x and z in p3 with u = z^-1 x and v = x z^-1 the basis translations."""
    _check_even(e)
    images = [XBAR, ZBAR]
    for relator in g_relators(e):
        if not evaluate(relator, images, P3_IDENTITY).is_identity():
            raise ModelValidationFailed(f"relator {relator.format(G_NAMES)} is not trivial in p3")
    ubar = ZBAR.inverse() * XBAR
    vbar = XBAR * ZBAR.inverse()
    if ubar != P3Element((1, 0), 0) or vbar != P3Element((0, 1), 0):
        raise ModelValidationFailed(f"u, v map to {ubar}, {vbar} instead of the basis translations")
    rotations = {power(XBAR, k, P3_IDENTITY).rotation for k in range(3)}
    if rotations != {0, 1, 2}:
        raise ModelValidationFailed("powers of x do not meet every rotation class")
    return XBAR, ZBAR


class GModel:
    """Faithful model of G inside the central extension of p3."""

    def __init__(self, e: int):
        _check_even(e)
        self.e = e
        relators = g_relators(e)
        zero = [NilElement((0, 1), 0, 1), NilElement((0, 0), 0, 1)]
        offsets = [evaluate(r, zero, NIL_IDENTITY) for r in relators]
        for r, value in zip(relators, offsets):
            if value.quotient() != P3_IDENTITY:
                raise ModelValidationFailed(f"relator {r.format(G_NAMES)} survives in p3")
        (p, q), (s, w) = [(r.exponent_sum(0), r.exponent_sum(1)) for r in relators]
        det = p * w - q * s
        if det == 0:
            raise ModelValidationFailed(f"central offsets are not determined for e = {e}")
        c1, c2 = -offsets[0].central, -offsets[1].central
        a = Fraction(c1 * w - q * c2, det)
        b = Fraction(p * c2 - s * c1, det)
        self.x = NilElement((0, 1), a, 1)
        self.z = NilElement((0, 0), b, 1)
        self.generators = [self.x, self.z]
        for r in relators:
            if not self.eval(r).is_identity():
                raise ModelValidationFailed(f"relator {r.format(G_NAMES)} is not trivial in the model")

        self.h = power(self.x, 3, NIL_IDENTITY)
        if self.h.translation != (0, 0) or self.h.rotation != 0 or self.h.central == 0:
            raise ModelValidationFailed(f"x^3 = {self.h} is not a nontrivial central element")
        if power(self.z, 3, NIL_IDENTITY) != self.h:
            raise ModelValidationFailed("z^3 differs from x^3")
        self.u = self.z.inverse() * self.x
        self.v = self.x * self.z.inverse()
        logger.debug(f"G model for e={e}: offsets a={a}, b={b}, height of h={self.h.central}")

    def eval(self, word: Word) -> NilElement:
        return evaluate(word, self.generators, NIL_IDENTITY)

    def normal_form(self, g: NilElement) -> Tuple[int, int, int, int]:
        """(m, alpha, beta, rho) with g = h^m u^alpha v^beta x^rho."""
        rho = g.rotation
        tail = power(self.x, rho, NIL_IDENTITY)
        alpha = g.translation[0] - tail.translation[0]
        beta = g.translation[1] - tail.translation[1]
        rest = power(self.u, alpha, NIL_IDENTITY) * power(self.v, beta, NIL_IDENTITY) * tail
        m = (g.central - rest.central) / self.h.central
        if m.denominator != 1:
            raise NormalFormIncomplete(f"central coordinate of {g} is not a power of h")
        return int(m), alpha, beta, rho


class Endomorphism:
    """An endomorphism of G given by the images of x and z, applied through normal forms."""

    def __init__(self, model: GModel, images: Tuple[Word, Word]):
        self.model = model
        self.image_x, self.image_z = (model.eval(w) for w in images)
        self.image_h = power(self.image_x, 3, NIL_IDENTITY)
        self.image_u = self.image_z.inverse() * self.image_x
        self.image_v = self.image_x * self.image_z.inverse()

    def respects_relators(self) -> bool:
        images = [self.image_x, self.image_z]
        return all(evaluate(r, images, NIL_IDENTITY).is_identity() for r in g_relators(self.model.e))

    def __call__(self, g: NilElement) -> NilElement:
        m, alpha, beta, rho = self.model.normal_form(g)
        return (power(self.image_h, m, NIL_IDENTITY) * power(self.image_u, alpha, NIL_IDENTITY)
                * power(self.image_v, beta, NIL_IDENTITY) * power(self.image_x, rho, NIL_IDENTITY))


@dataclass(frozen=True)
class PiElement:
    """t^n g with g in G."""
    n: int
    g: NilElement


class NilKnotModel:
    """pi = G x|_theta Z with t g t^-1 = theta(g)."""

    def __init__(self, e: int):
        self.group = build_nil_knot_group(e)
        self.g_model = GModel(e)
        self.theta = Endomorphism(self.g_model, theta_words(e))
        self.theta_inv = Endomorphism(self.g_model, theta_inverse_words(e))
        for name, map_ in (('theta', self.theta), ('theta^-1', self.theta_inv)):
            if not map_.respects_relators():
                raise ModelValidationFailed(f"{name} does not respect the relators of G")
        for gen in self.g_model.generators:
            if self.theta(self.theta_inv(gen)) != gen or self.theta_inv(self.theta(gen)) != gen:
                raise ModelValidationFailed("theta and its claimed inverse do not compose to the identity")
        self.identity = PiElement(0, NIL_IDENTITY)
        self.t = PiElement(1, NIL_IDENTITY)
        self.x = PiElement(0, self.g_model.x)
        self.z = PiElement(0, self.g_model.z)
        for relator in self.group.presentation.relators:
            if not self.is_identity(self.eval(relator)):
                raise ModelValidationFailed(
                    f"relator {relator.format(self.group.presentation.generator_names)} fails in pi")

    def theta_power(self, k: int, g: NilElement) -> NilElement:
        step = self.theta if k >= 0 else self.theta_inv
        for _ in range(abs(k)):
            g = step(g)
        return g

    def mul(self, p: PiElement, q: PiElement) -> PiElement:
        # g t^m = t^m theta^-m(g)
        return PiElement(p.n + q.n, self.theta_power(-q.n, p.g) * q.g)

    def inverse(self, p: PiElement) -> PiElement:
        return PiElement(-p.n, self.theta_power(p.n, p.g.inverse()))

    def pow(self, p: PiElement, k: int) -> PiElement:
        base = p if k >= 0 else self.inverse(p)
        result = self.identity
        for _ in range(abs(k)):
            result = self.mul(result, base)
        return result

    def eval(self, word: Word) -> PiElement:
        images = [self.t, self.x, self.z]
        result = self.identity
        for gen, exp in word.letters:
            result = self.mul(result, self.pow(images[gen], exp))
        return result

    def commutator(self, p: PiElement, q: PiElement) -> PiElement:
        return self.mul(self.mul(p, q), self.mul(self.inverse(p), self.inverse(q)))

    def is_identity(self, p: PiElement) -> bool:
        return p.n == 0 and p.g.is_identity()


@lru_cache(maxsize=32)
def nil_knot_model(e: int) -> NilKnotModel:
    return NilKnotModel(e)


def commutes_with_generators(e: int, word_text: str) -> Dict[str, bool]:
    """Whether the element named by word_text (over t, x, z) commutes with each generator."""
    model = nil_knot_model(e)
    element = model.eval(parse_word(word_text, model.group.presentation.generator_names))
    return {name: model.is_identity(model.commutator(element, gen))
            for name, gen in zip(('t', 'x', 'z'), (model.t, model.x, model.z))}


CENTRAL_CANDIDATE = "(t^3 x)^2"

CENTRALITY_NOTE = (f"{CENTRAL_CANDIDATE} is reported central, but in this group it fails to commute "
                   f"with some generator for every even e tried")


def non_commuting_generators(e: int, word_text: str = CENTRAL_CANDIDATE) -> List[str]:
    return [name for name, ok in commutes_with_generators(e, word_text).items() if not ok]


def centrality_check(e: int) -> bool:
    """(t^3 x)^2 commutes with t, x and z."""
    failures = non_commuting_generators(e)
    if failures:
        logger.warning(f"{CENTRAL_CANDIDATE} does not commute with {', '.join(failures)} for e = {e}; "
                       f"{CENTRALITY_NOTE}")
    return not failures


@dataclass(frozen=True)
class WeightOrbitReport:
    theta_matrix: Tuple[Tuple[int, int], Tuple[int, int]]
    smith_diagonal: Tuple[int, ...]
    cokernel: AbelianizationReport


def weight_orbit_report(e: int) -> WeightOrbitReport:
    """Action Theta of the meridianal automorphism on the translations T, and Coker(Theta - I)."""
    xbar, zbar = p3_quotient_images(e)
    images = [xbar, zbar]
    theta_x, theta_z = (evaluate(w, images, P3_IDENTITY) for w in theta_words(e))
    theta_u = theta_z.inverse() * theta_x
    theta_v = theta_x * theta_z.inverse()
    if theta_u.rotation or theta_v.rotation:
        raise ModelValidationFailed("theta does not preserve the translation subgroup")
    theta = Matrix([[theta_u.translation[0], theta_v.translation[0]],
                    [theta_u.translation[1], theta_v.translation[1]]])
    if theta ** 2 != eye(2) or theta.det() != -1:
        raise ModelValidationFailed(f"Theta = {theta.tolist()} is not an orientation-reversing involution")

    theta_minus_i = IntMatrix.from_rows((theta - eye(2)).tolist())
    diagonal = smith_normal_form(theta_minus_i).diagonal
    # cokernel of the column map T -> T
    cokernel = invariants_of(theta_minus_i.transpose())
    if not cokernel.is_infinite_cyclic:
        raise ModelValidationFailed(f"Coker(Theta - I) = {cokernel.describe()}, expected Z")
    rows = tuple(tuple(int(v) for v in row) for row in theta.tolist())
    return WeightOrbitReport(rows, diagonal, cokernel)


def automorphism_check(e: int) -> Dict[str, bool]:
    """Whether b, r, k and theta = r k respect the relators of G, and theta agrees with r k."""
    model = nil_knot_model(e)
    g_model = model.g_model
    maps = {name: Endomorphism(g_model, words) for name, words in automorphism_words(e).items()}
    result = {name: m.respects_relators() for name, m in maps.items()}
    result['theta'] = model.theta.respects_relators()
    result['theta = r k'] = all(maps['r'](maps['k'](g)) == model.theta(g) for g in g_model.generators)
    return result


def nil_knot_abelianization(e: int) -> AbelianizationReport:
    return abelianization(build_nil_knot_group(e).presentation)
