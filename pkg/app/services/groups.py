"""
Finite abelian groups, their characters and bicharacters.

A group is a product of cyclic factors Z_{m_1} x ... x Z_{m_k} with named
generator positions; presentations refer to generators by position, so the
factors are kept in the order given. Subgroups are handled by exhaustive
closure, which is fine at desk scale.
"""
from dataclasses import dataclass
from functools import reduce
from itertools import product
from math import gcd
import logging

from django.conf import settings
from sympy import factorint

from app.exceptions import (
    BadBicharacter, HopfActionError, NoSolution, ParentMismatch, SchemaError,
)
from app.services.cyclo import CycNum, cyc_root, root_exponent

logger = logging.getLogger(__name__)


def _lcm(a, b):
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class AbGroup:
    factors: tuple

    def __post_init__(self):
        factors = tuple(int(m) for m in self.factors)
        if any(m < 1 for m in factors):
            raise SchemaError(f'Cyclic factors must be positive: {factors}', pointer='group')
        object.__setattr__(self, 'factors', factors)
        limit = getattr(settings, 'HOPF_MAX_GROUP_ORDER', 512)
        if self.order() > limit:
            raise HopfActionError(f'Group of order {self.order()} exceeds the desk-scale limit {limit}')

    @property
    def rank(self):
        return len(self.factors)

    def order(self):
        return reduce(lambda a, b: a * b, self.factors, 1)

    def exponent(self):
        return reduce(_lcm, self.factors, 1)

    def identity(self):
        return GrpElt(self, (0,) * self.rank)

    def element(self, exps):
        return GrpElt(self, tuple(exps))

    def generator(self, index):
        exps = [0] * self.rank
        exps[index] = 1
        return GrpElt(self, tuple(exps))

    def generators(self):
        return tuple(self.generator(i) for i in range(self.rank))

    def elements(self):
        for exps in product(*(range(m) for m in self.factors)):
            yield GrpElt(self, exps)

    def characters(self):
        for exps in product(*(range(m) for m in self.factors)):
            yield Character(self, exps)

    def trivial_character(self):
        return Character(self, (0,) * self.rank)

    def invariant_factors(self):
        """Invariant-factor shape d_1 | d_2 | ... (used for shape checks)"""
        prime_powers = {}
        for m in self.factors:
            for p, e in factorint(m).items():
                prime_powers.setdefault(int(p), []).append(p ** e)
        for powers in prime_powers.values():
            powers.sort(reverse=True)
        length = max((len(v) for v in prime_powers.values()), default=0)
        shape = []
        for i in range(length):
            d = 1
            for powers in prime_powers.values():
                if i < len(powers):
                    d *= int(powers[i])
            shape.append(d)
        return tuple(sorted(shape))

    def to_dict(self):
        return list(self.factors)


@dataclass(frozen=True)
class GrpElt:
    parent: AbGroup
    exps: tuple

    def __post_init__(self):
        if len(self.exps) != self.parent.rank:
            raise ParentMismatch(f'Element {self.exps} does not fit group {self.parent.factors}')
        object.__setattr__(
            self, 'exps', tuple(int(e) % m for e, m in zip(self.exps, self.parent.factors)),
        )

    def __mul__(self, other):
        _check_parent(self.parent, other.parent)
        return GrpElt(self.parent, tuple(a + b for a, b in zip(self.exps, other.exps)))

    def __pow__(self, k):
        return GrpElt(self.parent, tuple(a * k for a in self.exps))

    def inverse(self):
        return self ** -1

    def is_identity(self):
        return not any(self.exps)

    def order(self):
        return reduce(
            _lcm, (m // gcd(e, m) for e, m in zip(self.exps, self.parent.factors)), 1,
        )

    def to_dict(self):
        return list(self.exps)


@dataclass(frozen=True)
class Character:
    """Generator g_l maps to ζ_{m_l}^{e_l}"""

    parent: AbGroup
    exps: tuple

    def __post_init__(self):
        if len(self.exps) != self.parent.rank:
            raise ParentMismatch(f'Character {self.exps} does not fit group {self.parent.factors}')
        object.__setattr__(
            self, 'exps', tuple(int(e) % m for e, m in zip(self.exps, self.parent.factors)),
        )

    @classmethod
    def from_values(cls, parent, values):
        """Character with prescribed values on the generators"""
        exps = []
        for value, m in zip(values, parent.factors):
            k = root_exponent(value, m)
            if k is None:
                raise NoSolution(f'{value} is not an {m}-th root of unity')
            exps.append(k)
        return cls(parent, tuple(exps))

    def __call__(self, g):
        return char_eval(self, g)

    def __mul__(self, other):
        _check_parent(self.parent, other.parent)
        return Character(self.parent, tuple(a + b for a, b in zip(self.exps, other.exps)))

    def __pow__(self, k):
        return Character(self.parent, tuple(a * k for a in self.exps))

    def inverse(self):
        return self ** -1

    def is_trivial(self):
        return not any(self.exps)

    def order(self):
        return self.as_element().order()

    def generator_values(self):
        return tuple(cyc_root(m, e) for e, m in zip(self.exps, self.parent.factors))

    def as_element(self):
        """The same exponent vector viewed as an element of the dual group"""
        return GrpElt(self.parent, self.exps)

    def to_dict(self):
        return list(self.exps)


def _check_parent(a, b):
    if a != b:
        raise ParentMismatch(f'Group {a.factors} differs from {b.factors}')


def dual_generators(group):
    """Characters χ_l with χ_l(g_t) = ζ_{m_l} when l = t and 1 otherwise"""
    out = []
    for index in range(group.rank):
        exps = [0] * group.rank
        exps[index] = 1
        out.append(Character(group, tuple(exps)))
    return tuple(out)


def char_eval(chi, g):
    _check_parent(chi.parent, g.parent)
    big = chi.parent.exponent()
    k = sum(e * x * (big // m) for e, x, m in zip(chi.exps, g.exps, chi.parent.factors))
    return cyc_root(big, k)


# Subgroups

def closure(factors, generators):
    """All exponent vectors in the subgroup of Z_{m_1} x ... generated by ``generators``"""
    identity = (0,) * len(factors)
    seen = {identity}
    frontier = [identity]
    generators = [tuple(g) for g in generators]
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = tuple((a + b) % m for a, b, m in zip(x, g, factors))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def _vector_order(vec, factors):
    return reduce(_lcm, (m // gcd(e, m) for e, m in zip(vec, factors)), 1)


def subgroup_basis(factors, generators):
    """
    Independent generators of the subgroup spanned by ``generators``.

    Picks elements of maximal order whose cyclic span meets the current span
    trivially until the whole subgroup is covered.

    Returns:
        tuple of exponent vectors; the subgroup is their direct product
    """
    target = closure(factors, generators)
    basis = []
    span = closure(factors, [])
    while len(span) < len(target):
        candidates = sorted(
            (v for v in target if v not in span),
            key=lambda v: (-_vector_order(v, factors), v),
        )
        chosen = None
        for v in candidates:
            cyclic = closure(factors, [v])
            if cyclic & span == {(0,) * len(factors)}:
                chosen = v
                break
        if chosen is None:
            raise HopfActionError(f'Could not split subgroup generated by {generators}')
        basis.append(chosen)
        span = closure(factors, basis)
    return tuple(basis)


def annihilator(group, elements):
    """Characters of ``group`` trivial on every element given"""
    return tuple(
        chi for chi in group.characters()
        if all(char_eval(chi, g) == 1 for g in elements)
    )


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by the images of the source generators"""

    source: AbGroup
    target: AbGroup
    images: tuple

    def __call__(self, g):
        out = self.target.identity()
        for e, image in zip(g.exps, self.images):
            out = out * image ** e
        return out

    def to_dict(self):
        return [image.to_dict() for image in self.images]


@dataclass(frozen=True)
class Bicharacter:
    """
    β on ``support`` with β(τ_s, τ_t) = ζ_L^{table[s][t]}, L the exponent of the support.
    """

    support: AbGroup
    table: tuple

    def __post_init__(self):
        big = self.support.exponent()
        rows = tuple(tuple(int(v) % big for v in row) for row in self.table)
        k = self.support.rank
        if len(rows) != k or any(len(row) != k for row in rows):
            raise BadBicharacter(f'Bicharacter table must be {k}x{k}')
        for s, t in product(range(k), repeat=2):
            b = rows[s][t]
            if (self.support.factors[s] * b) % big or (self.support.factors[t] * b) % big:
                raise BadBicharacter(
                    f'Entry ({s},{t}) = {b} is not compatible with the orders of the generators',
                    s=s, t=t,
                )
        object.__setattr__(self, 'table', rows)

    @classmethod
    def from_values(cls, support, values):
        """Build from a k x k grid of root-of-unity CycNum values"""
        big = support.exponent()
        table = []
        for row in values:
            exps = []
            for value in row:
                k = root_exponent(value, big)
                if k is None:
                    raise BadBicharacter(f'{value} is not a {big}-th root of unity')
                exps.append(k)
            table.append(tuple(exps))
        return cls(support, tuple(table))

    def exponent_of(self, sigma, tau):
        k = self.support.rank
        return sum(
            sigma.exps[s] * tau.exps[t] * self.table[s][t]
            for s in range(k) for t in range(k)
        ) % self.support.exponent()

    def __call__(self, sigma, tau):
        _check_parent(sigma.parent, self.support)
        _check_parent(tau.parent, self.support)
        return cyc_root(self.support.exponent(), self.exponent_of(sigma, tau))

    def to_dict(self):
        return {'support': self.support.to_dict(), 'table': [list(row) for row in self.table]}


@dataclass(frozen=True)
class BetaProps:
    alternating: bool
    nondegenerate: bool
    kernel: tuple

    def to_dict(self):
        return {
            'alternating': self.alternating,
            'nondegenerate': self.nondegenerate,
            'kernel': [g.to_dict() for g in self.kernel],
        }


def beta_props(beta):
    group = beta.support
    gens = group.generators()
    alternating = all(beta(t, t) == 1 for t in gens) and all(
        beta(s, t) * beta(t, s) == 1 for s in gens for t in gens
    )
    kernel = tuple(
        sigma for sigma in group.elements()
        if all(beta(sigma, t) == 1 for t in gens)
    )
    return BetaProps(alternating=alternating, nondegenerate=len(kernel) == 1, kernel=kernel)


def solve_f(beta, chars, group=None):
    """
    The homomorphism f: G -> 𝔗 with β(f(g), τ_t) = τ_t(g).

    Args:
        beta: bicharacter on 𝔗
        chars: one Character of G per generator τ_t of 𝔗
        group: G; defaults to the parent of the characters

    Returns:
        GroupHom from G to 𝔗

    Raises:
        NoSolution: when some generator of G has no preimage
    """
    support = beta.support
    if len(chars) != support.rank:
        raise NoSolution(f'Need {support.rank} characters, got {len(chars)}')
    if group is None:
        if not chars:
            raise NoSolution('Cannot infer the acting group from an empty character list')
        group = chars[0].parent
    gens = support.generators()
    images = []
    for g in group.generators():
        targets = [chi(g) for chi in chars]
        found = [
            sigma for sigma in support.elements()
            if all(beta(sigma, t) == value for t, value in zip(gens, targets))
        ]
        if not found:
            raise NoSolution(f'No f(g) matches the character values at generator {g.exps}', g=g.exps)
        if len(found) > 1:
            logger.warning(f'solve_f: {len(found)} candidates for {g.exps}; β is degenerate')
        images.append(found[0])
    return GroupHom(source=group, target=support, images=tuple(images))


def parse_group(data, pointer='group'):
    if not isinstance(data, (list, tuple)) or not all(isinstance(m, int) for m in data):
        raise SchemaError('A group is a list of positive integers', pointer=pointer)
    return AbGroup(tuple(data))
