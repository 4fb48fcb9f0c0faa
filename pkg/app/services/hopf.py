"""
Presentations of pointed Hopf algebras P(G, R, D) and the named families.

A datum (a_i, χ_i, μ_i, λ_ij) over an abelian group G presents the algebra
generated by G and x_1, ..., x_n with

    g^{M_l} = 1, gh = hg,
    g x_i g^{-1} = χ_i(g) x_i,
    x_i^{N_i} = μ_i (1 - a_i^{N_i}),
    x_j x_i = χ_i(a_j) x_i x_j + λ_ij (1 - a_i a_j),

and Δ(x_i) = x_i ⊗ 1 + a_i ⊗ x_i. Generators that a family writes as
x ⊗ b + 1 ⊗ x are stored as x_i = x b^{-1} with a_i = b^{-1}.
"""
from dataclasses import dataclass, field
import logging

from sympy import isprime

from app.exceptions import BadOrder, DatumViolation, NotPrimitiveRoot, SingularMatrix
from app.models import Coproduct, Direction, Family, RelationKind
from app.services.cyclo import CycNum, order_of
from app.services.groups import AbGroup, Character

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Datum:
    group: AbGroup
    a: tuple
    chi: tuple
    mu: tuple
    lam: tuple

    @property
    def rank(self):
        return len(self.a)

    def q(self, i):
        return self.chi[i](self.a[i])

    def N(self, i):
        return order_of(self.q(i))

    def lam_at(self, i, j):
        return CycNum.coerce(self.lam[i][j])

    def violations(self):
        """Every broken datum rule, with the indices involved"""
        out = []
        n = self.rank
        if len(self.chi) != n or len(self.mu) != n or len(self.lam) != n:
            return [{'rule': 'shape', 'indices': [], 'message': 'a, chi, mu and lambda must have equal lengths'}]
        if any(len(row) != n for row in self.lam):
            return [{'rule': 'shape', 'indices': [], 'message': f'lambda must be {n}x{n}'}]
        for i in range(n):
            q = self.q(i)
            if q == 1:
                out.append({'rule': 'q_nontrivial', 'indices': [i],
                            'message': f'q_{i} = χ_{i}(a_{i}) must differ from 1'})
                continue
            if self.mu[i] not in (0, 1):
                out.append({'rule': 'mu_range', 'indices': [i], 'message': f'μ_{i} must be 0 or 1'})
            big_n = self.N(i)
            a_power_trivial = (self.a[i] ** big_n).is_identity()
            chi_power_nontrivial = not (self.chi[i] ** big_n).is_trivial()
            if self.mu[i] and (a_power_trivial or chi_power_nontrivial):
                out.append({'rule': 'mu_compat', 'indices': [i],
                            'message': f'μ_{i} must vanish when a_{i}^N = 1 or χ_{i}^N ≠ ε'})
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                if self.chi[j](self.a[i]) * self.chi[i](self.a[j]) != 1:
                    if i < j:
                        out.append({'rule': 'reciprocal', 'indices': [i, j],
                                    'message': f'χ_{j}(a_{i})χ_{i}(a_{j}) must equal 1'})
                    continue
                lam = self.lam_at(i, j)
                if lam and ((self.a[i] * self.a[j]).is_identity()
                            or not (self.chi[i] * self.chi[j]).is_trivial()):
                    out.append({'rule': 'lambda_compat', 'indices': [i, j],
                                'message': f'λ_{i}{j} must vanish when a_{i}a_{j} = 1 or χ_{i}χ_{j} ≠ ε'})
                if i < j and self.lam_at(j, i) != -self.chi[j](self.a[i]) * lam:
                    out.append({'rule': 'lambda_antisymmetry', 'indices': [i, j],
                                'message': f'λ_{j}{i} must equal -χ_{j}(a_{i})λ_{i}{j}'})
        return out

    def to_dict(self):
        return {
            'group': self.group.to_dict(),
            'a': [g.to_dict() for g in self.a],
            'chi': [c.to_dict() for c in self.chi],
            'mu': list(self.mu),
            'lambda': [[self.lam_at(i, j).to_dict() for j in range(self.rank)] for i in range(self.rank)],
        }


@dataclass(frozen=True)
class SkewGenerator:
    name: str
    index: int
    coproduct: str = Coproduct.LEFT
    # native generator is x_i·anchor when the coproduct is RIGHT
    anchor: object = None
    datum_name: str = ''

    def to_dict(self):
        data = {'name': self.name, 'index': self.index, 'coproduct': str(self.coproduct),
                'datum_name': self.datum_name or self.name}
        if self.anchor is not None:
            data['anchor'] = self.anchor.to_dict()
        return data


@dataclass(frozen=True)
class Relation:
    kind: str
    indices: tuple
    text: str
    coefficient: CycNum = None
    power: int = 0

    def to_dict(self):
        return {'kind': str(self.kind), 'indices': list(self.indices), 'text': self.text}


@dataclass(frozen=True)
class HopfPresentation:
    datum: Datum
    family: str = Family.CUSTOM
    params: dict = field(default_factory=dict, hash=False, compare=False)
    group_names: tuple = ()
    skews: tuple = ()
    relations: tuple = ()
    flags: tuple = ()

    @property
    def group(self):
        return self.datum.group

    def group_index(self, name):
        try:
            return self.group_names.index(name)
        except ValueError:
            return None

    def skew_by_name(self, name):
        for skew in self.skews:
            if name in (skew.name, skew.datum_name):
                return skew
        return None

    def element_text(self, g):
        parts = []
        for name, e in zip(self.group_names, g.exps):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f'{name}^{e}')
        return ''.join(parts) or '1'

    def to_dict(self):
        return {
            'family': str(self.family),
            'params': {k: _param_to_json(v) for k, v in sorted(self.params.items())},
            'datum': self.datum.to_dict(),
            'generators': {
                'group': list(self.group_names),
                'skew': [s.to_dict() for s in self.skews],
            },
            'relations': [r.to_dict() for r in self.relations],
            'flags': list(self.flags),
        }


def _param_to_json(value):
    if isinstance(value, CycNum):
        return value.to_dict()
    return value


def _materialize(datum, group_names, skews):
    relations = []
    group = datum.group
    for index, order in enumerate(group.factors):
        relations.append(Relation(RelationKind.ORDER, (index,), f'{group_names[index]}^{order} = 1',
                                  power=order))
    for s in range(group.rank):
        for t in range(s + 1, group.rank):
            relations.append(Relation(RelationKind.COMMUTE, (s, t),
                                      f'{group_names[s]}{group_names[t]} = {group_names[t]}{group_names[s]}'))
    names = [skew.datum_name or skew.name for skew in skews]
    for i in range(datum.rank):
        for index, g in enumerate(group.generators()):
            value = datum.chi[i](g)
            relations.append(Relation(
                RelationKind.SKEW_COMMUTE, (i, index),
                f'{group_names[index]} {names[i]} = ({value}) {names[i]} {group_names[index]}',
                coefficient=value,
            ))
    for i in range(datum.rank):
        big_n = datum.N(i)
        relations.append(Relation(
            RelationKind.POWER, (i,),
            f'{names[i]}^{big_n} = {datum.mu[i]}(1 - a_{i}^{big_n})',
            coefficient=CycNum.rational(datum.mu[i]), power=big_n,
        ))
    for i in range(datum.rank):
        for j in range(i + 1, datum.rank):
            relations.append(Relation(
                RelationKind.CROSS, (i, j),
                f'{names[j]}{names[i]} = ({datum.chi[i](datum.a[j])}) {names[i]}{names[j]}'
                f' + ({datum.lam_at(i, j)})(1 - a_{i}a_{j})',
                coefficient=datum.chi[i](datum.a[j]),
            ))
    return tuple(relations)


def make_presentation(datum, family=Family.CUSTOM, params=None, group_names=None, skews=None, flags=()):
    """
    Validate a datum and materialize its relation set.

    Raises:
        DatumViolation: listing every rule that fails
    """
    violations = datum.violations()
    if violations:
        logger.info(f'Datum rejected: {[v["rule"] for v in violations]}')
        raise DatumViolation(violations)
    if group_names is None:
        group_names = tuple(f'g{i + 1}' for i in range(datum.group.rank))
    if skews is None:
        skews = tuple(SkewGenerator(name=f'x{i + 1}', index=i) for i in range(datum.rank))
    return HopfPresentation(
        datum=datum,
        family=family,
        params=dict(params or {}),
        group_names=tuple(group_names),
        skews=tuple(skews),
        relations=_materialize(datum, group_names, skews),
        flags=tuple(flags),
    )


def _require_root(omega, n):
    omega = CycNum.coerce(omega)
    if order_of(omega) != n:
        raise NotPrimitiveRoot(f'{omega} is not a primitive {n}-th root of unity', n=n)
    return omega


def taft(n, omega):
    """T_n(ω): g^n = 1, x^n = 0, g x g^{-1} = ω x, Δx = x ⊗ 1 + g ⊗ x"""
    if n < 2:
        raise NotPrimitiveRoot('Taft algebras need n ≥ 2', n=n)
    omega = _require_root(omega, n)
    group = AbGroup((n,))
    datum = Datum(
        group=group,
        a=(group.generator(0),),
        chi=(Character.from_values(group, [omega]),),
        mu=(0,),
        lam=((CycNum.zero(),),),
    )
    return make_presentation(datum, Family.TAFT, {'n': n, 'omega': omega}, ('g',),
                             (SkewGenerator('x', 0),))


def dd_taft(n, omega):
    """
    Drinfeld double D(T_n(ω)) on g, G, x, X:

        g x = ω^{-1} x g,  G x = ω^{-1} x G,  g X = ω X g,  G X = ω X G,
        x^n = X^n = 0,     x X - ω X x = 1 - g G,

    with Δx = x ⊗ 1 + g ⊗ x and ΔX = X ⊗ 1 + G ⊗ X, already in datum form.
    """
    if n < 2:
        raise NotPrimitiveRoot('D(T_n) needs n ≥ 2', n=n)
    omega = _require_root(omega, n)
    group = AbGroup((n, n))
    g, big_g = group.generators()
    inv = omega.inverse()
    datum = Datum(
        group=group,
        a=(g, big_g),
        chi=(Character.from_values(group, [inv, inv]), Character.from_values(group, [omega, omega])),
        mu=(0, 0),
        lam=((CycNum.zero(), -inv), (CycNum.one(), CycNum.zero())),
    )
    flags = ('parity_caveat',) if n % 2 == 0 else ()
    return make_presentation(
        datum, Family.DD_TAFT, {'n': n, 'omega': omega}, ('g', 'G'),
        (SkewGenerator('x', 0), SkewGenerator('X', 1)), flags,
    )


def uq_sl2(n, omega):
    """
    u_q(sl2): a^n = 1, a x a^{-1} = ω² x, a y a^{-1} = ω^{-2} y, xy - yx = a - a^{-1},
    Δx = x ⊗ a + 1 ⊗ x. Stored with x_1 = x a^{-1}, a_1 = a^{-1}, χ_1(a) = ω²
    and x_2 = y, a_2 = a^{-1}, χ_2(a) = ω^{-2}; λ_12 = -1, λ_21 = ω².
    """
    if n < 3 or n % 2 == 0:
        raise BadOrder(f'u_q(sl2) needs an odd n ≥ 3, got {n}', n=n)
    omega = _require_root(omega, n)
    group = AbGroup((n,))
    a = group.generator(0)
    datum = Datum(
        group=group,
        a=(a.inverse(), a.inverse()),
        chi=(Character.from_values(group, [omega ** 2]), Character.from_values(group, [omega ** -2])),
        mu=(0, 0),
        lam=((CycNum.zero(), CycNum.rational(-1)), (omega ** 2, CycNum.zero())),
    )
    return make_presentation(
        datum, Family.UQ_SL2, {'n': n, 'omega': omega}, ('a',),
        (SkewGenerator('x', 0, Coproduct.RIGHT, anchor=a, datum_name='x1'), SkewGenerator('y', 1)),
    )


def book(p, q, m):
    """
    Book algebra h(q, m): a^p = 1, a x a^{-1} = q x, a y a^{-1} = q^m y, xy - yx = 0;
    x is (a,1)-primitive and y is (1,a^m)-primitive.
    """
    q = CycNum.coerce(q)
    if order_of(q) != p or p < 2:
        raise BadOrder(f'{q} does not have order {p}', p=p)
    if m % p == 0:
        raise BadOrder(f'm must be nonzero modulo {p}', m=m)
    group = AbGroup((p,))
    a = group.generator(0)
    datum = Datum(
        group=group,
        a=(a.inverse(), a ** m),
        chi=(Character.from_values(group, [q]), Character.from_values(group, [q ** m])),
        mu=(0, 0),
        lam=((CycNum.zero(), CycNum.zero()), (CycNum.zero(), CycNum.zero())),
    )
    return make_presentation(
        datum, Family.BOOK, {'p': p, 'q': q, 'm': m}, ('a',),
        (SkewGenerator('x', 0, Coproduct.RIGHT, anchor=a, datum_name='x1'), SkewGenerator('y', 1)),
    )


def p3_example(p, omega):
    """T_p(ω) ⊗ F Z_p: G = Z_p x Z_p on g, h; χ(g) = ω, χ(h) = 1, a = g, μ = 0"""
    if p < 3 or not isprime(p):
        raise BadOrder(f'p must be an odd prime, got {p}', p=p)
    omega = _require_root(omega, p)
    group = AbGroup((p, p))
    datum = Datum(
        group=group,
        a=(group.generator(0),),
        chi=(Character.from_values(group, [omega, CycNum.one()]),),
        mu=(0,),
        lam=((CycNum.zero(),),),
    )
    return make_presentation(datum, Family.P3, {'p': p, 'omega': omega}, ('g', 'h'),
                             (SkewGenerator('x', 0),))


@dataclass(frozen=True)
class TranslationResult:
    matrix: object
    direction: str
    shift: CycNum

    def to_dict(self):
        return {'matrix': self.matrix.to_dict(), 'direction': str(self.direction),
                'shift': self.shift.to_dict()}


def translate_generator(u_x, u_a, direction):
    """
    Move u(x) between the (a,1)-primitive generator x and x_1 = x a^{-1}.

    TO_DATUM returns u(x)u(a)^{-1}; FROM_DATUM returns u(x_1)u(a). The
    additive ambiguity λ·I is fixed to 0.

    Raises:
        SingularMatrix: when u(a) is not invertible
    """
    if not u_a.is_invertible():
        raise SingularMatrix('u(a) must be invertible to translate a generator')
    if direction == Direction.TO_DATUM:
        matrix = u_x @ u_a.inverse()
    else:
        matrix = u_x @ u_a
    return TranslationResult(matrix=matrix, direction=direction, shift=CycNum.zero())
