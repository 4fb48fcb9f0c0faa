"""
Isomorphism of inner actions.

Two actions u, v of the same presentation on M_m are isomorphic when some
invertible C and scalars λ(g), μ_i give

    u(g) = λ(g)·C v(g) C^{-1},    u(x_i) = C v(x_i) C^{-1} + μ_i·u(a_i).

Both actions are normalized first, which forces μ = 0; the search then runs
over the finitely many λ allowed by the spectra and looks for an invertible
element in each intertwiner space.
"""
from dataclasses import dataclass
from itertools import product
from math import gcd
import logging
import random

from django.conf import settings
from sympy import Matrix, Poly, Rational, cyclotomic_poly, expand, rem, symbols

from app.exceptions import NotFiniteOrder, ParentMismatch, ShapeMismatch
from app.models import IsoStatus
from app.services.actions import act, normalize
from app.services.cyclo import CycNum, cyc_root, nth_root
from app.services.exact_matrix import ExactMatrix, matrix_units, nullspace

logger = logging.getLogger(__name__)

_ZERO = CycNum.zero()
_ONE = CycNum.one()


@dataclass
class IsoWitness:
    c: ExactMatrix
    lambdas: dict
    mus: dict

    def to_dict(self):
        return {
            'C': self.c.to_dict(),
            'lambda': {k: v.to_dict() for k, v in sorted(self.lambdas.items())},
            'mu': {k: v.to_dict() for k, v in sorted(self.mus.items())},
        }


@dataclass
class IsoVerdict:
    status: str
    witness: IsoWitness = None
    obstruction: str = ''
    examined: int = 0

    @property
    def isomorphic(self):
        return self.status == IsoStatus.ISOMORPHIC

    def to_dict(self):
        return {
            'status': str(self.status),
            'isomorphic': self.isomorphic,
            'witness': self.witness.to_dict() if self.witness else None,
            'obstruction': self.obstruction,
            'examined': self.examined,
        }


def _check_comparable(first, second):
    if first.m != second.m:
        raise ShapeMismatch(f'Actions on M_{first.m} and M_{second.m} cannot be compared')
    if first.pres.datum != second.pres.datum:
        raise ParentMismatch('Actions of different presentations cannot be compared')


def _lambda_candidates(u, v, order, m):
    """
    Scalars λ with u ~ λ·v as matrices. None when the M-th root needed is
    not cyclotomic.
    """
    theta_u = (u ** order).as_scalar()
    theta_v = (v ** order).as_scalar()
    if theta_u is None or theta_v is None:
        raise NotFiniteOrder(f'Group matrices must have scalar {order}-th powers')
    root = nth_root(theta_u / theta_v, order)
    if root is None:
        return None
    det_u, det_v = u.det(), v.det()
    traces_u, traces_v = [], []
    pu, pv = u, v
    for _ in range(m):
        traces_u.append(pu.trace())
        traces_v.append(pv.trace())
        pu, pv = pu @ u, pv @ v
    out = []
    for j in range(order):
        lam = root * cyc_root(order, j)
        if det_u != lam ** m * det_v:
            continue
        if all(tu == lam ** (k + 1) * tv for k, (tu, tv) in enumerate(zip(traces_u, traces_v))):
            out.append(lam)
    return out


def intertwiner_equations(pairs, m):
    """
    Linear equations on the entries of C for P·C = λ·C·Q, one triple
    (P, Q, λ) per constraint. C[p][s] is unknown number p·m + s.
    """
    equations = []
    for left, right, lam in pairs:
        for r, s in product(range(m), repeat=2):
            eq = {}
            for p in range(m):
                value = left.entries[r][p]
                if value:
                    key = p * m + s
                    eq[key] = eq.get(key, _ZERO) + value
            for q in range(m):
                value = right.entries[q][s]
                if value:
                    key = r * m + q
                    eq[key] = eq.get(key, _ZERO) - lam * value
            eq = {k: v for k, v in eq.items() if v}
            if eq:
                equations.append(eq)
    return equations


def intertwiner_space(first, second, lambdas):
    """Basis of {C : u(g)C = λ(g)C v(g), u(x_i)C = C v(x_i)}"""
    m = first.m
    pairs = [(u, v, lam) for u, v, lam in zip(first.ug, second.ug, lambdas)]
    pairs += [(u, v, _ONE) for u, v in zip(first.ux, second.ux)]
    return [ExactMatrix.from_vector(vec, m) for vec in nullspace(intertwiner_equations(pairs, m), m * m)]


def _find_invertible(basis, rng, trials):
    for matrix in basis:
        if matrix.is_invertible():
            return matrix
    for _ in range(trials):
        combo = ExactMatrix.zeros(basis[0].rows)
        for matrix in basis:
            coefficient = rng.randint(-3, 3)
            if coefficient:
                combo = combo + matrix * coefficient
        if combo.is_invertible():
            return combo
    return None


def _sympy_value(value, z, conductor):
    coeffs = value.in_field(conductor).coeffs
    return sum(Rational(c.numerator, c.denominator) * z ** k for k, c in enumerate(coeffs) if c)


def determinant_search(basis):
    """
    Decide whether span(basis) holds an invertible matrix through the
    determinant of a generic combination, reduced modulo Φ_N.

    Returns:
        (IsoStatus, C or None): ISOMORPHIC with an invertible C, NOT_ISOMORPHIC
        when the determinant polynomial vanishes, UNDECIDED above the size limit
    """
    limit = getattr(settings, 'HOPF_DETERMINANT_MAX_VARIABLES', 6)
    k = len(basis)
    if k > limit:
        return IsoStatus.UNDECIDED, None
    m = basis[0].rows
    conductor = 1
    for matrix in basis:
        for row in matrix.entries:
            for value in row:
                conductor = conductor * value.conductor // gcd(conductor, value.conductor)
    z = symbols('z')
    ts = symbols(f't0:{k}')
    entries = [
        [sum(t * _sympy_value(matrix.entries[r][s], z, conductor) for t, matrix in zip(ts, basis))
         for s in range(m)]
        for r in range(m)
    ]
    det = expand(Matrix(entries).det(method='berkowitz'))
    phi = cyclotomic_poly(conductor, z)
    grouped = {}
    if det != 0:
        for monomial, coefficient in Poly(det, *ts, z).terms():
            key = monomial[:-1]
            grouped[key] = grouped.get(key, 0) + coefficient * z ** monomial[-1]
    terms = []
    for monomial, coefficient in sorted(grouped.items()):
        reduced = rem(coefficient, phi, z)
        if reduced != 0:
            terms.append((monomial, reduced))
    if not terms:
        return IsoStatus.NOT_ISOMORPHIC, None
    # a nonzero polynomial of degree ≤ m misses some point of {0..m}^k
    for point in product(range(m + 1), repeat=k):
        value = 0
        for monomial, coefficient in terms:
            weight = 1
            for base, e in zip(point, monomial):
                weight *= base ** e
            value += coefficient * weight
        if rem(expand(value), phi, z) != 0:
            combo = ExactMatrix.zeros(m)
            for coefficient, matrix in zip(point, basis):
                if coefficient:
                    combo = combo + matrix * coefficient
            return IsoStatus.ISOMORPHIC, combo
    return IsoStatus.UNDECIDED, None


def _element_scalar(lambdas, g):
    out = _ONE
    for lam, e in zip(lambdas, g.exps):
        if e:
            out = out * lam ** e
    return out


def _witness(first, second, a, b, c, lambdas):
    pres = first.pres
    mus = {}
    for i, skew in enumerate(pres.skews):
        lam_a = _element_scalar(lambdas, pres.datum.a[i])
        mus[skew.datum_name or skew.name] = b.extracted.shifts[i] / lam_a - a.extracted.shifts[i]
    return IsoWitness(
        c=c,
        lambdas=dict(zip(pres.group_names, lambdas)),
        mus=mus,
    )


def iso_test(first, second, seed=None):
    """
    Decide whether two actions are isomorphic.

    Raises:
        ShapeMismatch, ParentMismatch: when the actions are not comparable
    """
    _check_comparable(first, second)
    a, b = normalize(first), normalize(second)
    m = a.m
    if seed is None:
        seed = getattr(settings, 'HOPF_DEFAULT_SEED', 20240601)
    rng = random.Random(seed)
    trials = getattr(settings, 'HOPF_RANDOM_TRIALS', 8)
    end_dim = len(intertwiner_space(a, a, [_ONE] * len(a.ug)))
    candidates = []
    for l, (u, v, order) in enumerate(zip(a.ug, b.ug, a.pres.group.factors)):
        found = _lambda_candidates(u, v, order, m)
        name = a.pres.group_names[l]
        if found is None:
            logger.warning(f'No cyclotomic root for the scale of {name}; pair undecided')
            return IsoVerdict(IsoStatus.UNDECIDED, obstruction=f'scale of {name} is not cyclotomic')
        if not found:
            return IsoVerdict(
                IsoStatus.NOT_ISOMORPHIC,
                obstruction=f'no scalar multiple of v({name}) is similar to u({name})',
            )
        candidates.append(found)
    undecided = 0
    examined = 0
    for lambdas in product(*candidates):
        examined += 1
        basis = intertwiner_space(a, b, lambdas)
        if len(basis) != end_dim:
            continue
        c = _find_invertible(basis, rng, trials)
        if c is None:
            status, c = determinant_search(basis)
            if status == IsoStatus.UNDECIDED:
                undecided += 1
                continue
            if c is None:
                continue
        witness = _witness(first, second, a, b, c, lambdas)
        verdict = IsoVerdict(IsoStatus.ISOMORPHIC, witness=witness, examined=examined)
        if not replay_witness(first, second, verdict):
            logger.warning('Witness failed to replay; continuing the search')
            continue
        return verdict
    if undecided:
        logger.warning(f'{undecided} intertwiner spaces exceeded the determinant limit')
        return IsoVerdict(
            IsoStatus.UNDECIDED, examined=examined,
            obstruction=f'{undecided} intertwiner spaces too large for the determinant test',
        )
    return IsoVerdict(
        IsoStatus.NOT_ISOMORPHIC, examined=examined,
        obstruction=f'no invertible intertwiner for any of {examined} scalar choices',
    )


def replay_witness(first, second, verdict):
    """Re-check the witness equations and the intertwining of every generator on all matrix units"""
    if not verdict.isomorphic:
        return False
    witness = verdict.witness
    pres = first.pres
    c = witness.c
    c_inv = c.inverse()
    for name, u, v in zip(pres.group_names, first.ug, second.ug):
        if u != c @ v @ c_inv * witness.lambdas[name]:
            return False
    for i, skew in enumerate(pres.skews):
        mu = witness.mus[skew.datum_name or skew.name]
        if first.ux[i] != c @ second.ux[i] @ c_inv + first.u_a(i) * mu:
            return False
    names = list(pres.group_names) + [skew.name for skew in pres.skews]
    for name in names:
        for unit in matrix_units(first.m):
            if act(first, name, c @ unit @ c_inv) != c @ act(second, name, unit) @ c_inv:
                return False
    return True
