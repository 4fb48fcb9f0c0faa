"""
Group gradings of M_m.

Degrees are characters of the acting group G. Every Grading keeps the
matrices u(g_l) realizing it, so the kind and its parameters can be read
back from the projective representation:

    elementary   u(g) = diag(γ_1(g), ..., γ_m(g))
    division     u(g) = X_{f(g)}, X_τ built from clock and shift matrices
    mixed        u(g) = diag(σ_i(g) I_{d_i}) ⊗ X_{f(g)}
"""
from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from math import isqrt
import logging

from app.exceptions import (
    BadBicharacter, BadSupportShape, DegenerateBicharacter, MalformedGrading,
    NotCommutingAction, NotFiniteOrder, ShapeMismatch, SingularMatrix,
)
from app.models import GradingKind
from app.services.cyclo import CycNum, cyc_root, nth_root, order_of
from app.services.exact_matrix import (
    ExactMatrix, clock_shift, commutator_scalar, in_span, rref, span_basis,
)
from app.services.groups import (
    AbGroup, Bicharacter, Character, beta_props, char_eval, closure, subgroup_basis,
)

logger = logging.getLogger(__name__)


@dataclass
class Grading:
    m: int
    group: AbGroup
    components: dict
    operators: tuple = ()
    kind: str = None
    kappa: dict = None
    support_beta: Bicharacter = None
    division_basis: dict = field(default_factory=dict)

    def support(self):
        return tuple(chi for chi, basis in self.components.items() if basis)

    def component(self, chi):
        return self.components.get(chi, ())

    def dimension(self, chi):
        return len(self.component(chi))

    def total_dimension(self):
        return sum(len(basis) for basis in self.components.values())

    def to_dict(self):
        data = {
            'kind': self.kind,
            'group': self.group.to_dict(),
            'm': self.m,
            'components': [
                {'char': chi.to_dict(), 'basis': [b.to_dict() for b in basis]}
                for chi, basis in sorted(self.components.items(), key=lambda kv: kv[0].exps)
            ],
        }
        if self.kappa is not None:
            data['kappa'] = [
                {'char': chi.to_dict(), 'multiplicity': k}
                for chi, k in sorted(self.kappa.items(), key=lambda kv: kv[0].exps)
            ]
        return data


def _sorted_components(components):
    return dict(sorted(components.items(), key=lambda kv: kv[0].exps))


# Elementary gradings

def elementary_grading(chars):
    """
    Grading of M_m with deg E_ij = γ_i γ_j^{-1}.

    Args:
        chars: the characters γ_1, ..., γ_m of the basis vectors of V
    """
    if not chars:
        raise ShapeMismatch('An elementary grading needs at least one character')
    group = chars[0].parent
    m = len(chars)
    components = {}
    for i, j in product(range(m), repeat=2):
        degree = chars[i] * chars[j].inverse()
        components.setdefault(degree, []).append(ExactMatrix.unit(m, i, j))
    operators = tuple(
        ExactMatrix.diag([gamma(g) for gamma in chars]) for g in group.generators()
    )
    return Grading(
        m=m,
        group=group,
        components=_sorted_components({k: tuple(v) for k, v in components.items()}),
        operators=operators,
        kind=GradingKind.ELEMENTARY,
        kappa=dict(Counter(chars)),
    )


def elementary_iso(kappa1, kappa2):
    """
    Decide whether κ2 = γ∗κ1 for some character γ, (γ∗κ)(γ') = κ(γγ').

    Returns:
        (bool, witnessing γ or None)
    """
    keys = [chi for chi, k in list(kappa1.items()) + list(kappa2.items()) if k]
    if not keys:
        return True, None
    group = keys[0].parent
    for gamma in group.characters():
        if all(
            kappa1.get(gamma * chi, 0) == kappa2.get(chi, 0) for chi in group.characters()
        ):
            return True, gamma
    return False, None


# Division gradings

def symplectic_basis(beta):
    """
    Pairs (μ_j, ν_j) with β(ν_j, μ_j) a primitive ℓ_j-th root and distinct
    pairs orthogonal. The support's own generators are used when they already
    pair up that way.

    Raises:
        BadSupportShape: when the support is not Z_{ℓ1}² x ... x Z_{ℓr}²
    """
    support = beta.support
    gens = [g for g in support.generators() if not g.is_identity()]
    if len(gens) % 2 == 0:
        pairs = [(gens[2 * j], gens[2 * j + 1]) for j in range(len(gens) // 2)]
        if _is_symplectic(beta, pairs):
            return pairs
    remaining = [g for g in support.elements() if not g.is_identity()]
    pairs = []
    while remaining:
        mu = sorted(remaining, key=lambda g: (-g.order(), g.exps))[0]
        order = mu.order()
        nu = next(
            (g for g in sorted(remaining, key=lambda g: g.exps)
             if order_of(beta(g, mu)) == order and g.order() == order),
            None,
        )
        if nu is None:
            raise BadSupportShape(f'No partner found for {mu.exps} in the support')
        pairs.append((mu, nu))
        remaining = [
            g for g in remaining
            if beta(g, mu) == 1 and beta(g, nu) == 1 and not g.is_identity()
        ]
    return pairs


def _is_symplectic(beta, pairs):
    for j, (mu, nu) in enumerate(pairs):
        if mu.order() != nu.order() or order_of(beta(nu, mu)) != mu.order():
            return False
        for mu2, nu2 in pairs[j + 1:]:
            if any(beta(a, b) != 1 for a in (mu, nu) for b in (mu2, nu2)):
                return False
    return True


def division_elements(beta):
    """
    X_τ for every τ in the support, keyed by exponent vector.

    X_{Π μ_j^{k_j} ν_j^{l_j}} = c·⊗_j C_j^{k_j} S_j^{l_j} with C_j the clock for
    ω_j = β(ν_j, μ_j); the scalar c makes X_τ^{o(τ)} = I.
    """
    support = beta.support
    if support.order() == 1:
        return {support.identity().exps: ExactMatrix.identity(1)}
    pairs = symplectic_basis(beta)
    factors = []
    for mu, nu in pairs:
        order = mu.order()
        clock, shift = clock_shift(order, beta(nu, mu))
        factors.append((mu, nu, order, clock, shift))
    n = 1
    for *_, order, _, _ in factors:
        n *= order
    if n * n != support.order():
        raise BadSupportShape(
            f'Support of order {support.order()} is not a square of {n}', order=support.order(),
        )
    out = {}
    for coords in product(*[range(f[2]) for f in factors for _ in (0, 1)]):
        tau = support.identity()
        matrix = ExactMatrix.identity(1)
        for j, (mu, nu, order, clock, shift) in enumerate(factors):
            k, l = coords[2 * j], coords[2 * j + 1]
            tau = tau * mu ** k * nu ** l
            matrix = matrix.kron(clock ** k @ shift ** l)
        o = tau.order()
        power = (matrix ** o).as_scalar()
        if power != 1:
            matrix = matrix * nth_root(power.inverse(), o)
        out[tau.exps] = matrix
    return out


def _beta_character(beta, tau):
    """The character g -> β(g, τ) of the support"""
    support = beta.support
    return Character.from_values(support, [beta(g, tau) for g in support.generators()])


def _check_division_beta(beta):
    shape = beta.support.invariant_factors()
    counts = Counter(d for d in shape if d > 1)
    if any(c % 2 for c in counts.values()):
        raise BadSupportShape(f'Support of shape {shape} is not of the form Z_l² x ...', shape=shape)
    props = beta_props(beta)
    if not props.alternating:
        raise BadBicharacter('β is not alternating')
    if not props.nondegenerate:
        raise DegenerateBicharacter(
            f'β has a kernel of order {len(props.kernel)}', kernel=[g.exps for g in props.kernel],
        )


def division_grading(support, beta):
    """
    The division grading of M_n by 𝔗 = ``support`` with commutation factor β.

    𝔗 acts on M_n by conjugation through X, so X_τ lies in the component of
    the character β(-, τ).

    Raises:
        BadSupportShape, DegenerateBicharacter
    """
    if beta.support != support:
        raise BadBicharacter('β is defined on a different group')
    _check_division_beta(beta)
    elements = division_elements(beta)
    n = next(iter(elements.values())).rows
    components = {}
    for exps, matrix in elements.items():
        components[_beta_character(beta, support.element(exps))] = (matrix,)
    operators = tuple(elements[g.exps] for g in support.generators())
    return Grading(
        m=n,
        group=support,
        components=_sorted_components(components),
        operators=operators,
        kind=GradingKind.DIVISION,
        support_beta=beta,
        division_basis=elements,
    )


def mixed_grading(chars, beta, f):
    """
    M_d ⊗ D with u(g) = diag(γ_1(g), ..., γ_d(g)) ⊗ X_{f(g)}.

    Args:
        chars: characters γ_i of the acting group G for the M_d factor
        beta: alternating nondegenerate bicharacter on 𝔗
        f: GroupHom from G to 𝔗
    """
    _check_division_beta(beta)
    elements = division_elements(beta)
    group = f.source
    d = len(chars)
    n = next(iter(elements.values())).rows
    operators = tuple(
        ExactMatrix.diag([gamma(g) for gamma in chars]).kron(elements[f(g).exps])
        for g in group.generators()
    )
    components = {}
    for (i, j), (exps, x) in product(product(range(d), repeat=2), elements.items()):
        tau = beta.support.element(exps)
        # conjugating by u(g) scales E_ij ⊗ X_τ by γ_i(g)γ_j(g)^{-1}β(f(g), τ)
        values = [
            chars[i](g) * chars[j](g).inverse() * beta(f(g), tau) for g in group.generators()
        ]
        degree = Character.from_values(group, values)
        components.setdefault(degree, []).append(ExactMatrix.unit(d, i, j).kron(x))
    return Grading(
        m=d * n,
        group=group,
        components=_sorted_components({k: tuple(v) for k, v in components.items()}),
        operators=operators,
        kind=GradingKind.MIXED,
        support_beta=beta,
    )


# Gradings induced by an action of G

def group_element_matrix(operators, g):
    """Ordered product Π u(g_l)^{e_l}"""
    out = ExactMatrix.identity(operators[0].rows)
    for u, e in zip(operators, g.exps):
        if e:
            out = out @ u ** e
    return out


def validate_operators(group, operators):
    """
    Check the projective-representation preconditions.

    Returns:
        (θ per generator, commutator scalar table)
    """
    if len(operators) != group.rank:
        raise ShapeMismatch(f'Expected {group.rank} matrices, got {len(operators)}')
    if not operators:
        return (), {}
    m = operators[0].rows
    thetas = []
    for index, (u, order) in enumerate(zip(operators, group.factors)):
        if u.shape != (m, m):
            raise ShapeMismatch(f'u(g{index}) has shape {u.shape}, expected {(m, m)}')
        if not u.is_invertible():
            raise SingularMatrix(f'u(g{index}) is singular', generator=index)
        theta = (u ** order).as_scalar()
        if theta is None:
            raise NotFiniteOrder(
                f'u(g{index})^{order} is not a scalar matrix', generator=index,
            )
        thetas.append(theta)
    commutators = {}
    for a, b in product(range(len(operators)), repeat=2):
        c = commutator_scalar(operators[a], operators[b])
        if c is None:
            raise NotCommutingAction(
                f'Conjugations by u(g{a}) and u(g{b}) do not commute', pair=(a, b),
            )
        commutators[(a, b)] = c
    return tuple(thetas), commutators


def grading_from_action(group, operators):
    """
    Simultaneous eigenspace decomposition of the conjugations by u(g_l).

    Args:
        group: G
        operators: u(g_l) for each generator, in order

    Raises:
        NotCommutingAction, NotFiniteOrder, SingularMatrix
    """
    operators = tuple(operators)
    validate_operators(group, operators)
    m = operators[0].rows if operators else 1
    size = m * m
    units = [ExactMatrix.unit(m, i, j).flatten() for i, j in product(range(m), repeat=2)]
    state = [((), units)]
    for u, order in zip(operators, group.factors):
        u_inv = u.inverse()
        refined = []
        for exps, basis in state:
            orbits = []
            for vector in basis:
                current = ExactMatrix.from_vector(vector, m)
                orbit = []
                for _ in range(order):
                    orbit.append(current.flatten())
                    current = u @ current @ u_inv
                orbits.append(orbit)
            for e in range(order):
                weights = [cyc_root(order, -e * t) for t in range(order)]
                projected = []
                for orbit in orbits:
                    acc = [CycNum.zero()] * size
                    for w, vec in zip(weights, orbit):
                        acc = [a + w * v if v else a for a, v in zip(acc, vec)]
                    if any(acc):
                        projected.append(acc)
                rows = span_basis(projected, size) if projected else []
                if rows:
                    refined.append((exps + (e,), rows))
        state = refined
    components = {
        Character(group, exps): tuple(ExactMatrix.from_vector(v, m) for v in basis)
        for exps, basis in state
    }
    grading = Grading(m=m, group=group, components=_sorted_components(components), operators=operators)
    logger.info(f'Grading of M_{m} by dual of {group.factors}: support size {len(components)}')
    return grading


# Classification

@dataclass
class KindReport:
    kind: str
    kappa: dict = None
    support: tuple = ()
    beta: Bicharacter = None
    radical: tuple = ()
    multiplicities: dict = None

    def to_dict(self):
        data = {'kind': self.kind}
        if self.kappa is not None:
            data['kappa'] = [
                {'char': chi.to_dict(), 'multiplicity': k}
                for chi, k in sorted(self.kappa.items(), key=lambda kv: kv[0].exps)
            ]
        if self.support:
            data['support'] = [chi.to_dict() for chi in self.support]
            data['beta'] = self.beta.to_dict()
        if self.multiplicities is not None:
            data['radical'] = [g.to_dict() for g in self.radical]
            data['multiplicities'] = [
                {'coset': list(k), 'd': v} for k, v in sorted(self.multiplicities.items())
            ]
        return data


def _check_components(grading):
    m = grading.m
    if grading.total_dimension() != m * m:
        raise MalformedGrading(
            f'Components have total dimension {grading.total_dimension()}, expected {m * m}',
        )
    vectors = [b.flatten() for basis in grading.components.values() for b in basis]
    _, pivots = rref(vectors, m * m)
    if len(pivots) != m * m:
        raise MalformedGrading('Homogeneous components are not independent')


def _eigen_multiplicities(operators, group, elements, m):
    """
    dim of the simultaneous eigenspaces on V of the commuting u(r), r in ``elements``.

    Each u(r) is rescaled by a cyclotomic root of its scalar power first, so
    the labels are defined up to a shift.
    """
    spaces = [((), [ExactMatrix.identity(m).entries[i] for i in range(m)])]
    for r in elements:
        order = r.order()
        u = group_element_matrix(operators, r)
        theta = (u ** order).as_scalar()
        rho = nth_root(theta, order) if theta is not None else None
        if rho is None:
            raise NotFiniteOrder(f'No cyclotomic {order}-th root of u({r.exps})^{order}')
        u = u * rho.inverse()
        refined = []
        for label, basis in spaces:
            orbits = []
            for vector in basis:
                column = ExactMatrix([[v] for v in vector])
                orbit = []
                for _ in range(order):
                    orbit.append([row[0] for row in column.entries])
                    column = u @ column
                orbits.append(orbit)
            for e in range(order):
                weights = [cyc_root(order, -e * t) for t in range(order)]
                projected = []
                for orbit in orbits:
                    acc = [CycNum.zero()] * m
                    for w, vec in zip(weights, orbit):
                        acc = [a + w * v if v else a for a, v in zip(acc, vec)]
                    if any(acc):
                        projected.append(acc)
                rows = span_basis(projected, m) if projected else []
                if rows:
                    refined.append((label + (e,), rows))
        spaces = refined
    return {label: len(basis) for label, basis in spaces}


def classify_kind(grading):
    """
    Kind of a grading with the data classifying it.

    elementary: κ on characters of G.
    division: the support 𝔗 and β with β(f(g), f(h)) = u(g)u(h)u(g)^{-1}u(h)^{-1}.
    mixed: (𝔗, β) plus the multiplicity d of each coset, labelled by
    characters of the radical {g : f(g) = ε}.

    Raises:
        MalformedGrading
    """
    if not grading.operators and grading.group.rank:
        raise MalformedGrading('Grading carries no realizing operators')
    _check_components(grading)
    group = grading.group
    operators = grading.operators
    m = grading.m
    _, commutators = validate_operators(group, operators)
    k = group.rank
    # f(h)(g) = commutator scalar of (g, h)
    f_images = [
        Character.from_values(group, [commutators[(a, b)] for a in range(k)]) for b in range(k)
    ]
    factors = group.factors
    support_set = closure(factors, [chi.exps for chi in f_images])

    if len(support_set) == 1:
        kappa = _eigen_multiplicities(operators, group, group.generators(), m)
        return KindReport(
            kind=GradingKind.ELEMENTARY,
            kappa={Character(group, label): d for label, d in kappa.items()},
        )

    nontrivial = [chi.exps for chi in f_images if not chi.is_trivial()]
    if _is_direct(factors, nontrivial):
        basis_exps = tuple(nontrivial)
    else:
        basis_exps = subgroup_basis(factors, nontrivial)
    basis = [Character(group, exps) for exps in basis_exps]
    support_group = AbGroup(tuple(chi.order() for chi in basis))
    # preimages w_s with f(w_s) = τ_s
    preimages = []
    for tau in basis:
        w = next(
            g for g in group.elements()
            if _f_apply(f_images, g) == tau
        )
        preimages.append(w)
    values = [[char_eval(basis[t], preimages[s]) for t in range(len(basis))] for s in range(len(basis))]
    beta = Bicharacter.from_values(support_group, values)

    ell = isqrt(len(support_set))
    if ell * ell != len(support_set):
        raise MalformedGrading(f'Support of order {len(support_set)} is not a square')
    radical = tuple(g for g in group.elements() if _f_apply(f_images, g).is_trivial())
    radical_basis = [
        group.element(exps)
        for exps in subgroup_basis(factors, [g.exps for g in radical])
    ]
    dims = _eigen_multiplicities(operators, group, radical_basis, m)
    multiplicities = {}
    for label, dim in dims.items():
        if dim % ell:
            raise MalformedGrading(f'Eigenspace of dimension {dim} is not a multiple of {ell}')
        multiplicities[label] = dim // ell

    is_division = ell == m and all(len(b) <= 1 for b in grading.components.values())
    if is_division:
        for basis_ in grading.components.values():
            if basis_ and not basis_[0].is_invertible():
                raise MalformedGrading('Division component with a singular basis element')
    return KindReport(
        kind=GradingKind.DIVISION if is_division else GradingKind.MIXED,
        support=tuple(basis),
        beta=beta,
        radical=tuple(radical_basis),
        multiplicities=None if is_division else multiplicities,
    )


def _is_direct(factors, vectors):
    if not vectors:
        return False
    size = 1
    for v in vectors:
        size *= len(closure(factors, [v]))
    return size == len(closure(factors, vectors))


def _f_apply(f_images, g):
    out = Character(g.parent, (0,) * g.parent.rank)
    for chi, e in zip(f_images, g.exps):
        out = out * chi ** e
    return out


# Product rule and membership

def _echelon(basis, size):
    rows, pivots = rref([b.flatten() for b in basis], size)
    return rows, pivots


def degree_of(grading, matrix):
    """Character whose component contains ``matrix``, or None when inhomogeneous"""
    if matrix.is_zero():
        return None
    size = grading.m * grading.m
    for chi, basis in grading.components.items():
        if not basis:
            continue
        rows, pivots = _echelon(basis, size)
        if in_span(rows, pivots, matrix.flatten()):
            return chi
    return None


def check_product_rule(grading):
    """
    A_φ·A_ψ ⊆ A_{φψ} on all basis pairs.

    Returns:
        list of (φ, ψ) pairs that break the rule (empty when it holds)
    """
    size = grading.m * grading.m
    echelons = {chi: _echelon(basis, size) for chi, basis in grading.components.items() if basis}
    failures = []
    for (phi, a_basis), (psi, b_basis) in product(grading.components.items(), repeat=2):
        target = echelons.get(phi * psi)
        for a, b in product(a_basis, b_basis):
            prod_ = a @ b
            if prod_.is_zero():
                continue
            if target is None or not in_span(target[0], target[1], prod_.flatten()):
                failures.append((phi, psi))
                break
    return failures
