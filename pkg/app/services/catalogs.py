"""
Canonical forms of inner actions for the families with a known classification.

Every builder returns a CatalogEntry whose action is already normalized.
Builders never certify on their own; callers run certify_action.
"""
from dataclasses import dataclass, field
from fractions import Fraction
import logging

from app.exceptions import (
    BadOrder, ChiOutsideSupport, ConditionFailed, ConstraintViolated, NotDivisible,
    NotPrimitiveRoot, ParentMismatch, RecurrenceInconsistent, ShapeViolation, TrivialSkewPart,
)
from app.models import DT2Variant, Family
from app.services.actions import InnerActionMap
from app.services.cyclo import CycNum, cyc_root, order_of, root_exponent
from app.services.exact_matrix import ExactMatrix, clock_shift
from app.services.gradedmat import division_elements
from app.services.groups import AbGroup, Bicharacter, Character, solve_f
from app.services.hopf import dd_taft, p3_example, taft, uq_sl2

logger = logging.getLogger(__name__)


@dataclass
class CatalogEntry:
    family: str
    label: str
    action: InnerActionMap
    provenance: str
    params: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)

    def to_dict(self):
        return {
            'family': self.family,
            'label': self.label,
            'params': {k: _param_json(v) for k, v in sorted(self.params.items())},
            'provenance': self.provenance,
            'flags': list(self.flags),
            'action': self.action.to_dict(),
        }


def _param_json(value):
    if isinstance(value, CycNum):
        return value.to_dict()
    if isinstance(value, ExactMatrix):
        return value.to_dict()
    return value


def _unit(m, i, j, value=1):
    """E_ij with one-based indices"""
    return ExactMatrix.unit(m, i - 1, j - 1, value)


def _default_root(n, omega):
    return cyc_root(n, 1) if omega is None else CycNum.coerce(omega)


# Taft algebras

def catalog_taft_m3(n, omega=None, gammas=()):
    """
    Actions of T_n(ω) on M_3 up to the listed normal forms.

    Q(k) = diag(1, ω^k, ω^k), Q(p, q) = diag(1, ω^p, ω^q); the P matrices
    have degree 1 for the Q they are paired with.
    """
    if n < 3:
        raise BadOrder(f'Actions on M_3 are listed for n ≥ 3, got {n}', n=n)
    omega = _default_root(n, omega)
    pres = taft(n, omega)

    def q_single(k):
        return ExactMatrix.diag([1, omega ** k, omega ** k])

    def q_pair(p, q):
        return ExactMatrix.diag([1, omega ** p, omega ** q])

    listed = [
        ('P1', q_single(1), _unit(3, 3, 1)),
        ('P2', q_single(n - 1), _unit(3, 1, 3)),
        ('P3_1', q_pair(1, n - 1), _unit(3, 2, 1)),
        ('P3_2', q_pair(1, 2), _unit(3, 3, 2)),
        ('P3_3', q_pair(1, n - 1), _unit(3, 1, 3)),
        ('P3_4', q_pair(1, 2), _unit(3, 2, 1) + _unit(3, 3, 2)),
        ('P3_5', q_pair(n - 2, n - 1), _unit(3, 3, 2) + _unit(3, 1, 3)),
        ('P3_6', q_pair(1, n - 1), _unit(3, 1, 3) + _unit(3, 2, 1)),
    ]
    entries = [
        CatalogEntry(
            family='taft_m3', label=label,
            action=InnerActionMap(pres=pres, m=3, ug=(q,), ux=(p,)),
            provenance='T_n(ω) on M_3, sporadic normal forms',
            params={'n': n, 'omega': omega},
        )
        for label, q, p in listed
    ]
    if gammas and n != 3:
        raise BadOrder('P(3)_γ only exists for n = 3', n=n)
    for index, gamma in enumerate(gammas):
        gamma = CycNum.coerce(gamma)
        if not gamma:
            raise ConditionFailed('γ must be nonzero')
        p = _unit(3, 2, 1) + _unit(3, 3, 2) + _unit(3, 1, 3, gamma)
        entries.append(CatalogEntry(
            family='taft_m3', label=f'P3_gamma_{index}',
            action=InnerActionMap(pres=pres, m=3, ug=(q_pair(1, 2),), ux=(p,)),
            provenance='T_3(ω) on M_3, P(3)_γ with P³ = γI',
            params={'n': n, 'omega': omega, 'gamma': gamma},
        ))
    return entries


def taft_block_form(n, d, omega, alpha):
    """u(g) = diag(I_d, ωI_d, ...), u(x) with I_d below the diagonal and αI_d in the corner"""
    m = n * d
    ug = ExactMatrix.diag([omega ** (i // d) for i in range(m)])
    rows = [[CycNum.zero()] * m for _ in range(m)]
    for block in range(1, n):
        for i in range(d):
            rows[block * d + i][(block - 1) * d + i] = CycNum.one()
    for i in range(d):
        rows[i][(n - 1) * d + i] = alpha
    return ug, ExactMatrix(rows)


def catalog_taft_nonsingular(n, m, alpha, omega=None):
    """The action of T_n(ω) on M_m with u(x) nonsingular and u(x)^n = αI"""
    if m % n:
        raise NotDivisible(f'{n} does not divide {m}', n=n, m=m)
    alpha = CycNum.coerce(alpha)
    if not alpha:
        raise ConditionFailed('α must be nonzero for a nonsingular u(x)')
    omega = _default_root(n, omega)
    ug, ux = taft_block_form(n, m // n, omega, alpha)
    return CatalogEntry(
        family='taft_nonsingular', label=f'alpha={alpha}',
        action=InnerActionMap(pres=taft(n, omega), m=m, ug=(ug,), ux=(ux,)),
        provenance='T_n(ω) on M_m with nonsingular u(x)',
        params={'n': n, 'm': m, 'alpha': alpha, 'omega': omega},
    )


# Division gradings

def _support_element(support, tau_chars, chi):
    """σ in the support with Π τ_t^{σ_t} = χ, or None"""
    for sigma in support.elements():
        image = chi.parent.trivial_character()
        for tau, e in zip(tau_chars, sigma.exps):
            image = image * tau ** e
        if image == chi:
            return sigma
    return None


def catalog_rank1_division(pres, beta, tau_chars, alpha, strict=False):
    """
    Rank-one presentation acting through a division grading.

    The support 𝔗 is an abstract group carrying β; ``tau_chars`` embeds it in
    the character group of G. Then u(g) = X_{f(g)} with β(f(g), τ) = τ(g) and
    u(x) = α·X_χ.

    Raises:
        ChiOutsideSupport: only when ``strict``; otherwise the zero-x entry is returned
        ConditionFailed: when the power relation cannot hold for this α
    """
    datum = pres.datum
    if datum.rank != 1:
        raise ParentMismatch('Rank-one presentations only')
    alpha = CycNum.coerce(alpha)
    group = pres.group
    f = solve_f(beta, tuple(tau_chars), group)
    elements = division_elements(beta)
    ug = tuple(elements[f(g).exps] for g in group.generators())
    size = ug[0].rows
    chi = datum.chi[0]
    sigma = _support_element(beta.support, tau_chars, chi)
    flags = []
    if sigma is None:
        if strict:
            raise ChiOutsideSupport(f'χ = {chi.exps} is not in the support')
        logger.warning(f'χ = {chi.exps} lies outside the support; x acts by zero')
        ux = ExactMatrix.zeros(size)
        flags.append('skew_vanishes')
    else:
        ux = elements[sigma.exps] * alpha
        if not alpha:
            flags.append('skew_vanishes')
    if sigma is not None and alpha:
        big_n = datum.N(0)
        f_a = f(datum.a[0])
        if datum.mu[0] == 0 and sigma ** big_n != f_a ** big_n:
            raise ConditionFailed('μ = 0 needs χ^N = f(a)^N', n=big_n)
        if datum.mu[0] == 1 and not (f_a ** big_n).is_identity():
            if ux ** big_n != ExactMatrix.identity(size):
                raise ConditionFailed('μ = 1 with f(a)^N ≠ ε needs (α X_χ)^N = I', n=big_n)
    return CatalogEntry(
        family='rank1_division', label=f'alpha={alpha}',
        action=InnerActionMap(pres=pres, m=size, ug=ug, ux=(ux,)),
        provenance='rank-one Hopf algebra acting through a division grading, u(x) = αX_χ',
        params={'alpha': alpha, 'support': list(beta.support.factors)},
        flags=flags,
    )


def catalog_pp3(p, ell, alpha, omega=None):
    """
    T_p(ω) ⊗ F Z_p on M_p: u(g) = X_ν^ℓ, u(h) = X_μ^{-ℓ}, u(x) = αX_μ
    with β(ν, μ) = τ and τ^ℓ = ω.
    """
    omega = _default_root(p, omega)
    pres = p3_example(p, omega)
    if not 0 < ell < p:
        raise ConditionFailed(f'ℓ must lie in 1..{p - 1}', ell=ell)
    tau = omega ** pow(ell, -1, p)
    e = root_exponent(tau, p)
    support = AbGroup((p, p))
    beta = Bicharacter(support, ((0, -e), (e, 0)))
    group = pres.group
    one = CycNum.one()
    tau_chars = (
        Character.from_values(group, [omega, one]),
        Character.from_values(group, [one, omega]),
    )
    entry = catalog_rank1_division(pres, beta, tau_chars, alpha, strict=True)
    entry.family = 'pp3'
    entry.label = f'ell={ell},alpha={entry.params["alpha"]}'
    entry.provenance = 'T_p(ω) ⊗ F Z_p on M_p through the division grading by Z_p²'
    entry.params.update({'p': p, 'ell': ell, 'omega': omega})
    return entry


# Drinfeld doubles

def catalog_dd_division(n, pi, gamma, delta, omega=None, enforce=True):
    """
    D(T_n(ω)) on M_n with u(g) = S^{-ℓ}, u(G) = C_π^ℓ, u(x) = γ C_π S,
    u(X) = δ S^{-1} C_π^{-1}, where π^ℓ = ω and γδ = 1/(1 - ω).

    Raises:
        ConstraintViolated: when γδ ≠ 1/(1 - ω) and ``enforce`` is set
    """
    omega = _default_root(n, omega)
    pi = CycNum.coerce(pi)
    if order_of(pi) != n:
        raise NotPrimitiveRoot(f'{pi} is not a primitive {n}-th root of unity', n=n)
    gamma, delta = CycNum.coerce(gamma), CycNum.coerce(delta)
    flags = []
    if gamma * delta != (1 - omega).inverse():
        if enforce:
            raise ConstraintViolated('γδ must equal 1/(1 - ω)', product=gamma * delta)
        flags.append('constraint_violated')
    ell = next(k for k in range(1, n) if pi ** k == omega)
    clock, shift = clock_shift(n, pi)
    ug = (shift ** -ell, clock ** ell)
    ux = ((clock @ shift) * gamma, (shift.inverse() @ clock.inverse()) * delta)
    return CatalogEntry(
        family='dd_division', label=f'pi={pi}',
        action=InnerActionMap(pres=dd_taft(n, omega), m=n, ug=ug, ux=ux),
        provenance='D(T_n) on M_n through the division grading by Z_n²',
        params={'n': n, 'pi': pi, 'gamma': gamma, 'delta': delta, 'omega': omega, 'ell': ell},
        flags=flags,
    )


_PAULI_A = ExactMatrix([[1, 0], [0, -1]])
_PAULI_B = ExactMatrix([[0, 1], [1, 0]])
_PAULI_C = ExactMatrix([[0, 1], [-1, 0]])


def _rect(rows, cols, fill=None):
    """rows x cols zero block, optionally with an identity in the top-left corner"""
    data = [[CycNum.zero()] * cols for _ in range(rows)]
    for i in range(min(rows, cols, fill or 0)):
        data[i][i] = CycNum.one()
    return data


def _assemble(rows, cols, pieces):
    """Matrix from (row offset, col offset, 2-D list) pieces; empty blocks are allowed"""
    data = [[CycNum.zero()] * cols for _ in range(rows)]
    for r0, c0, block in pieces:
        for i, row in enumerate(block):
            for j, value in enumerate(row):
                data[r0 + i][c0 + j] = CycNum.coerce(value)
    return ExactMatrix(data)


def catalog_dt2_mixed(variant, r=1, s=1, t=0, tau=0, xi=Fraction(1, 2), xi_block=None, beta=None):
    """
    D(T_2) on M_{2k} through a mixed grading: u(g) = I_k ⊗ A, u(G) = I_k ⊗ B,
    u(x) = P ⊗ C, u(X) = Q ⊗ C with PQ + QP = -I_k.

    Variants:
        nilpotent: P = [[0, I_r], [0, 0]], Q = [[0, τI_r], [-I_r, 0]]
        nonnilpotent: P = ξ diag(I_r, -I_s), Q = -(1/2ξ)[[I_r, Y], [Z, -I_s]]
        nonnilpotent_generic: r = s, Q = -(1/2ξ)[[I, I], [(4ξ²β - 1)^{-1} I, -I]]

    Raises:
        ShapeViolation: for inconsistent sizes
    """
    pres = dd_taft(2, -1)
    tau, xi = CycNum.coerce(tau), CycNum.coerce(xi)
    params = {'variant': str(variant), 'r': r}
    if r < 1:
        raise ShapeViolation('r must be positive', r=r)
    if variant == DT2Variant.NILPOTENT:
        k = 2 * r
        identity = _rect(r, r, r)
        p = _assemble(k, k, [(0, r, identity)])
        q = _assemble(k, k, [(0, r, [[v * tau for v in row] for row in identity]),
                             (r, 0, [[-v for v in row] for row in identity])])
        params['tau'] = tau
    else:
        if not xi:
            raise ShapeViolation('ξ must be nonzero')
        if variant == DT2Variant.NONNILPOTENT_GENERIC:
            s = r
            beta = CycNum.coerce(beta if beta is not None else 1)
            denominator = xi * xi * beta * 4 - 1
            if not denominator:
                raise ConditionFailed('4ξ²β = 1 belongs to the nonnilpotent variant')
            kappa = denominator.inverse()
            y_block = _rect(r, s, r)
            z_block = [[v * kappa for v in row] for row in _rect(s, r, r)]
            params.update({'xi': xi, 'beta': beta})
        else:
            if s < 1 or not 0 <= t <= min(r, s):
                raise ShapeViolation(f't must lie in 0..min(r, s), got {t}', r=r, s=s, t=t)
            xi_block = xi_block if xi_block is not None else [[0] * (r - t) for _ in range(s - t)]
            if len(xi_block) != s - t or any(len(row) != r - t for row in xi_block):
                raise ShapeViolation(f'Ξ must be {s - t}x{r - t}', r=r, s=s, t=t)
            y_block = _rect(r, s, t)
            z_block = _rect(s, r)
            for i, row in enumerate(xi_block):
                for j, value in enumerate(row):
                    z_block[t + i][t + j] = CycNum.coerce(value)
            params.update({'s': s, 't': t, 'xi': xi,
                           'Xi': [[str(CycNum.coerce(v)) for v in row] for row in xi_block]})
        k = r + s
        p = _assemble(k, k, [(0, 0, _rect(r, r, r)),
                             (r, r, [[-v for v in row] for row in _rect(s, s, s)])]) * xi
        q = _assemble(k, k, [(0, 0, _rect(r, r, r)), (0, r, y_block), (r, 0, z_block),
                             (r, r, [[-v for v in row] for row in _rect(s, s, s)])])
        q = q * (xi * 2).inverse() * -1
    if p @ q + q @ p != ExactMatrix.scalar(k, -1):
        raise ShapeViolation('PQ + QP must equal -I')
    identity = ExactMatrix.identity(k)
    ug = (identity.kron(_PAULI_A), identity.kron(_PAULI_B))
    ux = (p.kron(_PAULI_C), q.kron(_PAULI_C))
    return CatalogEntry(
        family='dt2_mixed', label=str(variant),
        action=InnerActionMap(pres=pres, m=2 * k, ug=ug, ux=ux),
        provenance='D(T_2) through a mixed grading with u(g), u(G) anticommuting',
        params=params,
    )


def dd_elementary_x(n, r, phi_g, phi_big_g, seed, lam, alpha, omega=None):
    """
    Elementary action of D(T_n(ω)) on M_{nr}.

    u(g) = φ(g)·diag(ω^{-k} I_r), u(G) = φ(G)·diag(ω^{-k} I_r), u(x) in the
    block form with corner α, and u(X) with blocks g_k at (k-1, k) mod n from

        g_{n-1} = ωα g_0 + ρ_{n-1} I,   g_k = ω g_{k+1} + ρ_k I,
        ρ_k = 1 - λ ω^{-2k} φ(g)φ(G).

    The cross relation then holds with λ_dd = -λ.

    Raises:
        RecurrenceInconsistent: when u(X)^n is not scalar
    """
    omega = _default_root(n, omega)
    alpha = CycNum.coerce(alpha)
    lam = CycNum.coerce(lam)
    phi_g, phi_big_g = CycNum.coerce(phi_g), CycNum.coerce(phi_big_g)
    if not alpha:
        raise ConditionFailed('α must be nonzero')
    if not isinstance(seed, ExactMatrix):
        seed = ExactMatrix.scalar(r, seed)
    if seed.shape != (r, r):
        raise ShapeViolation(f'The seed must be {r}x{r}', r=r)
    identity = ExactMatrix.identity(r)
    rho = [1 - lam * omega ** (-2 * k) * phi_g * phi_big_g for k in range(n)]
    blocks = [None] * n
    blocks[0] = seed
    if n > 1:
        blocks[n - 1] = seed * (omega * alpha) + identity * rho[n - 1]
        for k in range(n - 2, 0, -1):
            blocks[k] = blocks[k + 1] * omega + identity * rho[k]
    m = n * r
    scale = ExactMatrix.diag([omega ** -(i // r) for i in range(m)])
    ug = (scale * phi_g, scale * phi_big_g)
    _, ux = taft_block_form(n, r, omega, alpha)
    grid = [[ExactMatrix.zeros(r) for _ in range(n)] for _ in range(n)]
    for k in range(n):
        grid[(k - 1) % n][k] = blocks[k]
    u_big_x = ExactMatrix.block(grid)
    power = u_big_x ** n
    if power.as_scalar() is None:
        residual = power - ExactMatrix.scalar(m, power[0, 0])
        raise RecurrenceInconsistent('u(X)^n is not scalar for this seed', residual=residual)
    return CatalogEntry(
        family='dd_elementary', label=f'n={n},r={r}',
        action=InnerActionMap(pres=dd_taft(n, omega), m=m, ug=ug, ux=(ux, u_big_x)),
        provenance='elementary D(T_n) action from the block recurrence',
        params={'n': n, 'r': r, 'lambda': lam, 'alpha': alpha, 'phi_g': phi_g,
                'phi_G': phi_big_g, 'seed': seed, 'omega': omega},
    )


# u_q(sl2)

def uqsl2_m2(n, lam, k, p, omega=None, strict=False):
    """
    u_q(sl2) on M_2 with u(a) = λ diag(1, ω^k).

    For k = 2: u(x) = pE_21, u(y) = qE_12; for n - k = 2 the roles of E_12
    and E_21 swap. q is fixed by the cross relation.

    Raises:
        TrivialSkewPart: only when ``strict``; otherwise the group-only entry is returned
        ConditionFailed: when p = 0
    """
    omega = _default_root(n, omega)
    pres = uq_sl2(n, omega)
    lam = CycNum.coerce(lam)
    p = CycNum.coerce(p)
    if not 0 < k < n:
        raise ConditionFailed(f'k must lie in 1..{n - 1}', k=k)
    u_a = ExactMatrix.diag([lam, lam * omega ** k])
    w2, w_2 = omega ** 2, omega ** -2
    params = {'n': n, 'lambda': lam, 'k': k, 'omega': omega}
    if k not in (2, n - 2):
        if strict:
            raise TrivialSkewPart(f'k = {k}: x and y act by zero', k=k)
        logger.warning(f'k = {k} leaves only the group action')
        zero = ExactMatrix.zeros(2)
        return CatalogEntry(
            family='uqsl2_m2', label=f'k={k}',
            action=InnerActionMap.from_native(pres, {'a': u_a}, {'x': zero, 'y': zero}),
            provenance='u_q(sl2) on M_2, purely a group action',
            params=params, flags=['trivial_skew_part'],
        )
    if not p:
        raise ConditionFailed('p must be nonzero; pq is forced to be nonzero')
    if k == 2:
        pq = lam * (w2 - w_2) / (1 + w_2)
        tau = lam * lam * (1 + w2) / (1 + w_2)
        u_x, u_y = _unit(2, 2, 1, p), _unit(2, 1, 2, pq / p)
    else:
        pq = lam * (w2 - w_2) / (1 + w2)
        tau = lam * lam * (1 + w_2) / (1 + w2)
        u_x, u_y = _unit(2, 1, 2, p), _unit(2, 2, 1, pq / p)
    params.update({'p': p, 'q': pq / p, 'tau': tau})
    return CatalogEntry(
        family='uqsl2_m2', label=f'k={k}',
        action=InnerActionMap.from_native(pres, {'a': u_a}, {'x': u_x, 'y': u_y}),
        provenance='u_q(sl2) on M_2',
        params=params,
    )


def lift_uqsl2_to_dd(entry):
    """
    Pull a u_q(sl2) action back to D(T_n(ω^{-2})) along
    g ↦ a^{-1}, G ↦ a^{-1}, x ↦ y, X ↦ -x a^{-1}.
    """
    action = entry.action
    pres = action.pres
    if pres.family != Family.UQ_SL2:
        raise ParentMismatch('Only u_q(sl2) actions can be lifted')
    omega = pres.params['omega']
    n = pres.params['n']
    u_a_inv = action.ug[0].inverse()
    ug = (u_a_inv, u_a_inv)
    ux = (action.ux[1], action.ux[0] * -1)
    return CatalogEntry(
        family='dd_lift', label=f'lift of {entry.label}',
        action=InnerActionMap(pres=dd_taft(n, omega ** -2), m=action.m, ug=ug, ux=ux),
        provenance='D(T_n) action pulled back from u_q(sl2)',
        params={'n': n, 'omega': omega ** -2, 'source': entry.label},
    )
