"""Small presentations and actions shared by the test modules"""
from app.services.actions import InnerActionMap
from app.services.catalogs import catalog_rank1_division
from app.services.cyclo import CycNum, cyc_root
from app.services.exact_matrix import ExactMatrix
from app.services.groups import AbGroup, Bicharacter, Character
from app.services.hopf import Datum, make_presentation, taft

OMEGA3 = cyc_root(3, 1)


def rank_one(factors, a_exps, chi_exps, mu=0):
    """Custom rank-one presentation over the group Z_{m_1} x ... x Z_{m_k}"""
    group = AbGroup(factors)
    datum = Datum(
        group=group,
        a=(group.element(a_exps),),
        chi=(Character(group, chi_exps),),
        mu=(mu,),
        lam=((CycNum.zero(),),),
    )
    return make_presentation(datum)


def symplectic(p):
    support = AbGroup((p, p))
    return Bicharacter(support, ((0, 1), (-1, 0)))


def klein_fixture():
    """Z_2 x Z_2 acting on M_2 through the Pauli grading, χ = (-1, 1)"""
    pres = rank_one((2, 2), (1, 0), (1, 0))
    group = pres.group
    tau_chars = (Character(group, (1, 0)), Character(group, (0, 1)))
    return pres, symplectic(2), tau_chars


def z9_fixture():
    """Z_9 x Z_3 with μ = 1: a = g, χ(g) = ζ_3, χ(h) = 1"""
    pres = rank_one((9, 3), (1, 0), (3, 0), mu=1)
    group = pres.group
    tau_chars = (
        Character.from_values(group, [OMEGA3, 1]),
        Character.from_values(group, [1, OMEGA3]),
    )
    return pres, symplectic(3), tau_chars


def outside_support_fixture():
    """Z_3³ where χ = (1, 0, 0) is not generated by the support characters"""
    pres = rank_one((3, 3, 3), (1, 0, 0), (1, 0, 0))
    group = pres.group
    tau_chars = (Character(group, (0, 1, 0)), Character(group, (0, 0, 1)))
    return pres, symplectic(3), tau_chars


def degenerate_actions():
    """(name, action, must be predicted) for actions whose skew generator acts by zero"""
    clock3 = ExactMatrix.diag([1, OMEGA3, OMEGA3 ** 2])
    table = []
    for name, fixture, alpha, predicted in (
        ('outside_support', outside_support_fixture, 1, True),
        ('klein_zero_alpha', klein_fixture, 0, False),
        ('z9_zero_alpha', z9_fixture, 0, False),
    ):
        pres, beta, tau_chars = fixture()
        table.append((name, catalog_rank1_division(pres, beta, tau_chars, alpha).action, predicted))

    # u(h) = I while χ(h) = ω
    pres = rank_one((3, 3), (1, 0), (1, 1))
    ug = (clock3, ExactMatrix.identity(3))
    table.append(('z3z3_scalar_h', InnerActionMap(pres=pres, m=3, ug=ug, ux=(ExactMatrix.zeros(3),)), True))
    table.append(('z3z3_scalar_h_shifted', InnerActionMap(pres=pres, m=3, ug=ug, ux=(clock3 * 2,)), True))

    # u(h) = -I while χ(h) = -1
    pres = rank_one((2, 2), (1, 0), (1, 1))
    ug = (ExactMatrix.diag([1, -1]), ExactMatrix.scalar(2, -1))
    table.append(('z2z2_scalar_h', InnerActionMap(pres=pres, m=2, ug=ug, ux=(ExactMatrix.zeros(2),)), True))

    pres = rank_one((2,), (1,), (1,))
    ug = (ExactMatrix.scalar(2, -1),)
    table.append(('z2_scalar_g', InnerActionMap(pres=pres, m=2, ug=ug, ux=(ExactMatrix.zeros(2),)), True))

    # support {1, -1} has exponent 2 but χ(g) = i
    pres = rank_one((4,), (1,), (1,))
    ug = (ExactMatrix.diag([1, -1]),)
    table.append(('z4_exponent', InnerActionMap(pres=pres, m=2, ug=ug, ux=(ExactMatrix.zeros(2),)), True))

    pres = taft(3, OMEGA3)
    table.append(('taft_zero', InnerActionMap(pres=pres, m=3, ug=(clock3,), ux=(ExactMatrix.zeros(3),)), False))
    table.append(('taft_multiple_of_u_a', InnerActionMap(pres=pres, m=3, ug=(clock3,), ux=(clock3 * 5,)), False))
    return table
