from fractions import Fraction

from django.test import SimpleTestCase

from app.exceptions import (
    BadOrder, ChiOutsideSupport, ConditionFailed, ConstraintViolated, NotDivisible,
    NotPrimitiveRoot, ParentMismatch, RecurrenceInconsistent, ShapeViolation, TrivialSkewPart,
)
from app.models import DT2Variant, Family, GradingKind
from app.services.actions import certify_action
from app.services.catalogs import (
    catalog_dd_division, catalog_dt2_mixed, catalog_pp3, catalog_rank1_division, catalog_taft_m3,
    catalog_taft_nonsingular, dd_elementary_x, lift_uqsl2_to_dd, uqsl2_m2,
)
from app.services.cyclo import CycNum
from app.services.exact_matrix import ExactMatrix
from app.services.gradedmat import classify_kind, grading_from_action
from app.tests.fixtures import OMEGA3, klein_fixture, outside_support_fixture, z9_fixture


class CertifiedMixin:
    def assertCertified(self, entry):
        certificate = certify_action(entry.action)
        failure = certificate.first_failure()
        self.assertTrue(certificate.passed, f'{entry.family} {entry.label}: {failure and failure.name}')
        self.assertTrue(certificate.routes_agree)
        return certificate


class TaftM3Tests(CertifiedMixin, SimpleTestCase):
    def test_labels(self):
        labels = [e.label for e in catalog_taft_m3(5)]
        self.assertEqual(labels, ['P1', 'P2', 'P3_1', 'P3_2', 'P3_3', 'P3_4', 'P3_5', 'P3_6'])

    def test_every_normal_form_certifies(self):
        for n in (3, 4):
            for entry in catalog_taft_m3(n):
                self.assertCertified(entry)

    def test_gamma_family_for_n_three(self):
        omega = OMEGA3
        entries = catalog_taft_m3(3, gammas=(1, omega, omega ** 2))
        self.assertEqual(len(entries), 11)
        for entry, gamma in zip(entries[8:], (1, omega, omega ** 2)):
            self.assertEqual(entry.action.ux[0] ** 3, ExactMatrix.scalar(3, gamma))
            self.assertCertified(entry)

    def test_rejected_parameters(self):
        with self.assertRaises(BadOrder):
            catalog_taft_m3(2)
        with self.assertRaises(BadOrder):
            catalog_taft_m3(5, gammas=(1,))
        with self.assertRaises(ConditionFailed):
            catalog_taft_m3(3, gammas=(0,))


class TaftNonsingularTests(CertifiedMixin, SimpleTestCase):
    def test_grid(self):
        for n, m in ((2, 2), (2, 4), (2, 8), (3, 3), (4, 4), (4, 8)):
            omega_n = catalog_taft_nonsingular(n, m, 1).params['omega']
            for alpha in (1, omega_n):
                entry = catalog_taft_nonsingular(n, m, alpha)
                u_x = entry.action.ux[0]
                self.assertEqual(u_x ** n, ExactMatrix.scalar(m, alpha))
                self.assertCertified(entry)

    def test_larger_block(self):
        self.assertCertified(catalog_taft_nonsingular(2, 6, 3))

    def test_rejected_parameters(self):
        with self.assertRaises(NotDivisible):
            catalog_taft_nonsingular(3, 4, 1)
        with self.assertRaises(ConditionFailed):
            catalog_taft_nonsingular(3, 3, 0)


class RankOneDivisionTests(CertifiedMixin, SimpleTestCase):
    def test_pauli_grading(self):
        pres, beta, tau_chars = klein_fixture()
        for alpha in (1, -1, Fraction(1, 2)):
            entry = catalog_rank1_division(pres, beta, tau_chars, alpha)
            self.assertEqual(entry.action.m, 2)
            self.assertCertified(entry)

    def test_nontrivial_power_of_a(self):
        pres, beta, tau_chars = z9_fixture()
        for alpha in (1, -1, 2):
            entry = catalog_rank1_division(pres, beta, tau_chars, alpha)
            certificate = self.assertCertified(entry)
            self.assertEqual(certificate.extracted.sigma[0], CycNum.coerce(alpha) ** 3 - 1)

    def test_outside_the_support(self):
        pres, beta, tau_chars = outside_support_fixture()
        entry = catalog_rank1_division(pres, beta, tau_chars, 1)
        self.assertTrue(entry.action.ux[0].is_zero())
        with self.assertRaises(ChiOutsideSupport):
            catalog_rank1_division(pres, beta, tau_chars, 1, strict=True)

    def test_pp3_grid(self):
        for ell in (1, 2):
            for alpha in (0, 1, OMEGA3, 2):
                entry = catalog_pp3(3, ell, alpha)
                self.assertEqual(entry.family, 'pp3')
                self.assertEqual(entry.action.m, 3)
                self.assertCertified(entry)

    def test_pp3_group_matrices(self):
        entry = catalog_pp3(3, 1, 1)
        u_g, u_h = entry.action.ug
        u_x = entry.action.ux[0]
        self.assertEqual(u_g @ u_x @ u_g.inverse(), u_x * OMEGA3)
        self.assertEqual(u_h @ u_x, u_x @ u_h)
        self.assertEqual(u_x ** 3, ExactMatrix.identity(3))

    def test_pp3_rejects_ell(self):
        with self.assertRaises(ConditionFailed):
            catalog_pp3(3, 0, 1)
        with self.assertRaises(BadOrder):
            catalog_pp3(4, 1, 1)


class DDDivisionTests(CertifiedMixin, SimpleTestCase):
    def setUp(self):
        self.delta = (1 - OMEGA3).inverse()

    def test_golden_matrices(self):
        entry = catalog_dd_division(3, OMEGA3 ** 2, 1, self.delta)
        u_g, u_big_g = entry.action.ug
        u_x, u_big_x = entry.action.ux
        self.assertEqual(entry.params['ell'], 2)
        self.assertEqual(u_g, ExactMatrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]]))
        self.assertEqual(u_big_g, ExactMatrix.diag([1, OMEGA3, OMEGA3 ** 2]))
        self.assertEqual(u_x, ExactMatrix([[0, 1, 0], [0, 0, OMEGA3 ** 2], [OMEGA3, 0, 0]]))
        self.assertEqual(u_big_x, ExactMatrix([[0, 0, OMEGA3 ** 2], [1, 0, 0], [0, OMEGA3, 0]]) * self.delta)
        self.assertEqual(u_x @ u_big_x, ExactMatrix.scalar(3, self.delta))

    def test_golden_matrices_for_the_primitive_root(self):
        entry = catalog_dd_division(3, OMEGA3, 1, self.delta)
        u_g, u_big_g = entry.action.ug
        u_x, u_big_x = entry.action.ux
        self.assertEqual(entry.params['ell'], 1)
        self.assertEqual(u_g, ExactMatrix([[0, 0, 1], [1, 0, 0], [0, 1, 0]]))
        self.assertEqual(u_big_g, ExactMatrix.diag([1, OMEGA3, OMEGA3 ** 2]))
        self.assertEqual(u_x, ExactMatrix([[0, 1, 0], [0, 0, OMEGA3], [OMEGA3 ** 2, 0, 0]]))
        self.assertEqual(u_big_x, ExactMatrix([[0, 0, OMEGA3], [1, 0, 0], [0, OMEGA3 ** 2, 0]]) * self.delta)
        self.assertEqual(u_x @ u_big_x, ExactMatrix.scalar(3, self.delta))

    def test_both_roots_certify(self):
        for pi in (OMEGA3, OMEGA3 ** 2):
            certificate = self.assertCertified(catalog_dd_division(3, pi, 1, self.delta))
            self.assertEqual(certificate.extracted.dd_lambda, 0)
            self.assertIn('non_elementary_constraint', certificate.route_a.flags)

    def test_rescaled_pair_certifies(self):
        self.assertCertified(catalog_dd_division(3, OMEGA3, 2, self.delta / 2))

    def test_product_constraint(self):
        with self.assertRaises(ConstraintViolated):
            catalog_dd_division(3, OMEGA3, 1, 1)

    def test_unconstrained_pair_fails_certification(self):
        entry = catalog_dd_division(3, OMEGA3 ** 2, 1, 1, enforce=False)
        self.assertIn('constraint_violated', entry.flags)
        certificate = certify_action(entry.action)
        self.assertFalse(certificate.passed)
        self.assertFalse(certificate.route_b.passed)
        checks = {c.name: c for c in certificate.route_a.checks}
        self.assertEqual(checks['cross'].residual, ExactMatrix.identity(3))
        self.assertEqual(checks['dd_cross'].residual, ExactMatrix.scalar(3, -OMEGA3))

    def test_pi_must_be_primitive(self):
        with self.assertRaises(NotPrimitiveRoot):
            catalog_dd_division(3, 1, 1, self.delta)


class DT2MixedTests(CertifiedMixin, SimpleTestCase):
    def _anticommutator(self, entry):
        k = entry.action.m // 2
        p = ExactMatrix([[entry.action.ux[0][2 * i, 2 * j + 1] for j in range(k)] for i in range(k)])
        q = ExactMatrix([[entry.action.ux[1][2 * i, 2 * j + 1] for j in range(k)] for i in range(k)])
        return p @ q + q @ p

    def test_nilpotent(self):
        for tau in (0, 1, -1):
            entry = catalog_dt2_mixed(DT2Variant.NILPOTENT, r=1, tau=tau)
            self.assertEqual(entry.action.m, 4)
            self.assertEqual(self._anticommutator(entry), ExactMatrix.scalar(2, -1))
            self.assertCertified(entry)

    def test_nilpotent_two_blocks(self):
        for tau in (0, 1, -1):
            entry = catalog_dt2_mixed(DT2Variant.NILPOTENT, r=2, tau=tau)
            self.assertEqual(entry.action.m, 8)
            self.assertEqual(self._anticommutator(entry), ExactMatrix.scalar(4, -1))
            self.assertCertified(entry)

    def test_nonnilpotent(self):
        cases = [
            {'t': 0, 'xi': Fraction(1, 2), 'xi_block': [[0]]},
            {'t': 0, 'xi': 1, 'xi_block': [[1]]},
            {'t': 1, 'xi': Fraction(1, 2)},
            {'t': 1, 'xi': 1},
        ]
        for case in cases:
            entry = catalog_dt2_mixed(DT2Variant.NONNILPOTENT, r=1, s=1, **case)
            self.assertEqual(self._anticommutator(entry), ExactMatrix.scalar(2, -1))
            self.assertCertified(entry)

    def test_generic(self):
        entry = catalog_dt2_mixed(DT2Variant.NONNILPOTENT_GENERIC, r=1, xi=1, beta=1)
        self.assertEqual(entry.params['beta'], 1)
        self.assertCertified(entry)
        with self.assertRaises(ConditionFailed):
            catalog_dt2_mixed(DT2Variant.NONNILPOTENT_GENERIC, r=1, xi=Fraction(1, 2), beta=1)

    def test_mixed_grading_kind(self):
        entry = catalog_dt2_mixed(DT2Variant.NILPOTENT, r=1, tau=0)
        grading = grading_from_action(entry.action.pres.group, entry.action.ug)
        self.assertEqual(classify_kind(grading).kind, GradingKind.MIXED)

    def test_shape_violations(self):
        with self.assertRaises(ShapeViolation):
            catalog_dt2_mixed(DT2Variant.NONNILPOTENT, r=1, s=1, t=2)
        with self.assertRaises(ShapeViolation):
            catalog_dt2_mixed(DT2Variant.NONNILPOTENT, r=1, s=1, t=0, xi_block=[[0, 0]])
        with self.assertRaises(ShapeViolation):
            catalog_dt2_mixed(DT2Variant.NILPOTENT, r=0)


class DDElementaryTests(CertifiedMixin, SimpleTestCase):
    def test_cross_scalar_follows_lambda(self):
        for n, lam in ((2, 0), (2, 1), (3, 1), (3, 2)):
            entry = dd_elementary_x(n, 1, 1, 1, 1, lam, 1)
            certificate = self.assertCertified(entry)
            self.assertEqual(certificate.extracted.dd_lambda, -lam)

    def test_block_seed(self):
        entry = dd_elementary_x(2, 2, 1, 1, ExactMatrix.identity(2), 1, 1)
        self.assertEqual(entry.action.m, 4)
        self.assertCertified(entry)

    def test_elementary_grading(self):
        entry = dd_elementary_x(3, 1, 1, 1, 1, 0, 1)
        grading = grading_from_action(entry.action.pres.group, entry.action.ug)
        self.assertEqual(classify_kind(grading).kind, GradingKind.ELEMENTARY)

    def test_nilpotent_seed_is_inconsistent(self):
        seed = ExactMatrix([[0, 1], [0, 0]])
        with self.assertRaises(RecurrenceInconsistent) as ctx:
            dd_elementary_x(2, 2, 1, 1, seed, 0, 1)
        self.assertEqual(ctx.exception.residual, ExactMatrix.identity(2).kron(seed))

    def test_rejected_parameters(self):
        with self.assertRaises(ShapeViolation):
            dd_elementary_x(2, 1, 1, 1, ExactMatrix.identity(2), 0, 1)
        with self.assertRaises(ConditionFailed):
            dd_elementary_x(2, 1, 1, 1, 1, 0, 0)


class SmallQuantumGroupTests(CertifiedMixin, SimpleTestCase):
    def test_cross_relation_fixes_q(self):
        entry = uqsl2_m2(3, 1, 2, 1)
        omega = entry.params['omega']
        self.assertEqual(entry.params['q'], (omega ** 2 - omega) / (1 + omega))
        self.assertEqual(entry.action.native_ux(0), ExactMatrix([[0, 0], [1, 0]]))

    def test_both_degrees_certify(self):
        for n, k in ((3, 1), (3, 2), (5, 2), (5, 3)):
            for lam in (1, 2):
                entry = uqsl2_m2(n, lam, k, 1)
                certificate = self.assertCertified(entry)
                self.assertEqual(certificate.extracted.family['tau'], entry.params['tau'])

    def test_mirror_degree_swaps_the_units(self):
        entry = uqsl2_m2(5, 1, 3, 2)
        self.assertEqual(entry.action.native_ux(0), ExactMatrix([[0, 2], [0, 0]]))

    def test_trivial_skew_part(self):
        entry = uqsl2_m2(5, 1, 1, 1)
        self.assertIn('trivial_skew_part', entry.flags)
        self.assertTrue(all(u.is_zero() for u in entry.action.ux))
        # a - τa^{-1} cannot act by zero: Ad(u(a)^2) is not the identity
        certificate = certify_action(entry.action)
        self.assertFalse(certificate.passed)
        self.assertTrue(certificate.routes_agree)
        failed = {c.name for c in certificate.route_a.checks if not c.passed}
        self.assertIn('sl2_xy', failed)
        with self.assertRaises(TrivialSkewPart):
            uqsl2_m2(5, 1, 1, 1, strict=True)

    def test_rejected_parameters(self):
        with self.assertRaises(ConditionFailed):
            uqsl2_m2(3, 1, 2, 0)
        with self.assertRaises(ConditionFailed):
            uqsl2_m2(3, 1, 0, 1)


class LiftTests(CertifiedMixin, SimpleTestCase):
    def test_lifts_certify(self):
        for n, k in ((3, 1), (3, 2), (5, 2), (5, 3)):
            source = uqsl2_m2(n, 1, k, 1)
            lifted = lift_uqsl2_to_dd(source)
            self.assertEqual(lifted.action.pres.family, Family.DD_TAFT)
            self.assertEqual(lifted.params['omega'], source.params['omega'] ** -2)
            certificate = self.assertCertified(lifted)
            self.assertEqual(certificate.extracted.dd_lambda, -source.params['tau'])

    def test_lift_grading_is_elementary(self):
        lifted = lift_uqsl2_to_dd(uqsl2_m2(3, 1, 2, 1))
        grading = grading_from_action(lifted.action.pres.group, lifted.action.ug)
        self.assertEqual(classify_kind(grading).kind, GradingKind.ELEMENTARY)

    def test_only_small_quantum_groups_lift(self):
        with self.assertRaises(ParentMismatch):
            lift_uqsl2_to_dd(catalog_taft_nonsingular(3, 3, 1))
