from dataclasses import replace
import random

from django.conf import settings
from django.test import SimpleTestCase, override_settings

from app.exceptions import (
    CertificationFailure, NotInnerCompatible, SchemaError, ShapeMismatch, UnknownGenerator,
)
from app.models import DT2Variant, Verdict
from app.services.actions import (
    InnerActionMap, act, certify_action, check_relations, conjugate_action, extract_lambdas,
    is_lift_shaped, normalize, operator_vanishes, skew_support_check, translated_cross_relation,
    x_operator, x_power_operator,
)
from app.services.catalogs import (
    catalog_dd_division, catalog_dt2_mixed, catalog_pp3, catalog_rank1_division, catalog_taft_m3,
    catalog_taft_nonsingular, lift_uqsl2_to_dd, uqsl2_m2,
)
from app.services.cyclo import CycNum
from app.services.exact_matrix import ExactMatrix, commutator_scalar, matrix_units, random_invertible
from app.services.hopf import taft
from app.tests.fixtures import (
    OMEGA3, degenerate_actions, klein_fixture, outside_support_fixture, z9_fixture,
)


def _dd_division():
    return catalog_dd_division(3, OMEGA3 ** 2, 1, (1 - OMEGA3).inverse())


def _left_primitive_entries():
    """Certified entries on M_m, m ≤ 4, whose skew generators are all (1, a)-primitive"""
    pres, beta, tau_chars = klein_fixture()
    return [
        catalog_taft_nonsingular(2, 2, 1),
        catalog_taft_nonsingular(3, 3, 2),
        catalog_taft_nonsingular(2, 4, OMEGA3),
        catalog_taft_m3(3)[2],
        catalog_pp3(3, 1, 1),
        _dd_division(),
        catalog_dt2_mixed(DT2Variant.NILPOTENT, r=1, tau=1),
        catalog_rank1_division(pres, beta, tau_chars, alpha=1),
    ]


def _shifted(action, c):
    ux = tuple(u_x + action.u_a(i) * c for i, u_x in enumerate(action.ux))
    return replace(action, ux=ux)


class ActTests(SimpleTestCase):
    def setUp(self):
        self.action = catalog_taft_nonsingular(3, 3, 1).action
        self.u_g, self.u_x = self.action.ug[0], self.action.ux[0]
        self.matrix = ExactMatrix([[1, 2, 0], [0, 1, 3], [4, 0, 1]])

    def test_group_acts_by_conjugation(self):
        expected = self.u_g @ self.matrix @ self.u_g.inverse()
        self.assertEqual(act(self.action, 'g', self.matrix), expected)
        self.assertEqual(act(self.action, 'g^3', self.matrix), self.matrix)
        self.assertEqual(act(self.action, 'g^-1', expected), self.matrix)

    def test_skew_generator_kills_the_unit(self):
        self.assertTrue(act(self.action, 'x', ExactMatrix.identity(3)).is_zero())

    def test_words_act_right_to_left(self):
        inner = act(self.action, 'x', self.matrix)
        self.assertEqual(act(self.action, 'g x', self.matrix), act(self.action, 'g', inner))
        self.assertEqual(act(self.action, 'x^2', self.matrix), act(self.action, 'x', inner))
        self.assertEqual(act(self.action, ['g', 'x'], self.matrix), act(self.action, 'g*x', self.matrix))

    def test_x_cubed_acts_by_zero(self):
        for unit in matrix_units(3):
            self.assertTrue(act(self.action, 'x^3', unit).is_zero())

    def test_bad_words(self):
        with self.assertRaises(UnknownGenerator):
            act(self.action, 'z', self.matrix)
        with self.assertRaises(SchemaError):
            act(self.action, 'x^-1', self.matrix)
        with self.assertRaises(SchemaError):
            act(self.action, 'g^', self.matrix)
        with self.assertRaises(ShapeMismatch):
            act(self.action, 'g', ExactMatrix.identity(2))

    def test_native_right_primitive_expands_with_its_anchor(self):
        action = uqsl2_m2(3, 1, 2, 1).action
        u_a = action.ug[0]
        matrix = ExactMatrix([[1, 2], [3, 4]])
        # x = x1·a in the algebra
        expected = act(action, 'x1', u_a @ matrix @ u_a.inverse())
        self.assertEqual(act(action, 'x', matrix), expected)


class NormalizationTests(SimpleTestCase):
    def setUp(self):
        self.entry = catalog_taft_nonsingular(3, 3, 1)

    def test_normal_form_is_a_fixed_point(self):
        normalized = normalize(self.entry.action)
        self.assertEqual(normalized.ux, self.entry.action.ux)
        self.assertEqual(normalized.extracted.shifts[0], 0)

    def test_shift_along_u_a_is_undone(self):
        action = self.entry.action
        shifted = InnerActionMap(
            pres=action.pres, m=3, ug=action.ug, ux=(action.ux[0] + action.ug[0] * 2,),
        )
        lambdas = extract_lambdas(shifted)
        self.assertEqual(lambdas[(0, 0)], 2 * (1 - OMEGA3))
        normalized = normalize(shifted)
        self.assertEqual(normalized.ux[0], action.ux[0])
        self.assertEqual(normalized.extracted.shifts[0], -2)

    def test_shifted_action_still_certifies(self):
        action = self.entry.action
        shifted = InnerActionMap(
            pres=action.pres, m=3, ug=action.ug, ux=(action.ux[0] - action.ug[0] * OMEGA3,),
        )
        self.assertTrue(certify_action(shifted).passed)

    def test_shifts_change_neither_the_action_nor_the_scalars(self):
        for base in _left_primitive_entries():
            action = base.action
            base_lambdas = extract_lambdas(action)
            base_normal = normalize(action)
            base_certificate = certify_action(action)
            for c in (2, -1, OMEGA3):
                shifted = _shifted(action, c)
                normalized = normalize(shifted)
                self.assertEqual(normalized.ux, base_normal.ux, base.label)
                for i, skew in enumerate(action.pres.skews):
                    self.assertEqual(normalized.extracted.shifts[i], base_normal.extracted.shifts[i] - c)
                    for unit in matrix_units(action.m):
                        expected = act(action, skew.name, unit)
                        self.assertEqual(act(shifted, skew.name, unit), expected, (base.label, skew.name))
                        self.assertEqual(act(normalized, skew.name, unit), expected, (base.label, skew.name))
                lambdas = extract_lambdas(shifted)
                for (i, l), value in base_lambdas.items():
                    g = action.pres.group.generator(l)
                    s = commutator_scalar(action.ug[l], action.u_a(i))
                    expected = value + CycNum.coerce(c) * (s - action.pres.datum.chi[i](g))
                    self.assertEqual(lambdas[(i, l)], expected, (base.label, i, l))
                certificate = certify_action(shifted)
                self.assertTrue(certificate.passed, base.label)
                self.assertEqual(certificate.extracted.sigma, base_certificate.extracted.sigma)
                self.assertEqual(certificate.extracted.zeta, base_certificate.extracted.zeta)
                self.assertEqual(certificate.extracted.dd_lambda, base_certificate.extracted.dd_lambda)

    def test_wrong_degree_is_not_inner_compatible(self):
        pres = taft(3, OMEGA3)
        action = InnerActionMap(
            pres=pres, m=3,
            ug=(ExactMatrix.diag([1, OMEGA3, OMEGA3]),),
            ux=(ExactMatrix.unit(3, 0, 2),),
        )
        with self.assertRaises(NotInnerCompatible):
            normalize(action)
        certificate = certify_action(action)
        self.assertFalse(certificate.passed)
        self.assertIsNotNone(certificate.normalization_error)
        with self.assertRaises(CertificationFailure):
            certificate.raise_for_failure()


class CertificationTests(SimpleTestCase):
    def test_both_routes_pass_on_normal_forms(self):
        for entry in catalog_taft_m3(5):
            certificate = certify_action(entry.action)
            self.assertEqual(certificate.verdict, Verdict.PASS, entry.label)
            self.assertTrue(certificate.routes_agree, entry.label)

    def test_certification_is_conjugation_invariant(self):
        rng = random.Random(settings.HOPF_DEFAULT_SEED)
        for entry in catalog_taft_m3(3)[:4]:
            c = random_invertible(3, rng)
            certificate = certify_action(conjugate_action(entry.action, c))
            self.assertTrue(certificate.passed, entry.label)

    def test_certificate_document(self):
        data = certify_action(catalog_taft_nonsingular(2, 2, 1).action).to_dict()
        self.assertEqual(data['verdict'], 'pass')
        self.assertTrue(data['routes_agree'])
        self.assertEqual(data['route_a']['verdict'], 'pass')
        self.assertIn('sigma', data['extracted'])

    def test_relation_report_names_every_check(self):
        report = check_relations(normalize(catalog_taft_nonsingular(3, 3, 1).action))
        self.assertTrue(report.passed)
        self.assertIsNone(report.first_failure())
        names = [c.name for c in report.checks]
        self.assertEqual(names, ['group_order', 'skew_commute', 'power'])

    def test_division_double_is_flagged_non_elementary(self):
        report = check_relations(normalize(_dd_division().action))
        self.assertTrue(report.passed)
        self.assertEqual(report.extracted.dd_lambda, 0)
        self.assertIn('non_elementary_constraint', report.flags)

    def test_power_scalar_is_extracted(self):
        certificate = certify_action(catalog_taft_nonsingular(3, 3, 5).action)
        self.assertEqual(certificate.extracted.sigma[0], 5)

    def test_broken_skew_commutation_fails_both_routes(self):
        entry = catalog_taft_nonsingular(3, 3, 1)
        broken = InnerActionMap(
            pres=entry.action.pres, m=3, ug=entry.action.ug,
            ux=(entry.action.ux[0] + ExactMatrix.unit(3, 0, 0),),
        )
        certificate = certify_action(broken)
        self.assertFalse(certificate.route_a.passed)
        self.assertFalse(certificate.route_b.passed)

    def test_routes_agree_on_mutated_actions(self):
        rng = random.Random(settings.HOPF_DEFAULT_SEED)
        entries = _left_primitive_entries()
        verdicts = set()
        for _ in range(30):
            action = rng.choice(entries).action
            mutation = rng.randrange(5)
            i = rng.randrange(len(action.ux))
            if mutation == 0:
                action = _shifted(action, rng.randint(-3, 3))
            elif mutation == 1:
                k, l = rng.randrange(action.m), rng.randrange(action.m)
                ux = list(action.ux)
                ux[i] = ux[i] + ExactMatrix.unit(action.m, k, l, rng.choice([-2, -1, 1, 2]))
                action = replace(action, ux=tuple(ux))
            elif mutation == 2:
                ux = list(action.ux)
                ux[i] = ux[i] * rng.choice([-1, 2, 3])
                action = replace(action, ux=tuple(ux))
            elif mutation == 3:
                l = rng.randrange(len(action.ug))
                ug = list(action.ug)
                ug[l] = ug[l] * rng.choice([-1, 2, 3])
                action = replace(action, ug=tuple(ug))
            else:
                action = conjugate_action(action, random_invertible(action.m, rng))
            certificate = certify_action(action)
            self.assertTrue(certificate.routes_agree, (mutation, action.pres.family))
            verdicts.add(certificate.verdict)
        self.assertEqual(verdicts, {Verdict.PASS, Verdict.FAIL})

    @override_settings(HOPF_MAX_MATRIX_SIZE=2)
    def test_matrix_size_guard(self):
        with self.assertRaises(ShapeMismatch):
            catalog_taft_nonsingular(3, 3, 1)


class PowerOperatorTests(SimpleTestCase):
    """(L - T)^N collapses to L^N - T^N when u(a)u(x) = q·u(x)u(a), q of order N"""

    def test_closed_form_matches_repeated_product(self):
        rng = random.Random(settings.HOPF_DEFAULT_SEED)
        clock = ExactMatrix.diag([1, OMEGA3, OMEGA3 ** 2])
        for _ in range(50):
            p = random_invertible(3, rng, conductor=3)
            degree_one = ExactMatrix([
                [0, 0, rng.randint(-3, 3)],
                [rng.randint(-3, 3), 0, 0],
                [0, rng.randint(-3, 3), 0],
            ])
            p_inv = p.inverse()
            u_a = p @ clock @ p_inv
            u_x = p @ degree_one @ p_inv
            self.assertEqual(u_a @ u_x, u_x @ u_a * OMEGA3)
            self.assertEqual(x_operator(u_x, u_a) ** 3, x_power_operator(u_x, u_a, 3))


class SupportTests(SimpleTestCase):
    def test_skew_outside_the_support_acts_by_zero(self):
        pres, beta, tau_chars = outside_support_fixture()
        entry = catalog_rank1_division(pres, beta, tau_chars, alpha=1)
        self.assertIn('skew_vanishes', entry.flags)
        self.assertTrue(certify_action(entry.action).passed)
        report = skew_support_check(entry.action)
        prediction = report.skews[0]
        self.assertTrue(prediction.operator_vanishes)
        self.assertTrue(prediction.outside_kernel_annihilator)
        self.assertTrue(prediction.outside_support_span)
        self.assertTrue(prediction.vanishing_predicted)

    def test_skew_inside_the_support_has_the_right_degree(self):
        for fixture in (klein_fixture, z9_fixture):
            pres, beta, tau_chars = fixture()
            entry = catalog_rank1_division(pres, beta, tau_chars, alpha=2)
            self.assertTrue(certify_action(entry.action).passed, fixture.__name__)
            report = skew_support_check(entry.action)
            prediction = report.skews[0]
            self.assertFalse(prediction.operator_vanishes)
            self.assertFalse(prediction.vanishing_predicted)
            self.assertEqual(prediction.degree, pres.datum.chi[0])

    def test_zero_alpha_gives_the_zero_operator(self):
        pres, beta, tau_chars = klein_fixture()
        entry = catalog_rank1_division(pres, beta, tau_chars, alpha=0)
        self.assertTrue(operator_vanishes(entry.action, 0))

    def test_degenerate_actions_have_zero_skew_operators(self):
        for name, action, predicted in degenerate_actions():
            self.assertTrue(x_operator(action.ux[0], action.u_a(0)).is_zero(), name)
            self.assertTrue(operator_vanishes(action, 0), name)
            prediction = skew_support_check(action).skews[0]
            self.assertTrue(prediction.operator_vanishes, name)
            if predicted:
                self.assertTrue(prediction.vanishing_predicted, name)


class DrinfeldDoubleTests(SimpleTestCase):
    def test_translated_cross_relation_on_division_actions(self):
        result = translated_cross_relation(_dd_division().action)
        self.assertTrue(result.operator_holds)
        self.assertEqual(result.kappa, 0)

    def test_translated_cross_relation_on_lifts(self):
        entry = uqsl2_m2(3, 1, 2, 1)
        lifted = lift_uqsl2_to_dd(entry)
        result = translated_cross_relation(lifted.action)
        self.assertTrue(result.operator_holds)
        self.assertEqual(result.kappa, -entry.params['tau'])

    def test_lift_shape(self):
        self.assertFalse(is_lift_shaped(_dd_division().action))
        self.assertTrue(is_lift_shaped(lift_uqsl2_to_dd(uqsl2_m2(5, 1, 2, 1)).action))
        self.assertFalse(is_lift_shaped(catalog_taft_nonsingular(3, 3, 1).action))

    def test_translation_needs_a_double(self):
        with self.assertRaises(UnknownGenerator):
            translated_cross_relation(catalog_taft_nonsingular(3, 3, 1).action)
