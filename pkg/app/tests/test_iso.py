import random
from dataclasses import replace

from django.conf import settings
from django.test import SimpleTestCase, override_settings

from app.exceptions import ParentMismatch, ShapeMismatch
from app.models import IsoStatus
from app.services.actions import conjugate_action
from app.services.catalogs import catalog_pp3, catalog_taft_m3, catalog_taft_nonsingular
from app.services.cyclo import CycNum
from app.services.exact_matrix import ExactMatrix, random_invertible
from app.services.iso import determinant_search, intertwiner_space, iso_test, replay_witness
from app.tests.fixtures import OMEGA3


class IsoTestTests(SimpleTestCase):
    def setUp(self):
        self.rng = random.Random(settings.HOPF_DEFAULT_SEED)
        self.entry = catalog_taft_nonsingular(3, 3, 1)

    def assertIsomorphic(self, first, second):
        verdict = iso_test(first, second)
        self.assertEqual(verdict.status, IsoStatus.ISOMORPHIC, verdict.obstruction)
        self.assertTrue(replay_witness(first, second, verdict))
        return verdict

    def test_conjugated_copies(self):
        for _ in range(3):
            c = random_invertible(3, self.rng)
            self.assertIsomorphic(self.entry.action, conjugate_action(self.entry.action, c))

    def test_conjugated_sporadic_forms(self):
        for entry in catalog_taft_m3(5)[:3]:
            c = random_invertible(3, self.rng)
            self.assertIsomorphic(conjugate_action(entry.action, c), entry.action)

    def test_scaled_group_matrix(self):
        action = self.entry.action
        scaled = replace(action, ug=(action.ug[0] * OMEGA3,), extracted=None)
        verdict = self.assertIsomorphic(action, scaled)
        self.assertEqual(set(verdict.witness.lambdas), {'g'})

    def test_reflexive_and_symmetric(self):
        first = catalog_pp3(3, 1, 1).action
        second = catalog_pp3(3, 1, OMEGA3).action
        self.assertIsomorphic(first, first)
        self.assertIsomorphic(first, second)
        self.assertIsomorphic(second, first)

    def test_power_scalar_separates(self):
        verdict = iso_test(self.entry.action, catalog_taft_nonsingular(3, 3, OMEGA3).action)
        self.assertEqual(verdict.status, IsoStatus.NOT_ISOMORPHIC)
        self.assertIsNone(verdict.witness)
        self.assertFalse(replay_witness(self.entry.action, self.entry.action, verdict))

    def test_spectrum_separates(self):
        entries = {entry.label: entry for entry in catalog_taft_m3(5)}
        verdict = iso_test(entries['P1'].action, entries['P3_1'].action)
        self.assertEqual(verdict.status, IsoStatus.NOT_ISOMORPHIC)
        self.assertIn('similar', verdict.obstruction)
        self.assertEqual(verdict.examined, 0)

    def test_pp3_parameters(self):
        base = catalog_pp3(3, 1, 1).action
        self.assertFalse(iso_test(base, catalog_pp3(3, 2, 1).action).isomorphic)
        self.assertFalse(iso_test(base, catalog_pp3(3, 1, 2).action).isomorphic)

    def test_incomparable_actions(self):
        with self.assertRaises(ShapeMismatch):
            iso_test(self.entry.action, catalog_taft_nonsingular(3, 6, 1).action)
        with self.assertRaises(ParentMismatch):
            iso_test(self.entry.action, catalog_taft_nonsingular(3, 3, 1, omega=OMEGA3 ** 2).action)

    def test_verdict_encoding(self):
        data = iso_test(self.entry.action, self.entry.action).to_dict()
        self.assertEqual(data['status'], 'isomorphic')
        self.assertTrue(data['isomorphic'])
        self.assertEqual(set(data['witness']), {'C', 'lambda', 'mu'})


class IntertwinerTests(SimpleTestCase):
    def test_endomorphisms_of_an_irreducible_action(self):
        action = catalog_taft_nonsingular(3, 3, 1).action
        basis = intertwiner_space(action, action, [CycNum.one()])
        self.assertEqual(len(basis), 1)
        self.assertIsNotNone(basis[0].as_scalar())


class DeterminantSearchTests(SimpleTestCase):
    def setUp(self):
        self.e11 = ExactMatrix.unit(2, 0, 0)
        self.e12 = ExactMatrix.unit(2, 0, 1)
        self.e22 = ExactMatrix.unit(2, 1, 1)

    def test_invertible_combination(self):
        status, combo = determinant_search([self.e11, self.e22])
        self.assertEqual(status, IsoStatus.ISOMORPHIC)
        self.assertEqual(combo, ExactMatrix.identity(2))

    def test_singular_span(self):
        status, combo = determinant_search([self.e11, self.e12])
        self.assertEqual(status, IsoStatus.NOT_ISOMORPHIC)
        self.assertIsNone(combo)

    def test_cyclotomic_entries(self):
        status, combo = determinant_search([self.e11 * OMEGA3, self.e22 * (1 - OMEGA3)])
        self.assertEqual(status, IsoStatus.ISOMORPHIC)
        self.assertTrue(combo.is_invertible())

    @override_settings(HOPF_DETERMINANT_MAX_VARIABLES=1)
    def test_too_many_variables(self):
        status, combo = determinant_search([self.e11, self.e22])
        self.assertEqual(status, IsoStatus.UNDECIDED)
        self.assertIsNone(combo)
