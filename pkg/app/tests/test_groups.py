from django.test import SimpleTestCase, override_settings

from app.exceptions import BadBicharacter, HopfActionError, NoSolution, SchemaError
from app.services.cyclo import cyc_root
from app.services.groups import (
    AbGroup, Bicharacter, Character, annihilator, beta_props, char_eval, closure,
    dual_generators, parse_group, solve_f, subgroup_basis,
)


class AbGroupTests(SimpleTestCase):
    def test_orders_and_exponents(self):
        group = AbGroup((2, 6))
        self.assertEqual(group.order(), 12)
        self.assertEqual(group.exponent(), 6)
        self.assertEqual(len(list(group.elements())), 12)
        self.assertEqual(len(list(group.characters())), 12)

    def test_invariant_factors(self):
        self.assertEqual(AbGroup((2, 3)).invariant_factors(), (6,))
        self.assertEqual(AbGroup((3, 3)).invariant_factors(), (3, 3))
        self.assertEqual(AbGroup((2, 4, 3)).invariant_factors(), (2, 12))

    def test_element_arithmetic(self):
        group = AbGroup((4, 3))
        g, h = group.generators()
        self.assertTrue((g ** 4).is_identity())
        self.assertEqual((g * h).order(), 12)
        self.assertEqual((g * h).inverse().exps, (3, 2))

    @override_settings(HOPF_MAX_GROUP_ORDER=16)
    def test_desk_scale_guard(self):
        AbGroup((4, 4))
        with self.assertRaises(HopfActionError):
            AbGroup((4, 5))

    def test_parse_group(self):
        self.assertEqual(parse_group([3, 3]).factors, (3, 3))
        with self.assertRaises(SchemaError) as ctx:
            parse_group('Z3', pointer='datum.group')
        self.assertEqual(ctx.exception.pointer, 'datum.group')
        with self.assertRaises(SchemaError):
            parse_group([3, 0])


class CharacterTests(SimpleTestCase):
    def test_values_on_generators(self):
        group = AbGroup((3, 4))
        chi = Character(group, (1, 3))
        g, h = group.generators()
        self.assertEqual(chi(g), cyc_root(3, 1))
        self.assertEqual(chi(h), cyc_root(4, 3))
        self.assertEqual(chi(g * h), cyc_root(12, 4 + 9))

    def test_from_values_inverts_generator_values(self):
        group = AbGroup((5, 2))
        chi = Character.from_values(group, [cyc_root(5, 2), -1])
        self.assertEqual(chi.exps, (2, 1))
        self.assertEqual(chi.generator_values(), (cyc_root(5, 2), -1))
        with self.assertRaises(NoSolution):
            Character.from_values(group, [cyc_root(3, 1), 1])

    def test_characters_form_a_group(self):
        group = AbGroup((3, 3))
        for chi in group.characters():
            self.assertTrue((chi * chi.inverse()).is_trivial())
            self.assertTrue((chi ** chi.order()).is_trivial())
            for g in group.elements():
                self.assertEqual(char_eval(chi, g) * chi.inverse()(g), 1)

    def test_dual_generators(self):
        group = AbGroup((2, 3))
        chi0, chi1 = dual_generators(group)
        g0, g1 = group.generators()
        self.assertEqual(chi0(g0), -1)
        self.assertEqual(chi0(g1), 1)
        self.assertEqual(chi1(g1), cyc_root(3, 1))

    def test_annihilator(self):
        group = AbGroup((3, 3))
        g, _ = group.generators()
        chars = annihilator(group, [g])
        self.assertEqual(len(chars), 3)
        self.assertTrue(all(chi.exps[0] == 0 for chi in chars))


class SubgroupTests(SimpleTestCase):
    def test_closure(self):
        self.assertEqual(len(closure((4, 2), [(2, 0)])), 2)
        self.assertEqual(len(closure((4, 2), [(1, 0), (0, 1)])), 8)
        self.assertEqual(closure((3,), []), frozenset({(0,)}))

    def test_subgroup_basis_generates_the_same_subgroup(self):
        factors = (3, 3)
        generators = [(1, 1), (2, 2), (0, 1)]
        basis = subgroup_basis(factors, generators)
        self.assertEqual(closure(factors, basis), closure(factors, generators))
        self.assertEqual(len(basis), 2)


class BicharacterTests(SimpleTestCase):
    def test_standard_symplectic_form(self):
        support = AbGroup((3, 3))
        beta = Bicharacter(support, ((0, 1), (-1, 0)))
        mu, nu = support.generators()
        self.assertEqual(beta(mu, nu), cyc_root(3, 1))
        self.assertEqual(beta(nu, mu), cyc_root(3, 2))
        props = beta_props(beta)
        self.assertTrue(props.alternating)
        self.assertTrue(props.nondegenerate)
        self.assertEqual(len(props.kernel), 1)

    def test_degenerate_form_reports_its_kernel(self):
        support = AbGroup((3, 3))
        props = beta_props(Bicharacter(support, ((0, 0), (0, 0))))
        self.assertTrue(props.alternating)
        self.assertFalse(props.nondegenerate)
        self.assertEqual(len(props.kernel), 9)

    def test_symmetric_form_is_not_alternating(self):
        support = AbGroup((2, 2))
        props = beta_props(Bicharacter(support, ((1, 0), (0, 0))))
        self.assertFalse(props.alternating)

    def test_incompatible_entry_is_rejected(self):
        with self.assertRaises(BadBicharacter):
            Bicharacter(AbGroup((2, 3)), ((0, 1), (1, 0)))
        with self.assertRaises(BadBicharacter):
            Bicharacter(AbGroup((3, 3)), ((0, 1),))

    def test_from_values_matches_the_table(self):
        support = AbGroup((3, 3))
        omega = cyc_root(3, 1)
        beta = Bicharacter.from_values(support, [[1, omega], [omega ** 2, 1]])
        self.assertEqual(beta.table, ((0, 1), (2, 0)))


class SolveFTests(SimpleTestCase):
    def setUp(self):
        self.support = AbGroup((3, 3))
        self.beta = Bicharacter(self.support, ((0, 1), (-1, 0)))
        self.group = AbGroup((3, 3))
        omega = cyc_root(3, 1)
        self.chars = (
            Character.from_values(self.group, [omega, 1]),
            Character.from_values(self.group, [1, omega]),
        )

    def test_defining_property_holds_on_every_element(self):
        f = solve_f(self.beta, self.chars, self.group)
        taus = self.support.generators()
        for g in self.group.elements():
            for tau, chi in zip(taus, self.chars):
                self.assertEqual(self.beta(f(g), tau), chi(g))

    def test_group_defaults_to_the_character_parent(self):
        f = solve_f(self.beta, self.chars)
        self.assertEqual(f.source, self.group)

    def test_wrong_number_of_characters(self):
        with self.assertRaises(NoSolution):
            solve_f(self.beta, self.chars[:1], self.group)

    def test_degenerate_form_has_no_solution(self):
        beta = Bicharacter(self.support, ((0, 0), (0, 0)))
        with self.assertRaises(NoSolution):
            solve_f(beta, self.chars, self.group)
