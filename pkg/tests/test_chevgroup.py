import itertools
import random
import unittest

from chevalgebra import algebra_for, bracket, constant_net, enumerate_nets
from chevgroup import (GroupElement, MissingWord, PreconditionViolation, act, commutator, conjugate,
                       determinant_is_unit, elementary_generators, group_element_from_json, identity,
                       in_congruence_subgroup, in_parabolic, in_S_sigma, level_of_S, random_element,
                       reduce_element, reduction_witness, root_element, torus_element,
                       u_prime_coordinates, weyl_lift)
from exactrings import DualNumbers, Ideal, IntegerRing, ModularRing
from presets import resolve_preset
from rootsys import build_system
from starcond import sigma_set


class TestRootElements(unittest.TestCase):

    def setUp(self):
        self.system = build_system("D4")
        self.algebra = algebra_for(self.system)
        self.ring = ModularRing(5)
        self.rng = random.Random(11)

    def test_one_parameter_law(self):
        for ring in (self.ring, DualNumbers(ModularRing(3)), IntegerRing()):
            xi, zeta = ring.element(2), ring.element(3)
            for alpha in (0, 5, self.system.negation[7]):
                self.assertEqual(root_element(self.algebra, alpha, xi) * root_element(self.algebra, alpha, zeta),
                                 root_element(self.algebra, alpha, xi + zeta))

    def test_inverse(self):
        for _ in range(5):
            g = random_element(self.algebra, self.ring, self.rng, 5)
            self.assertTrue((g * g.inverse()).is_identity())
            self.assertTrue((g.inverse() * g).is_identity())

    def test_inverse_needs_word(self):
        g = random_element(self.algebra, self.ring, self.rng, 2)
        with self.assertRaises(MissingWord):
            GroupElement(self.algebra, self.ring, g.matrix).inverse()

    def test_action_preserves_bracket(self):
        dim = self.algebra.dim
        for _ in range(5):
            g = random_element(self.algebra, self.ring, self.rng, 4)
            u = self.algebra.vector(self.ring, {self.rng.randrange(dim): self.rng.randrange(5) for _ in range(3)})
            v = self.algebra.vector(self.ring, {self.rng.randrange(dim): self.rng.randrange(5) for _ in range(3)})
            self.assertEqual(act(g, bracket(u, v)), bracket(act(g, u), act(g, v)))

    def test_commutator_formula(self):
        system, algebra, ring = self.system, self.algebra, self.ring
        xi = ring.element(3)
        for beta in range(algebra.num_roots):
            for gamma in range(algebra.num_roots):
                s = system.root_sum(beta, gamma)
                if s is None:
                    continue
                c = commutator(root_element(algebra, beta, ring.one), root_element(algebra, gamma, xi))
                self.assertEqual(c, root_element(algebra, s, xi * algebra.constants(beta, gamma)))

    def test_weyl_lift_permutes_root_vectors(self):
        system, algebra, ring = self.system, self.algebra, self.ring
        for alpha in system.simple_roots:
            w = weyl_lift(algebra, alpha, ring)
            for beta in range(algebra.num_roots):
                image = act(w, algebra.e(beta, ring))
                target = int(system.reflection_table[beta, alpha])
                self.assertEqual(list(image.coeffs), [target])
                self.assertIn(image.coefficient(target), (ring.one, -ring.one))

    def test_torus_is_diagonal(self):
        system, algebra, ring = self.system, self.algebra, self.ring
        u = ring.element(2)
        alpha = system.simple_roots[1]
        h = torus_element(algebra, alpha, u)
        for beta in range(algebra.num_roots):
            k = system.pairing(beta, alpha)
            image = act(h, algebra.e(beta, ring))
            up = u ** k if k >= 0 else u.inverse() ** -k
            down = u.inverse() ** k if k >= 0 else u ** -k
            self.assertIn(image, (algebra.e(beta, ring).scale(up), algebra.e(beta, ring).scale(down)))

    def test_determinant(self):
        for ring in (self.ring, IntegerRing(), DualNumbers(ModularRing(3))):
            g = random_element(self.algebra, ring, self.rng, 3)
            self.assertTrue(determinant_is_unit(g))

    def test_json(self):
        g = random_element(self.algebra, self.ring, self.rng, 4)
        again = group_element_from_json(g.to_json())
        self.assertEqual(again, g)
        self.assertIn("matrix", g.to_json(emit_matrix=True))


class TestReduction(unittest.TestCase):

    def setUp(self):
        self.system = build_system("D4")
        self.algebra = algebra_for(self.system)

    def test_congruence_subgroup(self):
        ring = ModularRing(4)
        I = Ideal(ring, (2,))
        self.assertTrue(in_congruence_subgroup(root_element(self.algebra, 3, ring.element(2)), I))
        self.assertFalse(in_congruence_subgroup(root_element(self.algebra, 3, ring.one), I))
        reduced = reduce_element(root_element(self.algebra, 3, ring.element(3)), I)
        self.assertEqual(reduced.ring, ModularRing(2))
        self.assertEqual(reduced, root_element(self.algebra, 3, ModularRing(2).one))

    def _configuration(self):
        system = self.system
        for gamma in range(len(system)):
            for a1 in range(len(system)):
                for a2 in range(len(system)):
                    if (system.pairing(a1, a2) == 0 and system.pairing(gamma, a1) == 1
                            and system.pairing(gamma, a2) == -1):
                        return gamma, a1, a2
        self.fail("no configuration in D4")

    def test_reduction_witness(self):
        gamma, a1, a2 = self._configuration()
        ring = ModularRing(9)
        I = Ideal(ring, (3,))
        rng = random.Random(5)
        for _ in range(3):
            noise = [root_element(self.algebra, rng.randrange(self.algebra.num_roots), ring.element(3 * rng.randint(1, 2)))
                     for _ in range(2)]
            h = root_element(self.algebra, gamma, ring.element(2)) * noise[0] * noise[1]
            result = reduction_witness(h, gamma, a1, a2, I)
            self.assertEqual(result.target, self.system.root_sum(gamma, a2))
            self.assertIn(result.sign, (1, -1))
            self.assertEqual(result.xi_bar, ModularRing(3).element(2))

    def test_reduction_witness_preconditions(self):
        gamma, a1, a2 = self._configuration()
        ring = ModularRing(9)
        h = root_element(self.algebra, gamma, ring.one)
        with self.assertRaises(PreconditionViolation):
            reduction_witness(h, gamma, a2, a1, Ideal(ring, (3,)))


class TestSubgroups(unittest.TestCase):

    def setUp(self):
        self.system, self.delta = resolve_preset("D4:4A1")
        self.algebra = algebra_for(self.system)

    def test_levels_match_nets(self):
        for net in enumerate_nets(self.system, self.delta, ModularRing(4)):
            report = level_of_S(net, self.algebra)
            self.assertTrue(report.matches_net())
            self.assertTrue(report.exact)

    def test_elementary_generators_in_S(self):
        ring = ModularRing(4)
        net = constant_net(self.system, self.delta, Ideal(ring, (2,)))
        for g in elementary_generators(net, self.algebra):
            self.assertTrue(in_S_sigma(g, net))
        gamma = self.delta.complement()[0]
        self.assertFalse(in_S_sigma(root_element(self.algebra, gamma, ring.one), net))

    def test_parabolic(self):
        system, algebra, ring = self.system, self.algebra, ModularRing(3)
        a1, a2 = system.simple_roots[0], system.simple_roots[2]
        self.assertTrue(in_parabolic(root_element(algebra, a1, ring.one), a1, a2))
        self.assertTrue(in_parabolic(root_element(algebra, system.simple_roots[3], ring.one), a1, a2))
        self.assertFalse(in_parabolic(root_element(algebra, system.simple_roots[1], ring.one), a1, a2))
        self.assertFalse(in_parabolic(root_element(algebra, system.negation[a1], ring.one), a1, a2))

    def test_u_prime_coordinates(self):
        system, algebra, ring = self.system, self.algebra, ModularRing(5)
        a1, a2 = system.simple_roots[0], system.simple_roots[2]
        sigma = sigma_set(system, a1, a2)
        self.assertGreaterEqual(len(sigma), 2)
        g = root_element(algebra, sigma[0], ring.element(2)) * root_element(algebra, sigma[1], ring.element(4))
        self.assertEqual(u_prime_coordinates(g, a1, a2), {sigma[0]: ring.element(2), sigma[1]: ring.element(4)})
        self.assertEqual(u_prime_coordinates(identity(algebra, ring), a1, a2), {})
        self.assertIsNone(u_prime_coordinates(root_element(algebra, system.negation[a1], ring.one), a1, a2))

    def test_u_prime_is_abelian(self):
        system, algebra, ring = self.system, self.algebra, ModularRing(3)
        a1, a2 = system.simple_roots[0], system.simple_roots[2]
        sigma = sigma_set(system, a1, a2)
        for g, h in itertools.combinations(sigma, 2):
            c = commutator(root_element(algebra, g, ring.one), root_element(algebra, h, ring.element(2)))
            self.assertTrue(c.is_identity(), (g, h))

    def test_levi_normalizes_u_prime(self):
        system, algebra, ring = self.system, self.algebra, ModularRing(3)
        a1, a2 = system.simple_roots[0], system.simple_roots[2]
        values = system.gram[a1] + system.gram[a2]
        flat = [b for b in range(len(system)) if values[b] == 0]
        self.assertTrue(flat)
        for beta in flat:
            x = root_element(algebra, beta, ring.one)
            for gamma in sigma_set(system, a1, a2):
                moved = conjugate(x, root_element(algebra, gamma, ring.element(2)))
                self.assertIsNotNone(u_prime_coordinates(moved, a1, a2), (beta, gamma))


if __name__ == '__main__':
    unittest.main()
