import itertools
import random
import unittest

from chevalgebra import (AlgebraError, ChevalleyAlgebra, NetViolation, PerpNonEmpty, SubalgebraDescriptor,
                         algebra_for, antisymmetry_violations, bracket, constant_net, enumerate_nets,
                         in_parabolic_algebra, in_subalgebra, jacobi_violations, lemma_Lprime_check,
                         lie_vector_from_json, lprime_module, lsigma_is_closed, net_from_json,
                         net_from_orbit_ideals, support_violations)
from exactrings import Ideal, IntegerRing, ModularRing, RingMismatch
from presets import resolve_preset
from rootsys import build_system, subsystem_closure, weyl_orbits


class TestStructureConstants(unittest.TestCase):

    def test_a2_sign(self):
        system = build_system("A2")
        a1, a2 = system.simple_roots
        self.assertEqual(algebra_for(system).constants(a1, a2), -1)

    def test_antisymmetry_and_support(self):
        for label in ("A2", "D4", "E6", "E8"):
            constants = algebra_for(build_system(label)).constants
            self.assertEqual(antisymmetry_violations(constants), [], label)
            self.assertEqual(support_violations(constants), [], label)

    def test_jacobi_exhaustive(self):
        for label in ("A2", "A3", "D4"):
            algebra = algebra_for(build_system(label))
            triples = itertools.combinations_with_replacement(range(algebra.dim), 3)
            self.assertEqual(jacobi_violations(algebra, triples), [], label)

    def test_jacobi_sampled_e7(self):
        algebra = algebra_for(build_system("E7"))
        rng = random.Random(7)
        triples = [tuple(rng.randrange(algebra.dim) for _ in range(3)) for _ in range(300)]
        self.assertEqual(jacobi_violations(algebra, triples), [])

    def test_flipped_constant_is_detected(self):
        system = build_system("D4")
        constants = algebra_for(system).constants
        i, j = (int(x) for x in next(zip(*constants.table.nonzero())))
        mutated = constants.flipped(i, j)
        self.assertIn((i, j), antisymmetry_violations(mutated))
        algebra = ChevalleyAlgebra(system, mutated)
        triples = [(i, j, r) for r in range(algebra.dim)]
        self.assertNotEqual(jacobi_violations(algebra, triples), [])


class TestBracket(unittest.TestCase):

    def setUp(self):
        self.system = build_system("D4")
        self.algebra = algebra_for(self.system)
        self.ring = ModularRing(5)

    def test_root_vectors_to_coroots(self):
        for alpha in range(self.algebra.num_roots):
            minus = self.system.negation[alpha]
            e, f = self.algebra.e(alpha, self.ring), self.algebra.e(minus, self.ring)
            self.assertEqual(bracket(e, f), self.algebra.h_root(alpha, self.ring))

    def test_cartan_action(self):
        for alpha in range(self.algebra.num_roots):
            for k, s in enumerate(self.system.simple_roots, 1):
                h, e = self.algebra.h(k, self.ring), self.algebra.e(alpha, self.ring)
                self.assertEqual(bracket(h, e), e.scale(self.system.pairing(alpha, s)))

    def test_bilinear_and_antisymmetric(self):
        rng = random.Random(3)
        dim = self.algebra.dim
        for _ in range(20):
            u = self.algebra.vector(self.ring, {rng.randrange(dim): rng.randrange(5) for _ in range(4)})
            v = self.algebra.vector(self.ring, {rng.randrange(dim): rng.randrange(5) for _ in range(4)})
            self.assertEqual(bracket(u, v), -bracket(v, u))
            self.assertEqual(bracket(u.scale(2), v), bracket(u, v).scale(2))

    def test_mixed_rings_raise(self):
        with self.assertRaises(RingMismatch):
            bracket(self.algebra.e(0, self.ring), self.algebra.e(1, ModularRing(3)))

    def test_json(self):
        v = self.algebra.e(3, self.ring, 2) + self.algebra.h(2, self.ring, 4)
        self.assertEqual(lie_vector_from_json(self.algebra, self.ring, v.to_json()), v)

    def test_parabolic_algebra(self):
        system = self.system
        a1 = system.simple_roots[0]
        a2 = system.simple_roots[2]
        self.assertTrue(in_parabolic_algebra(self.algebra.e(a1, self.ring), system, a1, a2))
        self.assertFalse(in_parabolic_algebra(self.algebra.e(system.negation[a1], self.ring), system, a1, a2))
        self.assertTrue(in_parabolic_algebra(self.algebra.h(1, self.ring), system, a1, a2))


class TestNets(unittest.TestCase):

    def setUp(self):
        self.system, self.delta = resolve_preset("D4:4A1")

    def test_enumerate_d4(self):
        nets = enumerate_nets(self.system, self.delta, ModularRing(4))
        self.assertEqual(len(nets), 3)
        for net in nets:
            self.assertTrue(lsigma_is_closed(net))
            self.assertTrue(lemma_Lprime_check(net))

    def test_perp_nonempty(self):
        delta = subsystem_closure(self.system, [self.system.simple_roots[0]])
        with self.assertRaises(PerpNonEmpty):
            constant_net(self.system, delta, Ideal.unit(IntegerRing()))

    def test_delta_orbit_must_be_unit(self):
        ring = ModularRing(4)
        orbits = weyl_orbits(self.system, self.delta)
        oid = orbits.orbit_of[self.delta.roots[0]]
        outside = {o: Ideal.unit(ring) for o, m in enumerate(orbits.orbits) if m[0] not in self.delta}
        outside[oid] = Ideal(ring, (2,))
        with self.assertRaises(AlgebraError):
            net_from_orbit_ideals(self.system, self.delta, outside, ring=ring)

    def test_violation_reported(self):
        system, delta = resolve_preset("E7:7A1")
        orbits = weyl_orbits(system, delta)
        of = orbits.orbit_of
        triple = next((i, j, system.root_sum(i, j))
                      for i in delta.complement() for j in delta.complement()
                      if system.root_sum(i, j) is not None and system.root_sum(i, j) not in delta
                      and of[system.root_sum(i, j)] not in (of[i], of[j]))
        ring = ModularRing(4)
        assignment = {o: Ideal.unit(ring) for o, m in enumerate(orbits.orbits) if m[0] not in delta}
        assignment[of[triple[2]]] = Ideal(ring, (2,))
        with self.assertRaises(NetViolation) as ctx:
            net_from_orbit_ideals(system, delta, assignment, ring=ring)
        self.assertTrue(ctx.exception.violations)

    def test_json(self):
        net = constant_net(self.system, self.delta, Ideal(ModularRing(4), (2,)))
        again = net_from_json(net.to_json())
        self.assertTrue(all(a.equals(b) for a, b in zip(net.sigma, again.sigma)))

    def test_lprime_contains_brackets(self):
        ring = ModularRing(4)
        net = constant_net(self.system, self.delta, Ideal(ring, (2,)))
        algebra = algebra_for(self.system)
        gamma = self.delta.complement()[0]
        beta = next(b for b in self.delta.roots if self.system.root_sum(gamma, b) is not None)
        v = bracket(algebra.e(gamma, ring, 2), algebra.e(beta, ring))
        self.assertTrue(in_subalgebra(v, SubalgebraDescriptor.L_prime_sigma(net)))
        self.assertTrue(in_subalgebra(v, SubalgebraDescriptor.L_sigma(net)))
        self.assertFalse(in_subalgebra(algebra.e(gamma, ring), SubalgebraDescriptor.L_sigma(net)))

    def test_lprime_module_stays_in_ideal_outside_delta(self):
        ring = ModularRing(4)
        net = constant_net(self.system, self.delta, Ideal(ring, (2,)))
        algebra = algebra_for(self.system)
        module = lprime_module(net, algebra)
        self.assertIs(lprime_module(net, algebra), module)
        for gamma in self.delta.complement():
            self.assertIn(algebra.e(gamma, ring, 2), module)
            self.assertNotIn(algebra.e(gamma, ring), module)
        for beta in self.delta.roots:
            self.assertIn(algebra.e(beta, ring), module)

    def test_lprime_module_cached_per_algebra(self):
        ring = ModularRing(4)
        net = constant_net(self.system, self.delta, Ideal(ring, (2,)))
        shared, fresh = algebra_for(self.system), ChevalleyAlgebra(self.system)
        module = lprime_module(net, fresh)
        self.assertIs(lprime_module(net, fresh), module)
        self.assertIsNot(lprime_module(net, shared), module)
        self.assertIs(module.algebra, fresh)
        self.assertEqual(list(fresh.lprime_modules), [net])


if __name__ == '__main__':
    unittest.main()
