import itertools
import random
import unittest

from exactrings import (DualNumbers, Ideal, IntegerLattice, IntegerRing, InfiniteRing, ModularRing,
                        NotInvertible, PolynomialRing, RingMismatch, Submodule, UnsupportedRing,
                        element_from_json, element_to_json, enumerate_elements, enumerate_ideals,
                        ideal_contains, ideal_product, ideal_sum, parse_ring, reduce_mod, ring_from_json)


class TestIntegerLattice(unittest.TestCase):

    def test_membership(self):
        lattice = IntegerLattice(2, [[2, 0], [0, 3]])
        self.assertIn([4, 6], lattice)
        self.assertNotIn([1, 0], lattice)
        self.assertEqual(lattice.rank, 2)

    def test_gcd_combination(self):
        lattice = IntegerLattice(1, [[4]])
        self.assertTrue(lattice.add([6]))
        self.assertIn([2], lattice)
        self.assertFalse(lattice.add([8]))

    def test_negative_entries(self):
        lattice = IntegerLattice(2, [[6, 1]])
        self.assertTrue(lattice.add([-4, 0]))
        for vec in ([2, 1], [0, 2], [-4, 0]):
            self.assertIn(vec, lattice)
        self.assertNotIn([1, 0], lattice)
        self.assertNotIn([0, 1], lattice)


class TestRings(unittest.TestCase):

    def setUp(self):
        self.Z = IntegerRing()
        self.Z4 = ModularRing(4)
        self.D3 = DualNumbers(ModularRing(3))

    def test_modular_arithmetic(self):
        x = self.Z4.element(3)
        self.assertEqual(x + x, self.Z4.element(2))
        self.assertEqual(x * x, self.Z4.one)
        self.assertEqual(x.inverse(), x)
        with self.assertRaises(NotInvertible):
            self.Z4.element(2).inverse()

    def test_dual_numbers(self):
        eps = self.D3.epsilon
        self.assertTrue((eps * eps).is_zero())
        u = self.D3.one + eps
        self.assertEqual(u.inverse(), self.D3.element((1, 2)))
        self.assertFalse(eps.is_unit())
        self.assertEqual(self.D3.cardinality, 9)

    def test_mixed_rings_raise(self):
        with self.assertRaises(RingMismatch):
            self.Z4.one + ModularRing(3).one

    def test_infinite_enumeration_raises(self):
        with self.assertRaises(InfiniteRing):
            enumerate_elements(self.Z)

    def test_polynomial_coefficients(self):
        R = PolynomialRing(self.Z, ("t", "x"))
        t, x = R.gens()
        p = t * t * x + 3 * t + 1
        self.assertEqual(R.degree(p, "t"), 2)
        self.assertEqual(R.coefficient(p, "t", 1), R.element(3))
        self.assertEqual(R.coefficient(p, "t", 2), x)

    def test_parse_ring(self):
        self.assertEqual(parse_ring("int"), self.Z)
        self.assertEqual(parse_ring("mod:4"), self.Z4)
        self.assertEqual(parse_ring("dual:mod:3"), self.D3)
        self.assertEqual(parse_ring("poly:int:x,y"), PolynomialRing(self.Z, ("x", "y")))
        with self.assertRaises(UnsupportedRing):
            parse_ring("gf:9")

    def test_json_descriptors(self):
        for ring in (self.Z, self.Z4, self.D3, PolynomialRing(self.Z4, ("t",))):
            self.assertEqual(ring_from_json(ring.to_json()), ring)
        x = self.D3.element((2, 1))
        self.assertEqual(element_from_json(self.D3, element_to_json(x)), x)


class TestRingLaws(unittest.TestCase):

    def _small_rings(self):
        rings = [ModularRing(n) for n in range(2, 17)]
        return rings + [DualNumbers(ModularRing(n)) for n in (2, 3, 4)]

    def test_ring_axioms(self):
        for R in self._small_rings():
            elements = list(enumerate_elements(R))
            self.assertLessEqual(len(elements), 16)
            for a, b in itertools.product(elements, repeat=2):
                self.assertEqual(a + b, b + a, R)
                self.assertEqual(a * b, b * a, R)
            for a, b, c in itertools.product(elements, repeat=3):
                self.assertEqual((a + b) + c, a + (b + c), R)
                self.assertEqual((a * b) * c, a * (b * c), R)
                self.assertEqual(a * (b + c), a * b + a * c, R)

    def test_reduce_mod_is_a_homomorphism(self):
        for R in (ModularRing(12), DualNumbers(ModularRing(3))):
            elements = list(enumerate_elements(R))
            for I in enumerate_ideals(R):
                if I.is_unit():
                    continue
                rho = lambda x: reduce_mod(x, I)
                self.assertEqual(rho(R.one), rho(R.one) * rho(R.one))
                for a, b in itertools.product(elements, repeat=2):
                    self.assertEqual(rho(a + b), rho(a) + rho(b), (R, I))
                    self.assertEqual(rho(a * b), rho(a) * rho(b), (R, I))
                    self.assertEqual(rho(a) == rho(b), ideal_contains(I, a - b), (R, I))

    def test_ideal_closure(self):
        rng = random.Random(3)
        for R in (ModularRing(12), DualNumbers(ModularRing(4))):
            elements = list(enumerate_elements(R))
            for I in enumerate_ideals(R):
                members = list(I.elements())
                for _ in range(200):
                    a, b, r = rng.choice(members), rng.choice(members), rng.choice(elements)
                    self.assertTrue(ideal_contains(I, a + b))
                    self.assertTrue(ideal_contains(I, r * a))
                    self.assertTrue(ideal_contains(I, -a))


class TestIdeals(unittest.TestCase):

    def test_integer_membership(self):
        Z = IntegerRing()
        I = Ideal(Z, (6,))
        self.assertTrue(ideal_contains(I, 12))
        self.assertFalse(ideal_contains(I, 4))
        self.assertTrue(ideal_sum(I, Ideal(Z, (4,))).equals(Ideal(Z, (2,))))
        self.assertTrue(ideal_product(I, Ideal(Z, (4,))).equals(Ideal(Z, (24,))))

    def test_ideals_of_z_mod_n(self):
        self.assertEqual(len(enumerate_ideals(ModularRing(4))), 3)
        self.assertEqual(len(enumerate_ideals(ModularRing(6))), 4)
        self.assertTrue(enumerate_ideals(ModularRing(4))[0].is_unit())

    def test_ideals_of_dual_numbers(self):
        ideals = enumerate_ideals(DualNumbers(ModularRing(2)))
        self.assertEqual([len(I.elements()) for I in ideals], [4, 2, 1])

    def test_reduce_mod(self):
        Z = IntegerRing()
        self.assertEqual(reduce_mod(Z.element(7), Ideal(Z, (3,))), ModularRing(3).element(1))
        Z6 = ModularRing(6)
        self.assertEqual(reduce_mod(Z6.element(5), Ideal(Z6, (2,))), ModularRing(2).one)

    def test_polynomial_membership_is_refused(self):
        R = PolynomialRing(IntegerRing(), ("x",))
        x = R.gen("x")
        self.assertTrue(ideal_contains(Ideal.unit(R), x))
        with self.assertRaises(UnsupportedRing):
            ideal_contains(Ideal(R, (x,)), x * x)


class TestSubmodule(unittest.TestCase):

    def test_modular_submodule(self):
        M = Submodule(ModularRing(4), 2)
        self.assertTrue(M.add([2, 0]))
        self.assertFalse(M.add([6, 0]))
        self.assertIn([0, 0], M)
        self.assertIn([2, 0], M)
        self.assertNotIn([1, 0], M)
        self.assertNotIn([0, 2], M)


if __name__ == '__main__':
    unittest.main()
