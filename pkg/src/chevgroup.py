"""
Elements of the adjoint Chevalley group G(Phi, R) as matrices acting on the
Chevalley basis of L(Phi, R), with the word of root elements that built them.
"""
import logging
import os
import sys
from dataclasses import dataclass, field

import numpy as np
from sympy import Matrix

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from chevalgebra import LieVector, algebra_for
from exactrings import (ChevlabError, DualNumbers, Ideal, IntegerRing, ModularRing, RingElement,
                        RingMismatch, UnsupportedRing, element_from_json, element_to_json,
                        enumerate_elements, ideal_contains, quotient_map, ring_from_json)
from rootsys import Root, build_system
from starcond import PairNotAdmissible, is_admissible, sigma_set

logger = logging.getLogger(__name__)


class GroupError(ChevlabError):
    pass


class ReductionMismatch(GroupError):
    pass


class PreconditionViolation(GroupError):
    pass


class MissingWord(GroupError):
    pass


def _lift(ring, int_array):
    """Integer matrix -> canonical payload matrix over ring."""
    if ring.array_dtype is object:
        return ring.normalize_array(int_array.astype(object))
    return ring.normalize_array(int_array.astype(ring.array_dtype))


def _all_zero(ring, arr):
    if arr.dtype != object:
        return not arr.any()
    return all(ring.is_zero_payload(x) for x in arr.flat)


class GroupElement:
    """
    matrix[:, p] is the image of basis vector p. word is a list of
    (root index, RingElement) factors whose product is the element.
    """

    def __init__(self, algebra, ring, matrix, word=None):
        self.algebra = algebra
        self.ring = ring
        self.matrix = matrix
        self.word = list(word) if word is not None else None

    @property
    def system(self):
        return self.algebra.system

    def __mul__(self, other):
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        product = self.ring.normalize_array(self.matrix @ other.matrix)
        word = self.word + other.word if self.word is not None and other.word is not None else None
        return GroupElement(self.algebra, self.ring, product, word)

    def inverse(self):
        """The reversed word with negated parameters.
        Raises:
            MissingWord: the element carries no word.
        """
        if self.word is None:
            raise MissingWord("Cannot invert a group element without its word")
        result = identity(self.algebra, self.ring)
        for root, xi in reversed(self.word):
            result = result * root_element(self.algebra, root, -xi)
        return result

    def act(self, v):
        return act(self, v)

    def __eq__(self, other):
        return (isinstance(other, GroupElement) and other.ring == self.ring
                and bool(np.all(self.matrix == other.matrix)))

    __hash__ = None

    def is_identity(self):
        return self == identity(self.algebra, self.ring)

    def to_json(self, emit_matrix=False):
        roots = self.system.roots
        data = {"system": self.system.label, "ring": self.ring.to_json(),
                "word": None if self.word is None else
                [["root", roots[r].to_json(), element_to_json(xi)] for r, xi in self.word]}
        if emit_matrix:
            data["matrix"] = [[element_to_json(self.ring.element(x)) for x in row] for row in self.matrix]
        return data

    def __repr__(self):
        length = "?" if self.word is None else len(self.word)
        return f"GroupElement({self.system.label}, {self.ring}, word length {length})"


def group_element_from_json(data, ring=None):
    algebra = algebra_for(build_system(data["system"]))
    ring = ring or ring_from_json(data["ring"])
    result = identity(algebra, ring)
    for _, coords, xi in data["word"]:
        result = result * root_element(algebra, Root(coords), element_from_json(ring, xi))
    return result


def identity(algebra, ring):
    return GroupElement(algebra, ring, _lift(ring, np.eye(algebra.dim, dtype=np.int64)), [])


def root_element(algebra, alpha, xi):
    """
    x_alpha(xi) = exp(xi ad e_alpha) = 1 + xi A + xi^2 A^2 / 2 with A = ad e_alpha.
    """
    p = algebra.system.idx(alpha)
    ring = xi.ring
    A = algebra.ad_matrices[p]
    half_square = (A @ A) // 2
    if ring.array_dtype is object:
        xi_p = xi.payload
        matrix = (np.eye(algebra.dim, dtype=np.int64).astype(object) + A.astype(object) * xi_p
                  + half_square.astype(object) * (xi_p * xi_p))
    else:
        x = int(xi.payload)
        matrix = np.eye(algebra.dim, dtype=np.int64) + x * A + (x * x % ring.n) * half_square
    return GroupElement(algebra, ring, ring.normalize_array(matrix), [(p, xi)])


def act(g, v):
    """
    Raises:
        RingMismatch
    """
    if v.ring != g.ring:
        raise RingMismatch(f"Group element over {g.ring} acting on a vector over {v.ring}")
    image = g.ring.normalize_array(g.matrix @ v.to_array())
    return LieVector(g.algebra, g.ring, {p: x for p, x in enumerate(image)})


def weyl_lift(algebra, alpha, ring, u=None):
    """w_alpha(u) = x_alpha(u) x_-alpha(-u^-1) x_alpha(u); u defaults to 1."""
    p = algebra.system.idx(alpha)
    u = ring.one if u is None else ring.element(u)
    minus = algebra.system.negation[p]
    return (root_element(algebra, p, u) * root_element(algebra, minus, -u.inverse())
            * root_element(algebra, p, u))


def torus_element(algebra, alpha, u):
    """h_alpha(u) = w_alpha(u) w_alpha(1)^-1 for a unit u."""
    ring = u.ring
    return weyl_lift(algebra, alpha, ring, u) * weyl_lift(algebra, alpha, ring).inverse()


def commutator(x, y):
    """[x, y] = x y x^-1 y^-1."""
    return x * y * x.inverse() * y.inverse()


def conjugate(h, g):
    """h g h^-1."""
    return h * g * h.inverse()


def reduce_element(g, I):
    """
    Entrywise reduction modulo I.
    Raises:
        UnsupportedQuotient
    """
    if I.ring != g.ring:
        raise RingMismatch(f"Ideal of {I.ring} applied to an element over {g.ring}")
    target, project = quotient_map(I)
    flat = [target.normalize(project(x)) for x in g.matrix.flat]
    matrix = np.empty(g.matrix.shape, dtype=target.array_dtype)
    for k, x in enumerate(flat):
        matrix.flat[k] = x
    word = None
    if g.word is not None:
        word = [(r, RingElement(target, target.normalize(project(xi.payload)))) for r, xi in g.word]
    return GroupElement(g.algebra, target, matrix, word)


def in_congruence_subgroup(g, I):
    return reduce_element(g, I).is_identity()


def in_S_sigma(g, net):
    """
    g and g^-1 carry every xi e_alpha (xi an ideal generator of sigma_alpha) into L(sigma).
    Raises:
        UnsupportedRing: ideal membership undecidable over g.ring.
    """
    ring = g.ring
    if ring != net.ring:
        raise RingMismatch(f"{ring} vs {net.ring}")
    m = g.algebra.num_roots
    for element in (g, g.inverse()):
        matrix = element.matrix
        for p in range(m):
            for xi in net.ideal_of(p).generators:
                column = matrix[:m, p]
                for q in range(m):
                    entry = column[q]
                    if ring.is_zero_payload(entry):
                        continue
                    if not ideal_contains(net.ideal_of(q), RingElement(ring, ring.normalize(entry * xi.payload))):
                        return False
    return True


def in_parabolic(g, alpha1, alpha2):
    """g and g^-1 stabilise D + sum of e_gamma with varpi(gamma) >= 0."""
    system = g.system
    a1, a2 = system.idx(alpha1), system.idx(alpha2)
    values = system.gram[a1] + system.gram[a2]
    m = g.algebra.num_roots
    negative = [q for q in range(m) if values[q] < 0]
    stable = [q for q in range(m) if values[q] >= 0] + list(range(m, g.algebra.dim))
    for element in (g, g.inverse()):
        if not _all_zero(g.ring, element.matrix[np.ix_(negative, stable)]):
            return False
    return True


@dataclass
class LevelReport:
    """levels[orbit id] is the set {xi : x_gamma(xi) in S(sigma)} as an Ideal."""
    net: object
    levels: dict = field(default_factory=dict)
    exact: bool = True

    def matches_net(self):
        return all(self.levels[oid].equals(self.net.sigma[oid]) for oid in self.levels)

    def to_json(self):
        roots = self.net.system.roots
        return {"exact": self.exact,
                "orbits": [{"representative": roots[self.net.orbits.representative(oid)].to_json(),
                            "level": ideal.to_json(), "sigma": self.net.sigma[oid].to_json()}
                           for oid, ideal in sorted(self.levels.items())]}


def level_of_S(net, algebra=None):
    """
    Exhaustive level of S(sigma) on one representative per orbit.
    Raises:
        InfiniteRing
    """
    algebra = algebra or algebra_for(net.system)
    elements = list(enumerate_elements(net.ring))
    report = LevelReport(net)
    for oid in range(len(net.orbits)):
        gamma = net.orbits.representative(oid)
        members = [xi for xi in elements if in_S_sigma(root_element(algebra, gamma, xi), net)]
        report.levels[oid] = Ideal(net.ring, tuple(members)).normalized()
    logger.info(f"Level of S(sigma) over {net.ring}: "
                f"{'matches' if report.matches_net() else 'differs from'} sigma")
    return report


def u_prime_coordinates(g, alpha1, alpha2):
    """
    Coordinates xi_gamma (gamma in Sigma) with g = prod x_gamma(xi_gamma), or None
    when g is not in U'. Read off g.h_j - h_j for a simple root with <gamma, a_j> = +-1.
    """
    system, algebra, ring = g.system, g.algebra, g.ring
    m = algebra.num_roots
    coordinates = {}
    for gamma in sigma_set(system, alpha1, alpha2):
        pairings = [int(system.gram[gamma, s]) for s in system.simple_roots]
        j = next((k for k, c in enumerate(pairings) if abs(c) == 1), None)
        if j is None:
            raise GroupError(f"No simple root at +-1 with {system.roots[gamma]}")
        entry = RingElement(ring, ring.normalize(g.matrix[gamma, m + j]))
        xi = entry * (-pairings[j])
        if not xi.is_zero():
            coordinates[gamma] = xi
    rebuilt = identity(algebra, ring)
    for gamma, xi in coordinates.items():
        rebuilt = rebuilt * root_element(algebra, gamma, xi)
    return coordinates if rebuilt == g else None


def elementary_generators(net, algebra=None):
    """x_alpha(xi) for every root and every ideal generator of sigma_alpha."""
    algebra = algebra or algebra_for(net.system)
    return [root_element(algebra, p, xi)
            for p in range(algebra.num_roots) for xi in net.ideal_of(p).generators]


def determinant_is_unit(g):
    ring = g.ring
    if isinstance(ring, (IntegerRing, ModularRing)):
        det = Matrix([[int(x) for x in row] for row in g.matrix]).det(method='bareiss')
        return ring.element(int(det)).is_unit()
    if isinstance(ring, DualNumbers):
        det = Matrix([[int(x.a) for x in row] for row in g.matrix]).det(method='bareiss')
        return ring.base.element(int(det)).is_unit()
    raise UnsupportedRing(f"Determinant test over {ring} is not supported")


@dataclass
class ReductionWitness:
    element: GroupElement
    target: int
    sign: int
    xi_bar: RingElement


def reduction_witness(h, gamma, alpha1, alpha2, I, delta=None):
    """
    From h with h = x_gamma(xi) modulo I, builds g2 = [g1, x_a1(1)] where
    g = h x_-a1(1) h^-1, l = h.e_-a1, g1 = g (x_a1(l^-a2) x_a2(-l^-a1)) g^-1.
    Modulo I, g2 is x_(gamma+a2)(+-xi).
    Raises:
        PairNotAdmissible: (-a1, a2) is not admissible in delta.
        PreconditionViolation: pairings wrong or h does not reduce to a root element.
        ReductionMismatch: g2 does not reduce as expected.
    """
    system, algebra, ring = h.system, h.algebra, h.ring
    gamma, a1, a2 = system.idx(gamma), system.idx(alpha1), system.idx(alpha2)
    minus_a1 = system.negation[a1]
    if system.gram[a1, a2] != 0 or system.gram[gamma, minus_a1] != -1 or system.gram[gamma, a2] != -1:
        raise PreconditionViolation("Need <gamma,-a1> = <gamma,a2> = -1 and a1 orthogonal to a2")
    if delta is not None and not is_admissible(system, delta, minus_a1, a2):
        raise PairNotAdmissible(f"({system.roots[minus_a1]}, {system.roots[a2]}) is not admissible")

    reduced = reduce_element(h, I)
    target_ring = reduced.ring
    moved = act(reduced, algebra.e(minus_a1, target_ring))
    n = algebra.constants(gamma, minus_a1)
    xi_bar = moved.coefficient(system.root_sum(gamma, minus_a1)) * n
    if reduced != root_element(algebra, gamma, xi_bar):
        raise PreconditionViolation(f"h does not reduce to a root element on {system.roots[gamma]}")

    g = conjugate(h, root_element(algebra, minus_a1, ring.one))
    l = act(h, algebra.e(minus_a1, ring))
    inner = (root_element(algebra, a1, l.coefficient(system.negation[a2]))
             * root_element(algebra, a2, -l.coefficient(minus_a1)))
    g1 = conjugate(g, inner)
    g2 = commutator(g1, root_element(algebra, a1, ring.one))

    target = system.root_sum(gamma, a2)
    image = reduce_element(g2, I)
    for sign in (1, -1):
        if image == root_element(algebra, target, xi_bar * sign):
            logger.debug(f"Reduction witness lands on {system.roots[target]} with sign {sign}")
            return ReductionWitness(g2, target, sign, xi_bar)
    raise ReductionMismatch(f"g2 does not reduce to x_{system.roots[target]}(+-{xi_bar})")


def random_parameter(ring, rng):
    """Seeded ring element: uniform over a finite ring, from -2..2 over Z."""
    if ring.is_finite:
        return rng.choice(list(enumerate_elements(ring)))
    return ring.element(rng.randint(-2, 2))


def random_element(algebra, ring, rng, length, roots=None):
    """Product of `length` root elements with seeded roots and parameters."""
    pool = list(range(algebra.num_roots)) if roots is None else [algebra.system.idx(r) for r in roots]
    g = identity(algebra, ring)
    for _ in range(length):
        g = g * root_element(algebra, rng.choice(pool), random_parameter(ring, rng))
    return g
