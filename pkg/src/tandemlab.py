"""
Tandems, bitandems with parameter, the special bitandem, the U' reduction step
and the extraction of a U' tandem over a field.
"""
import logging
import os
import sys
from dataclasses import dataclass
from functools import cached_property

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from chevalgebra import LieVector, algebra_for, bracket, in_parabolic_algebra
from chevgroup import (PreconditionViolation, act, commutator, conjugate, identity, in_S_sigma,
                       random_element, random_parameter, root_element, u_prime_coordinates, weyl_lift)
from exactrings import (ChevlabError, IntegerRing, ModularRing, PolynomialRing, RingElement,
                        RingMismatch, UnsupportedRing, element_to_json, enumerate_elements,
                        ideal_contains)
from rootsys import weyl_word
from starcond import NotOrthogonal, PairFunctional, PairNotAdmissible, is_admissible

logger = logging.getLogger(__name__)


class TandemError(ChevlabError):
    pass


class DecompositionFailure(TandemError):
    pass


class NoWitness(TandemError):
    pass


class Tandem:
    """(g, l) = (h x_alpha(xi) h^-1, h.(xi e_alpha)), computed from the provenance on demand."""

    def __init__(self, h, alpha, xi):
        self.h = h
        self.alpha = h.system.idx(alpha)
        self.xi = xi

    @property
    def algebra(self):
        return self.h.algebra

    @property
    def ring(self):
        return self.h.ring

    @cached_property
    def g(self):
        return conjugate(self.h, root_element(self.algebra, self.alpha, self.xi))

    @cached_property
    def l(self):
        return act(self.h, self.algebra.e(self.alpha, self.ring, self.xi))

    def __eq__(self, other):
        return isinstance(other, Tandem) and self.g == other.g and self.l == other.l

    __hash__ = None

    def to_json(self):
        roots = self.h.system.roots
        return {"h": self.h.to_json(), "alpha": roots[self.alpha].to_json(),
                "xi": element_to_json(self.xi), "l": self.l.to_json()}


def make_tandem(h, alpha, xi):
    if xi.ring != h.ring:
        raise RingMismatch(f"{xi.ring} vs {h.ring}")
    return Tandem(h, alpha, xi)


def random_tandem(algebra, ring, rng, max_length=6):
    h = random_element(algebra, ring, rng, rng.randint(0, max_length))
    alpha = rng.randrange(algebra.num_roots)
    return make_tandem(h, alpha, random_parameter(ring, rng))


def tandem_action_holds(g, l, beta):
    """g.e_beta == e_beta + [l, e_beta] - l^-beta * l."""
    algebra, ring = g.algebra, g.ring
    b = algebra.system.idx(beta)
    e_beta = algebra.e(b, ring)
    rhs = e_beta + bracket(l, e_beta) - l.scale(l.coefficient(algebra.system.negation[b]))
    return act(g, e_beta) == rhs


def verify_tandem_action(T, beta):
    return tandem_action_holds(T.g, T.l, beta)


def verify_formula_sharp(system):
    """
    x_alpha(xi).v == v + xi [e_alpha, v] - xi^2 v^-alpha e_alpha for every root,
    with xi and the coordinates of v as independent integer polynomial variables.
    """
    algebra = algebra_for(system)
    names = ("xi",) + tuple(f"v{p + 1}" for p in range(algebra.dim))
    ring = PolynomialRing(IntegerRing(), names)
    xi = ring.gen("xi")
    v = algebra.vector(ring, {p: ring.gen(names[p + 1]) for p in range(algebra.dim)})
    for alpha in range(algebra.num_roots):
        lhs = act(root_element(algebra, alpha, xi), v)
        minus = system.negation[alpha]
        rhs = (v + bracket(algebra.e(alpha, ring), v).scale(xi)
               - algebra.e(alpha, ring).scale(xi * xi * v.coefficient(minus)))
        if lhs != rhs:
            logger.warning(f"{system.label}: x_alpha(xi) action differs from the formula at {system.roots[alpha]}")
            return False
    logger.info(f"{system.label}: root element action formula holds for all {algebra.num_roots} roots")
    return True


class BitandemWithParameter:
    """
    g(t) = h x_a1(t xi) x_a2(t zeta) h^-1, l(t) = t h.(xi e_a1 + zeta e_a2).
    Raises:
        NotOrthogonal
    """

    def __init__(self, h, alpha1, alpha2, xi, zeta):
        system = h.system
        self.h = h
        self.alpha1, self.alpha2 = system.idx(alpha1), system.idx(alpha2)
        if system.gram[self.alpha1, self.alpha2] != 0:
            raise NotOrthogonal(f"{system.roots[self.alpha1]} and {system.roots[self.alpha2]} are not orthogonal")
        self.xi, self.zeta = xi, zeta

    @property
    def algebra(self):
        return self.h.algebra

    @property
    def ring(self):
        return self.h.ring

    def g(self, t):
        t = self.ring.element(t)
        inner = (root_element(self.algebra, self.alpha1, t * self.xi)
                 * root_element(self.algebra, self.alpha2, t * self.zeta))
        return conjugate(self.h, inner)

    def l(self, t=1):
        t = self.ring.element(t)
        algebra, ring = self.algebra, self.ring
        base = algebra.e(self.alpha1, ring, self.xi) + algebra.e(self.alpha2, ring, self.zeta)
        return act(self.h, base).scale(t)

    @cached_property
    def parameter_ring(self):
        if not isinstance(self.ring, (IntegerRing, ModularRing)):
            raise UnsupportedRing(f"Symbolic bitandem action over {self.ring} is not supported")
        return PolynomialRing(self.ring, ("t",))

    def act_symbolic(self, v):
        """g(t).v as a vector over base[t]: h^-1 over the base, then the t-factors, then h."""
        algebra, poly = self.algebra, self.parameter_ring
        u = act(self.h.inverse(), v)
        u = algebra.vector(poly, {p: poly.normalize(int(x)) for p, x in u.coeffs.items()})
        t = poly.gen("t")
        zeta = RingElement(poly, poly.normalize(int(self.zeta.payload)))
        xi = RingElement(poly, poly.normalize(int(self.xi.payload)))
        u = act(root_element(algebra, self.alpha2, t * zeta), u)
        u = act(root_element(algebra, self.alpha1, t * xi), u)
        h_matrix = np.empty(self.h.matrix.shape, dtype=object)
        for k, x in enumerate(self.h.matrix.flat):
            h_matrix.flat[k] = int(x)
        image = poly.normalize_array(h_matrix @ u.to_array())
        return LieVector(algebra, poly, {p: x for p, x in enumerate(image)})


def special_bitandem(T, alpha1, alpha2):
    """
    The family g(x_a1(t l^-a2) x_a2(-t l^-a1)) g^-1 read off a tandem (g, l).
    Raises:
        NotOrthogonal
    """
    system = T.h.system
    a1, a2 = system.idx(alpha1), system.idx(alpha2)
    xi = T.l.coefficient(system.negation[a2])
    zeta = -T.l.coefficient(system.negation[a1])
    return BitandemWithParameter(T.g, a1, a2, xi, zeta)


def _split_by_t(payload):
    """{degree: integer coefficient} of a polynomial in t alone."""
    out = {}
    for (degree,), coeff in payload.terms():
        out[degree] = int(coeff)
    return out


def bitandem_quadratic_decomposition(B, v):
    """
    g(t).v = v + t [l, v] + t^2 w; returns ([l, v], w) over the base ring.
    Raises:
        DecompositionFailure: a t^3 term appears, or an identity check fails.
    """
    algebra, ring = B.algebra, B.ring
    image = B.act_symbolic(v)
    parts = {0: {}, 1: {}, 2: {}}
    for p, payload in image.coeffs.items():
        for degree, c in _split_by_t(payload).items():
            if degree > 2:
                raise DecompositionFailure(f"t^{degree} term in coordinate {algebra.basis_label(p)}")
            parts[degree][p] = c
    constant, linear, w = (algebra.vector(ring, parts[d]) for d in (0, 1, 2))
    if constant != v:
        raise DecompositionFailure("g(0).v differs from v")
    l = B.l(1)
    if linear != bracket(l, v):
        raise DecompositionFailure("t-coefficient differs from [l, v]")
    if w.scale(2) != bracket(l, bracket(l, v)):
        raise DecompositionFailure("2w differs from [l, [l, v]]")
    return linear, w


def u_prime_reduce(algebra, factors, beta, alpha1, alpha2, net=None):
    """
    Factors of [x_beta(1), prod x_gamma(xi)] for gammas in Sigma and varpi(beta) = 0.
    Each factor goes to x_(beta+gamma)(+-xi) when beta + gamma is a root and vanishes
    otherwise. Returns (root index, xi) pairs in root order.
    Raises:
        PreconditionViolation
    """
    system = algebra.system
    b = system.idx(beta)
    varpi = PairFunctional(system, alpha1, alpha2)
    if varpi(b) != 0:
        raise PreconditionViolation(f"varpi({system.roots[b]}) = {varpi(b)}, expected 0")
    roots = [system.idx(gamma) for gamma, _ in factors]
    if len(set(roots)) != len(roots) or any(varpi(g) != 2 for g in roots):
        raise PreconditionViolation("Factor roots must be distinct roots of Sigma")
    if not factors:
        return []
    ring = factors[0][1].ring
    if net is not None:
        if b not in net.delta:
            raise PreconditionViolation(f"{system.roots[b]} is not in Delta")
        for g, (_, xi) in zip(roots, factors):
            if not ideal_contains(net.ideal_of(g), xi):
                raise PreconditionViolation(f"{xi} is not in sigma at {system.roots[g]}")

    product = identity(algebra, ring)
    for g, (_, xi) in zip(roots, factors):
        product = product * root_element(algebra, g, xi)
    reduced = commutator(root_element(algebra, b, ring.one), product)
    coordinates = u_prime_coordinates(reduced, alpha1, alpha2)
    if coordinates is None:
        raise PreconditionViolation("Commutator left U'")
    return sorted(coordinates.items())


@dataclass
class Extraction:
    case: int
    t: object
    tandem: Tandem
    target: int
    coefficient: RingElement
    uprime: dict = None

    def to_json(self):
        roots = self.tandem.h.system.roots
        return {"case": self.case,
                "t": None if self.t is None else element_to_json(self.t),
                "target": roots[self.target].to_json(),
                "coefficient": element_to_json(self.coefficient),
                "in_uprime": self.uprime is not None,
                "tandem": self.tandem.to_json()}


def _t_candidates(ring):
    if ring.is_finite:
        return [x for x in enumerate_elements(ring) if not x.is_zero()]
    # a nonzero polynomial of degree <= 2 has a non-root among three values
    return [ring.element(k) for k in (1, 2, 3)]


def extract_to_Uprime(T, gamma, alpha1, alpha2, t=None, delta=None):
    """
    Case 1 (l^-a1 = 0): g1 = g x_a1(1) g^-1, result (g1 x_a2(1) g1^-1, g1.e_a2).
    Case 2: special bitandem g1(t); result (g1(t) x_a1(1) g1(t)^-1, g1(t).e_a1),
    with t searched for a nonzero coefficient at gamma + a1 + a2 unless given.
    Raises:
        PairNotAdmissible, PreconditionViolation, NoWitness
    """
    system, algebra, ring = T.h.system, T.algebra, T.ring
    g, a1, a2 = system.idx(gamma), system.idx(alpha1), system.idx(alpha2)
    if system.gram[a1, a2] != 0:
        raise NotOrthogonal(f"{system.roots[a1]} and {system.roots[a2]} are not orthogonal")
    if system.gram[g, a1] != -1 or system.gram[g, a2] != -1:
        raise PreconditionViolation(f"<gamma, a_i> must be -1 for {system.roots[g]}")
    if delta is not None and not is_admissible(system, delta, a1, a2):
        raise PairNotAdmissible(f"({system.roots[a1]}, {system.roots[a2]}) is not admissible")
    target = system.root_sum(system.root_sum(g, a1), a2)

    if T.l.coefficient(system.negation[a1]).is_zero():
        g1 = conjugate(T.g, root_element(algebra, a1, ring.one))
        result = make_tandem(g1, a2, ring.one)
        coefficient = result.l.coefficient(target)
        return Extraction(1, None, result, target, coefficient, u_prime_coordinates(result.g, a1, a2))

    B = special_bitandem(T, a1, a2)
    candidates = [ring.element(t)] if t is not None else _t_candidates(ring)
    for value in candidates:
        result = make_tandem(B.g(value), a1, ring.one)
        coefficient = result.l.coefficient(target)
        if t is not None or not coefficient.is_zero():
            return Extraction(2, value, result, target, coefficient, u_prime_coordinates(result.g, a1, a2))
    logger.warning(f"No t in {ring} gives a nonzero coefficient at {system.roots[target]}")
    raise NoWitness(f"Every t in {ring} is a root of the target polynomial")


def retarget_tandem(T, beta):
    """
    Same (g, l) with provenance root beta: h' = h n with n a product of Weyl lifts,
    n.e_beta = c e_alpha and xi' = c xi.
    """
    system, algebra, ring = T.h.system, T.algebra, T.ring
    b = system.idx(beta)
    n = identity(algebra, ring)
    for s in weyl_word(system, b, T.alpha):
        n = weyl_lift(algebra, s, ring) * n
    image = act(n, algebra.e(b, ring))
    c = image.coefficient(T.alpha)
    if image != algebra.e(T.alpha, ring, c) or not c.is_unit():
        raise TandemError(f"Weyl lift does not carry {system.roots[b]} onto {system.roots[T.alpha]}")
    return make_tandem(T.h * n, b, T.xi * c)


def in_transporter(g, net):
    """g and g^-1 conjugate every generator x_alpha(xi) of E(sigma) into S(sigma)."""
    algebra = g.algebra
    g_inv = g.inverse()
    for p in range(algebra.num_roots):
        for xi in net.ideal_of(p).generators:
            for h in (g, g_inv):
                if not in_S_sigma(make_tandem(h, p, xi).g, net):
                    return False
    return True


def in_parabolic_vector(v, alpha1, alpha2):
    """l in L_(a1,a2)."""
    system = v.algebra.system
    return in_parabolic_algebra(v, system, system.idx(alpha1), system.idx(alpha2))
