"""
Chevalley basis of L(Phi, R), structure constants, the bracket, nets of ideals
and the subalgebras L(sigma), L'(sigma) and L_{a1,a2}.

Basis order: e_alpha for every root in RootSystem order, then h_1, ..., h_rank.
"""
import itertools
import logging
import os
import sys
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from exactrings import (ChevlabError, Ideal, RingElement, RingMismatch, Submodule, element_from_json,
                        element_to_json, enumerate_elements, enumerate_ideals, ideal_contains,
                        ideal_product, ring_from_json)
from rootsys import Root, build_system, perp, subsystem_closure, weyl_orbits

logger = logging.getLogger(__name__)


class AlgebraError(ChevlabError):
    pass


class NetViolation(AlgebraError):
    """Raised with every failed inclusion sigma_a sigma_b <= sigma_{a+b}."""

    def __init__(self, violations):
        self.violations = violations
        alpha, beta = violations[0]
        super().__init__(f"sigma_a sigma_b is not inside sigma_(a+b) for a = {alpha}, b = {beta}"
                         f" ({len(violations)} violation(s))")


class PerpNonEmpty(AlgebraError):
    pass


@dataclass(frozen=True)
class StructureConstants:
    """N[i, j] for root indices; zero unless root_i + root_j is a root."""
    system: object
    table: np.ndarray = field(compare=False, repr=False)

    def __call__(self, i, j):
        return int(self.table[i, j])

    def flipped(self, i, j):
        """Copy with the single entry N[i, j] negated."""
        table = self.table.copy()
        table[i, j] = -table[i, j]
        return StructureConstants(self.system, table)


def _asymmetry_exponents(system):
    rank = system.rank
    gram = system.gram
    simple = system.simple_roots
    exps = np.zeros((rank, rank), dtype=np.int64)
    for i in range(rank):
        exps[i, i] = 1
        for j in range(i + 1, rank):
            if gram[simple[i], simple[j]] == -1:
                exps[i, j] = 1
    return exps


def compute_structure_constants(system):
    """
    Signs from the bimultiplicative asymmetry function eps on the root lattice:
    eps(a_i, a_j) = -1 when i = j or (i < j and <a_i, a_j> = -1).

    N(a, b) = c_a c_b c_(a+b) eps(a, b) with c = +1 on positive and -1 on negative
    roots, so that [e_a, e_-a] = h_a holds together with the Jacobi identity.
    """
    exps = _asymmetry_exponents(system)
    coeffs = np.array(system.coefficients, dtype=np.int64)
    parity = (coeffs @ exps @ coeffs.T) % 2
    eps = 1 - 2 * parity
    sign = np.where(np.arange(len(system)) < system.num_positive, 1, -1)
    sums = system.sum_table
    table = np.zeros((len(system), len(system)), dtype=np.int64)
    rows, cols = np.nonzero(sums >= 0)
    table[rows, cols] = sign[rows] * sign[cols] * sign[sums[rows, cols]] * eps[rows, cols]
    logger.debug(f"{system.label}: {len(rows)} nonzero structure constants")
    return StructureConstants(system, table)


class ChevalleyAlgebra:
    """The Chevalley basis of L(Phi, Z) and its integer bracket."""

    def __init__(self, system, constants=None):
        self.system = system
        self.constants = constants if constants is not None else compute_structure_constants(system)
        self.num_roots = len(system)
        self.rank = system.rank
        self.dim = self.num_roots + self.rank
        self._simple_gram = system.gram[:, system.simple_roots]
        # net -> LPrimeModule
        self.lprime_modules = {}

    def __repr__(self):
        return f"ChevalleyAlgebra({self.system.label}, dim={self.dim})"

    def basis_label(self, p):
        if p < self.num_roots:
            return self.system.roots[p].to_json()
        return f"h{p - self.num_roots + 1}"

    def basis_bracket(self, p, q):
        """[b_p, b_q] as a list of (basis index, integer coefficient)."""
        m = self.num_roots
        system = self.system
        if p < m and q < m:
            if q == system.negation[p]:
                return [(m + k, a) for k, a in enumerate(system.coefficients[p]) if a]
            s = int(system.sum_table[p, q])
            return [(s, self.constants(p, q))] if s >= 0 else []
        if p >= m and q >= m:
            return []
        if p >= m:
            c = int(self._simple_gram[q, p - m])
            return [(q, c)] if c else []
        c = -int(self._simple_gram[p, q - m])
        return [(p, c)] if c else []

    @cached_property
    def ad_matrices(self):
        """Integer matrices of ad(e_alpha), one per root, columns indexed by basis."""
        mats = []
        for p in range(self.num_roots):
            mat = np.zeros((self.dim, self.dim), dtype=np.int64)
            for q in range(self.dim):
                for r, c in self.basis_bracket(p, q):
                    mat[r, q] += c
            mats.append(mat)
        return mats

    def bracket_int(self, u, v):
        """Bracket of integer coefficient dicts."""
        out = {}
        for p, a in u.items():
            for q, b in v.items():
                for r, c in self.basis_bracket(p, q):
                    out[r] = out.get(r, 0) + a * b * c
        return {r: c for r, c in out.items() if c}

    # -- vectors -------------------------------------------------------
    def vector(self, ring, coeffs):
        return LieVector(self, ring, coeffs)

    def zero(self, ring):
        return LieVector(self, ring, {})

    def e(self, root, ring, coeff=1):
        return LieVector(self, ring, {self.system.idx(root): coeff})

    def h(self, k, ring, coeff=1):
        """h_k for the 1-based simple root position k."""
        return LieVector(self, ring, {self.num_roots + k - 1: coeff})

    def h_root(self, root, ring):
        """The coroot h_alpha expanded over h_1..h_rank."""
        i = self.system.idx(root)
        return LieVector(self, ring, {self.num_roots + k: a
                                      for k, a in enumerate(self.system.coefficients[i]) if a})

    def basis_vector(self, p, ring, coeff=1):
        return LieVector(self, ring, {p: coeff})

    def from_list(self, ring, payloads):
        return LieVector(self, ring, {p: x for p, x in enumerate(payloads)})


class LieVector:
    """
    Element of L(Phi, R) as a sparse map basis index -> nonzero canonical payload.
    """
    __slots__ = ("algebra", "ring", "coeffs")

    def __init__(self, algebra, ring, coeffs):
        self.algebra = algebra
        self.ring = ring
        clean = {}
        for p, x in coeffs.items():
            payload = _payload(ring, x)
            if not ring.is_zero_payload(payload):
                clean[int(p)] = payload
        self.coeffs = clean

    def _check(self, other):
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if other.algebra.system is not self.algebra.system:
            raise AlgebraError("Vectors belong to different root systems")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for p, x in other.coeffs.items():
            out[p] = out[p] + x if p in out else x
        return LieVector(self.algebra, self.ring, out)

    def __neg__(self):
        return LieVector(self.algebra, self.ring, {p: -x for p, x in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, xi):
        """xi * v for a RingElement or int xi."""
        factor = self.ring.element(xi).payload
        return LieVector(self.algebra, self.ring, {p: x * factor for p, x in self.coeffs.items()})

    __rmul__ = scale

    def __eq__(self, other):
        return (isinstance(other, LieVector) and other.ring == self.ring
                and other.algebra.system is self.algebra.system and other.coeffs == self.coeffs)

    __hash__ = None

    def is_zero(self):
        return not self.coeffs

    def coefficient(self, root):
        """v^alpha as a RingElement."""
        p = self.algebra.system.idx(root)
        return self.ring.element(self.coeffs.get(p, self.ring.zero_payload))

    def h_coefficient(self, k):
        p = self.algebra.num_roots + k - 1
        return self.ring.element(self.coeffs.get(p, self.ring.zero_payload))

    @property
    def e_part(self):
        m = self.algebra.num_roots
        roots = self.algebra.system.roots
        return {roots[p]: self.ring.element(x) for p, x in self.coeffs.items() if p < m}

    @property
    def h_part(self):
        return [self.h_coefficient(k) for k in range(1, self.algebra.rank + 1)]

    def to_list(self):
        zero = self.ring.zero_payload
        return [self.coeffs.get(p, zero) for p in range(self.algebra.dim)]

    def to_array(self):
        arr = np.empty(self.algebra.dim, dtype=self.ring.array_dtype)
        for p, x in enumerate(self.to_list()):
            arr[p] = x
        return arr

    def to_json(self):
        return [[self.algebra.basis_label(p), element_to_json(self.ring.element(x))]
                for p, x in sorted(self.coeffs.items())]

    def __repr__(self):
        terms = [f"{self.ring.element(x)}*{_label_str(self.algebra, p)}" for p, x in sorted(self.coeffs.items())]
        return " + ".join(terms) if terms else "0"


def _payload(ring, x):
    if isinstance(x, RingElement):
        return ring.element(x).payload
    return ring.normalize(x)


def _label_str(algebra, p):
    if p < algebra.num_roots:
        return f"e{algebra.system.roots[p]}"
    return f"h{p - algebra.num_roots + 1}"


def lie_vector_from_json(algebra, ring, data):
    coeffs = {}
    for key, value in data:
        if isinstance(key, str):
            p = algebra.num_roots + int(key[1:]) - 1
        else:
            p = algebra.system.idx(Root(key))
        coeffs[p] = element_from_json(ring, value).payload
    return LieVector(algebra, ring, coeffs)


def bracket(u, v):
    """
    Bilinear extension of the Chevalley relations.
    Raises:
        RingMismatch: u and v live over different rings.
    """
    u._check(v)
    algebra, ring = u.algebra, u.ring
    out = {}
    for p, a in u.coeffs.items():
        for q, b in v.coeffs.items():
            for r, c in algebra.basis_bracket(p, q):
                term = a * b * c
                out[r] = out[r] + term if r in out else term
    return LieVector(algebra, ring, out)


def jacobi_defect(algebra, p, q, r):
    """[[b_p,b_q],b_r] + [[b_q,b_r],b_p] + [[b_r,b_p],b_q] over Z, as a dict."""
    bp, bq, br = {p: 1}, {q: 1}, {r: 1}
    total = {}
    for x, y, z in ((bp, bq, br), (bq, br, bp), (br, bp, bq)):
        for k, c in algebra.bracket_int(algebra.bracket_int(x, y), z).items():
            total[k] = total.get(k, 0) + c
    return {k: c for k, c in total.items() if c}


def jacobi_violations(algebra, triples):
    return [t for t in triples if jacobi_defect(algebra, *t)]


def antisymmetry_violations(constants):
    table = constants.table
    bad = np.argwhere(table != -table.T)
    return [(int(i), int(j)) for i, j in bad]


def support_violations(constants):
    has_sum = constants.system.sum_table >= 0
    nonzero = constants.table != 0
    return [(int(i), int(j)) for i, j in np.argwhere(has_sum != nonzero)]


# -- nets ------------------------------------------------------------------

@dataclass(frozen=True)
class Net:
    """
    sigma constant on W(Delta)-orbits; sigma[oid] is the ideal of orbit oid.
    """
    system: object
    delta: object
    ring: object
    orbits: object = field(compare=False, repr=False)
    sigma: tuple = ()

    def ideal_of(self, root):
        return self.sigma[self.orbits.orbit_id(root)]

    def non_delta_orbits(self):
        return [oid for oid, members in enumerate(self.orbits.orbits) if members[0] not in self.delta]

    def to_json(self):
        roots = self.system.roots
        return {
            "system": self.system.label,
            "subsystem_simple_roots": [roots[i].to_json() for i in self.delta.generators],
            "ring": self.ring.to_json(),
            "orbits": [{"representative": roots[self.orbits.representative(oid)].to_json(),
                        "ideal": self.sigma[oid].to_json()}
                       for oid in self.non_delta_orbits()],
        }


def find_net_violations(system, orbits, sigma):
    """Root pairs (a, b) with a + b a root and sigma_a sigma_b not inside sigma_(a+b)."""
    checked = {}
    violations = []
    sums = system.sum_table
    for i, j in zip(*np.nonzero(sums >= 0)):
        i, j = int(i), int(j)
        key = (orbits.orbit_of[i], orbits.orbit_of[j], orbits.orbit_of[int(sums[i, j])])
        if key not in checked:
            product = ideal_product(sigma[key[0]], sigma[key[1]])
            checked[key] = product.issubset(sigma[key[2]])
        if not checked[key]:
            violations.append((system.roots[i], system.roots[j]))
    return violations


def net_from_orbit_ideals(system, delta, assignment, ring=None):
    """
    Builds and validates a net.

    Args:
        assignment: dict orbit id -> Ideal covering every non-Delta orbit
                    (Delta orbits default to the unit ideal).
    Raises:
        PerpNonEmpty: Delta has orthogonal roots in the system.
        NetViolation: some product inclusion fails.
    """
    if perp(system, delta):
        raise PerpNonEmpty(f"{len(perp(system, delta))} roots of {system.label} are orthogonal to Delta")
    orbits = weyl_orbits(system, delta)
    if ring is None:
        ring = next(iter(assignment.values())).ring
    sigma = []
    for oid, members in enumerate(orbits.orbits):
        if members[0] in delta:
            ideal = assignment.get(oid, Ideal.unit(ring))
            if not ideal.is_unit():
                raise AlgebraError(f"Orbit of {system.roots[members[0]]} lies in Delta and must carry the unit ideal")
        elif oid in assignment:
            ideal = assignment[oid]
        else:
            raise AlgebraError(f"No ideal assigned to orbit {oid} of {system.roots[members[0]]}")
        if ideal.ring != ring:
            raise RingMismatch(f"{ideal.ring} vs {ring}")
        sigma.append(ideal)
    violations = find_net_violations(system, orbits, sigma)
    if violations:
        raise NetViolation(violations)
    return Net(system, delta, ring, orbits, tuple(sigma))


def constant_net(system, delta, ideal):
    """Every non-Delta orbit mapped to the same ideal."""
    orbits = weyl_orbits(system, delta)
    assignment = {oid: ideal for oid, members in enumerate(orbits.orbits) if members[0] not in delta}
    return net_from_orbit_ideals(system, delta, assignment, ring=ideal.ring)


def enumerate_nets(system, delta, ring):
    """Every valid net over a finite ring."""
    orbits = weyl_orbits(system, delta)
    free = [oid for oid, members in enumerate(orbits.orbits) if members[0] not in delta]
    ideals = enumerate_ideals(ring)
    nets = []
    for choice in itertools.product(ideals, repeat=len(free)):
        try:
            nets.append(net_from_orbit_ideals(system, delta, dict(zip(free, choice)), ring=ring))
        except NetViolation:
            continue
    logger.info(f"{system.label}: {len(nets)} nets over {ring}")
    return nets


def net_from_json(data):
    system = build_system(data["system"])
    delta = subsystem_closure(system, [Root(c) for c in data["subsystem_simple_roots"]])
    ring = ring_from_json(data["ring"])
    orbits = weyl_orbits(system, delta)
    assignment = {}
    for entry in data["orbits"]:
        oid = orbits.orbit_id(Root(entry["representative"]))
        assignment[oid] = Ideal(ring, tuple(element_from_json(ring, g) for g in entry["ideal"]["gens"]))
    return net_from_orbit_ideals(system, delta, assignment, ring=ring)


# -- subalgebras -----------------------------------------------------------

@dataclass(frozen=True)
class SubalgebraDescriptor:
    kind: str
    net: object = None
    pair: tuple = None

    @classmethod
    def L_sigma(cls, net):
        return cls("L_sigma", net=net)

    @classmethod
    def L_prime_sigma(cls, net):
        return cls("L_prime_sigma", net=net)

    @classmethod
    def L_parabolic(cls, system, alpha1, alpha2):
        return cls("L_parabolic", pair=(system, system.idx(alpha1), system.idx(alpha2)))


def varpi(system, a1, a2, gamma):
    return int(system.gram[a1, gamma] + system.gram[a2, gamma])


def in_L_sigma(v, net):
    m = v.algebra.num_roots
    for p, x in v.coeffs.items():
        if p < m and not ideal_contains(net.ideal_of(p), v.ring.element(x)):
            return False
    return True


def in_parabolic_algebra(v, system, a1, a2):
    m = v.algebra.num_roots
    return all(p >= m or varpi(system, a1, a2, p) >= 0 for p in v.coeffs)


class LPrimeModule:
    """R-module closure of {xi e_alpha} under bracketing with those generators."""

    def __init__(self, algebra, net):
        self.algebra = algebra
        self.net = net
        ring = net.ring
        self.generators = [algebra.e(p, ring, xi.payload)
                           for p in range(algebra.num_roots)
                           for xi in net.ideal_of(p).generators]
        self.module = Submodule(ring, algebra.dim)
        self.spanning = []
        queue = deque()
        for g in self.generators:
            if self.module.add(g.to_list()):
                self.spanning.append(g)
                queue.append(g)
        while queue:
            w = queue.popleft()
            for s in self.generators:
                b = bracket(s, w)
                if not b.is_zero() and self.module.add(b.to_list()):
                    self.spanning.append(b)
                    queue.append(b)
        logger.debug(f"L'(sigma): {len(self.spanning)} spanning vectors")

    def __contains__(self, v):
        return v.to_list() in self.module


def lprime_module(net, algebra=None):
    algebra = algebra or algebra_for(net.system)
    modules = algebra.lprime_modules
    if net not in modules:
        modules[net] = LPrimeModule(algebra, net)
    return modules[net]


_algebras = {}


def algebra_for(system):
    """Shared algebra (default structure constants) for a root system."""
    if system.label not in _algebras:
        _algebras[system.label] = ChevalleyAlgebra(system)
    return _algebras[system.label]


def in_subalgebra(v, S):
    """
    Raises:
        UnsupportedRing: ideal membership undecidable over v.ring.
    """
    if S.kind == "L_sigma":
        return in_L_sigma(v, S.net)
    if S.kind == "L_parabolic":
        system, a1, a2 = S.pair
        return in_parabolic_algebra(v, system, a1, a2)
    if S.kind == "L_prime_sigma":
        return v in lprime_module(S.net, v.algebra)
    raise AlgebraError(f"Unknown subalgebra kind {S.kind}")


def lsigma_generators(algebra, net):
    ring = net.ring
    gens = [algebra.h(k, ring) for k in range(1, algebra.rank + 1)]
    gens += [algebra.e(p, ring, xi.payload) for p in range(algebra.num_roots)
             for xi in net.ideal_of(p).generators]
    return gens


def lsigma_is_closed(net, algebra=None):
    """Brackets of module generators of L(sigma) stay in L(sigma)."""
    algebra = algebra or algebra_for(net.system)
    gens = lsigma_generators(algebra, net)
    return all(in_L_sigma(bracket(a, b), net) for a, b in itertools.combinations(gens, 2))


def lemma_Lprime_check(net, algebra=None):
    """
    [L(sigma), L(sigma)] <= L'(sigma), and every r*b (b a basis vector, r in R)
    with [r*b, L'(sigma)] <= L(sigma) lies in L(sigma).
    """
    algebra = algebra or algebra_for(net.system)
    ring = net.ring
    elements = list(enumerate_elements(ring))
    lprime = lprime_module(net, algebra)
    gens = lsigma_generators(algebra, net)
    for a, b in itertools.combinations(gens, 2):
        if bracket(a, b) not in lprime:
            logger.warning(f"[{a}, {b}] escapes L'(sigma)")
            return False
    for p in range(algebra.dim):
        for r in elements:
            v = algebra.basis_vector(p, ring, r.payload)
            if v.is_zero() or in_L_sigma(v, net):
                continue
            if all(in_L_sigma(bracket(v, w), net) for w in lprime.spanning):
                logger.warning(f"{v} normalises into L(sigma) but is not in L(sigma)")
                return False
    return True
