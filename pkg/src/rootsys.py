"""
Simply-laced root systems in doubled integer coordinates.

Every coordinate is twice the textbook value, so the half-integer E-series roots
are integers; the inner product of two roots is the integer dot product divided by 4.
Internally roots are handled by their index in RootSystem.roots.
"""
import itertools
import logging
import os
import re
import sys
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from exactrings import ChevlabError, IntegerLattice

logger = logging.getLogger(__name__)

SCALE = 4  # squared doubling factor


class RootSystemError(ChevlabError):
    pass


class UnknownSystem(RootSystemError):
    pass


class GeneratorsNotInSystem(RootSystemError):
    pass


@dataclass(frozen=True, order=True)
class Root:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, 'coords', tuple(int(c) for c in self.coords))

    def pairing(self, other):
        return sum(a * b for a, b in zip(self.coords, other.coords)) // SCALE

    def __add__(self, other):
        return Root(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return Root(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return Root(tuple(-a for a in self.coords))

    def scaled(self, k):
        return Root(tuple(k * a for a in self.coords))

    def to_json(self):
        return list(self.coords)

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def reflect(gamma, alpha):
    """s_alpha(gamma) = gamma - <gamma, alpha> alpha."""
    return gamma - alpha.scaled(gamma.pairing(alpha))


class RootSystem:
    """
    A simply-laced root system with a fixed Bourbaki base.

    Args:
        label: 'A3', 'D4', 'E7', ...
        roots: iterable of doubled coordinate tuples
        simple: the simple roots, Bourbaki order, as coordinate tuples
    """

    def __init__(self, label, roots, simple):
        self.label = label
        raw = {tuple(r) for r in roots}
        self.rank = len(simple)
        coefficients = _simple_coordinates(raw, [tuple(s) for s in simple])
        if 2 * len(coefficients) != len(raw):
            raise RootSystemError(f"{label}: the given simple roots are not a base")
        for pos, coeff in list(coefficients.items()):
            coefficients[tuple(-c for c in pos)] = tuple(-c for c in coeff)

        positive = sorted((r for r in raw if sum(coefficients[r]) > 0),
                          key=lambda r: (sum(coefficients[r]), tuple(-c for c in coefficients[r])))
        ordered = positive + [tuple(-c for c in r) for r in positive]
        self.roots = [Root(r) for r in ordered]
        self.index = {root: i for i, root in enumerate(self.roots)}
        self.coefficients = [coefficients[r] for r in ordered]
        self.simple_roots = [self.index[Root(s)] for s in simple]
        self.coords = np.array(ordered, dtype=np.int64)
        self.gram = (self.coords @ self.coords.T) // SCALE
        self.num_positive = len(positive)
        logger.debug(f"Built {label}: {len(self.roots)} roots, rank {self.rank}")

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __contains__(self, root):
        return root in self.index

    def __repr__(self):
        return f"RootSystem({self.label})"

    def idx(self, root):
        """Index of a Root (ints pass through)."""
        if isinstance(root, (int, np.integer)):
            return int(root)
        try:
            return self.index[root if isinstance(root, Root) else Root(root)]
        except KeyError:
            raise GeneratorsNotInSystem(f"{root} is not a root of {self.label}")

    def pairing(self, i, j):
        return int(self.gram[i, j])

    def height(self, i):
        return sum(self.coefficients[i])

    def is_positive(self, i):
        return i < self.num_positive

    @cached_property
    def negation(self):
        m = self.num_positive
        return [i + m if i < m else i - m for i in range(len(self.roots))]

    @cached_property
    def sum_table(self):
        """sum_table[i, j] = index of root_i + root_j, or -1."""
        m = len(self.roots)
        table = np.full((m, m), -1, dtype=np.int64)
        for i, j in zip(*np.nonzero(self.gram == -1)):
            table[i, j] = self.index[Root(tuple(self.coords[i] + self.coords[j]))]
        return table

    @cached_property
    def reflection_table(self):
        """reflection_table[i, j] = index of s_{root_j}(root_i)."""
        m = len(self.roots)
        table = np.empty((m, m), dtype=np.int64)
        for j in range(m):
            images = self.coords - np.outer(self.gram[:, j], self.coords[j])
            table[:, j] = [self.index[Root(tuple(v))] for v in images]
        return table

    def root_sum(self, i, j):
        k = int(self.sum_table[i, j])
        return None if k < 0 else k

    def highest_root(self, support=None):
        """
        Highest root of the system, or of the subsystem spanned by the simple
        roots at the given 1-based Bourbaki positions.
        """
        allowed = set(range(self.rank)) if support is None else {p - 1 for p in support}
        candidates = [i for i in range(self.num_positive)
                      if all(c == 0 or k in allowed for k, c in enumerate(self.coefficients[i]))]
        return max(candidates, key=lambda i: (self.height(i), -i))

    def to_json(self):
        return {"system": self.label}


def _simple_coordinates(raw, simple):
    """Positive roots with their simple-root coefficients, grown from the base."""
    rank = len(simple)
    found = {s: tuple(1 if k == i else 0 for k in range(rank)) for i, s in enumerate(simple)}
    queue = deque(simple)
    while queue:
        r = queue.popleft()
        for i, s in enumerate(simple):
            t = tuple(a + b for a, b in zip(r, s))
            if t in raw and t not in found:
                found[t] = tuple(c + (1 if k == i else 0) for k, c in enumerate(found[r]))
                queue.append(t)
    return found


def _type_a(n):
    dim = n + 1
    roots = []
    for i, j in itertools.permutations(range(dim), 2):
        v = [0] * dim
        v[i], v[j] = 2, -2
        roots.append(tuple(v))
    simple = []
    for i in range(n):
        v = [0] * dim
        v[i], v[i + 1] = 2, -2
        simple.append(tuple(v))
    return roots, simple


def _type_d(n):
    roots = []
    for i, j in itertools.combinations(range(n), 2):
        for si, sj in itertools.product((2, -2), repeat=2):
            v = [0] * n
            v[i], v[j] = si, sj
            roots.append(tuple(v))
    simple = []
    for i in range(n - 1):
        v = [0] * n
        v[i], v[i + 1] = 2, -2
        simple.append(tuple(v))
    v = [0] * n
    v[n - 2], v[n - 1] = 2, 2
    simple.append(tuple(v))
    return roots, simple


def _type_e8():
    roots, _ = _type_d(8)
    for signs in itertools.product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            roots.append(signs)
    simple = [(1, -1, -1, -1, -1, -1, -1, 1), (2, 2, 0, 0, 0, 0, 0, 0)]
    for i in range(6):
        v = [0] * 8
        v[i], v[i + 1] = -2, 2
        simple.append(tuple(v))
    return roots, simple


def _type_e7():
    # Permutations of (1,-1,0^6) form the A7 part, permutations of (1/2^4,-1/2^4) the rest.
    roots, _ = _type_a(7)
    for plus in itertools.combinations(range(8), 4):
        roots.append(tuple(1 if k in plus else -1 for k in range(8)))
    simple = [(0, -2, 2, 0, 0, 0, 0, 0), (1, 1, 1, 1, -1, -1, -1, -1)]
    for i in range(2, 7):
        v = [0] * 8
        v[i], v[i + 1] = -2, 2
        simple.append(tuple(v))
    return roots, simple


def _type_e6():
    e8 = build_system("E8")
    roots = [tuple(e8.roots[i].coords) for i in range(len(e8))
             if e8.coefficients[i][6] == 0 and e8.coefficients[i][7] == 0]
    simple = [tuple(e8.roots[e8.simple_roots[k]].coords) for k in range(6)]
    return roots, simple


@lru_cache(maxsize=None)
def build_system(label):
    """
    Builds A_n, D_n (n >= 4), E6, E7 or E8.
    Raises:
        UnknownSystem: label not recognised.
    """
    match = re.fullmatch(r"([ADE])(\d+)", label.strip())
    if not match:
        raise UnknownSystem(f"Unknown root system '{label}'")
    kind, n = match.group(1), int(match.group(2))
    if kind == "A" and n >= 1:
        roots, simple = _type_a(n)
    elif kind == "D" and n >= 4:
        roots, simple = _type_d(n)
    elif kind == "E" and n == 6:
        roots, simple = _type_e6()
    elif kind == "E" and n == 7:
        roots, simple = _type_e7()
    elif kind == "E" and n == 8:
        roots, simple = _type_e8()
    else:
        raise UnknownSystem(f"Unknown root system '{label}'")
    system = RootSystem(f"{kind}{n}", roots, simple)
    logger.info(f"Root system {system.label}: {len(system)} roots")
    return system


@dataclass(frozen=True)
class Subsystem:
    parent: RootSystem
    generators: tuple
    roots: tuple
    is_symmetric: bool = True
    is_closed: bool = True
    members: frozenset = field(default=frozenset(), compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'members', frozenset(self.roots))

    def __contains__(self, i):
        return i in self.members

    def __len__(self):
        return len(self.roots)

    def root_list(self):
        return [self.parent.roots[i] for i in self.roots]

    def complement(self):
        return [i for i in range(len(self.parent)) if i not in self.members]

    def to_json(self):
        return {"system": self.parent.label,
                "subsystem_simple_roots": [self.parent.roots[i].to_json() for i in self.generators]}


def subsystem_closure(system, generators):
    """
    Roots of the system lying in the integer span of the generators.
    Raises:
        GeneratorsNotInSystem: a generator is not a root of the system.
    """
    gens = tuple(dict.fromkeys(system.idx(g) for g in generators))
    lattice = IntegerLattice(system.rank, [system.coefficients[i] for i in gens])
    roots = tuple(i for i in range(len(system)) if gens and system.coefficients[i] in lattice)
    members = set(roots)
    symmetric = all(system.negation[i] in members for i in roots)
    closed = all(system.root_sum(i, j) is None or system.root_sum(i, j) in members
                 for i in roots for j in roots)
    return Subsystem(system, gens, roots, symmetric, closed)


def subsystem_from_json(data):
    system = build_system(data["system"])
    return system, subsystem_closure(system, [Root(c) for c in data["subsystem_simple_roots"]])


@dataclass(frozen=True)
class OrbitPartition:
    """
    W(Delta)-orbits of the system. words[i] is a sequence of Delta roots whose
    reflections, applied left to right, carry the orbit representative to root i.
    """
    system: RootSystem
    orbits: tuple
    orbit_of: dict = field(compare=False)
    words: dict = field(compare=False)

    def orbit_id(self, root):
        return self.orbit_of[self.system.idx(root)]

    def representative(self, orbit_id):
        return self.orbits[orbit_id][0]

    def __len__(self):
        return len(self.orbits)


def weyl_orbits(system, delta):
    """Breadth-first closure of every root under reflections in all roots of delta."""
    table = system.reflection_table
    generators = list(delta.roots)
    orbit_of, words, orbits = {}, {}, []
    for start in range(len(system)):
        if start in orbit_of:
            continue
        oid = len(orbits)
        orbit_of[start], words[start] = oid, ()
        members = [start]
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for beta in generators:
                j = int(table[i, beta])
                if j not in orbit_of:
                    orbit_of[j], words[j] = oid, words[i] + (beta,)
                    members.append(j)
                    queue.append(j)
        orbits.append(tuple(members))
    logger.debug(f"{system.label}: {len(orbits)} W(Delta)-orbits")
    return OrbitPartition(system, tuple(orbits), orbit_of, words)


def apply_word(system, i, word):
    table = system.reflection_table
    for beta in word:
        i = int(table[i, beta])
    return i


def perp(system, delta):
    if not delta.roots:
        return list(range(len(system)))
    cols = list(delta.roots)
    mask = np.all(system.gram[:, cols] == 0, axis=1)
    return [int(i) for i in np.nonzero(mask)[0]]


def negative_orthogonal_pairs(system, delta, gamma):
    """Orthogonal pairs (a1, a2) of delta roots, in delta order, with <ai, gamma> = -1."""
    gram = system.gram
    candidates = [a for a in delta.roots if gram[a, gamma] == -1]
    return [(a, b) for a, b in itertools.combinations(candidates, 2) if gram[a, b] == 0]


def weyl_word(system, beta, alpha):
    """Simple reflections, applied left to right, sending beta to alpha."""
    table = system.reflection_table
    parents = {beta: None}
    queue = deque([beta])
    while queue:
        i = queue.popleft()
        if i == alpha:
            word = []
            while parents[i] is not None:
                i, s = parents[i]
                word.append(s)
            return word[::-1]
        for s in system.simple_roots:
            j = int(table[i, s])
            if j not in parents:
                parents[j] = (i, s)
                queue.append(j)
    raise RootSystemError(f"{system.roots[beta]} and {system.roots[alpha]} are not W-conjugate")
