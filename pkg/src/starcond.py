"""
The grading functional varpi, the sets Sigma, admissible pairs and the
condition (*) decision procedure with JSON certificates.
"""
import itertools
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import psutil

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from exactrings import ChevlabError
from rootsys import Root, apply_word, build_system, negative_orthogonal_pairs, subsystem_closure, weyl_orbits

logger = logging.getLogger(__name__)

CHEVLAB_THREADS = int(os.environ.get('CHEVLAB_THREADS', psutil.cpu_count(logical=False) or 1))
CERTIFICATE_SCHEMA = "chevlab.star-certificate/1"


class StarError(ChevlabError):
    pass


class NotOrthogonal(StarError):
    pass


class NotInDelta(StarError):
    pass


class PairNotAdmissible(StarError):
    pass


class PairFunctional:
    """varpi(gamma) = <a1 + a2, gamma> for orthogonal roots a1, a2 (indices)."""

    def __init__(self, system, a1, a2):
        a1, a2 = system.idx(a1), system.idx(a2)
        if system.gram[a1, a2] != 0:
            raise NotOrthogonal(f"{system.roots[a1]} and {system.roots[a2]} are not orthogonal")
        self.system = system
        self.a1, self.a2 = a1, a2
        self.values = system.gram[a1] + system.gram[a2]

    def __call__(self, gamma):
        return int(self.values[self.system.idx(gamma)])

    def level(self, value):
        return [int(i) for i in np.nonzero(self.values == value)[0]]


def sigma_set(system, a1, a2):
    """Indices of the roots with varpi = 2.
    Raises:
        NotOrthogonal
    """
    return PairFunctional(system, a1, a2).level(2)


@dataclass
class Admissibility:
    admissible: bool
    witnesses: dict = field(default_factory=dict)
    unseparated: tuple = None

    def __bool__(self):
        return self.admissible


def is_admissible(system, delta, a1, a2):
    """
    Every two distinct roots of Sigma outside Delta must be separated by some
    beta in Delta with varpi(beta) = 0. witnesses maps (g1, g2) -> beta.
    Raises:
        NotOrthogonal, NotInDelta
    """
    a1, a2 = system.idx(a1), system.idx(a2)
    for a in (a1, a2):
        if a not in delta:
            raise NotInDelta(f"{system.roots[a]} is not in Delta")
    varpi = PairFunctional(system, a1, a2)
    outside = [g for g in varpi.level(2) if g not in delta]
    flat = [b for b in delta.roots if varpi.values[b] == 0]
    witnesses = {}
    if len(outside) < 2:
        return Admissibility(True, witnesses)
    if not flat:
        return Admissibility(False, witnesses, (outside[0], outside[1]))
    pairings = system.gram[np.ix_(flat, outside)]
    for i, g1 in enumerate(outside[:-1]):
        separated = pairings[:, i:i + 1] != pairings[:, i + 1:]
        found = separated.any(axis=0)
        first = separated.argmax(axis=0)
        for k, g2 in enumerate(outside[i + 1:]):
            if not found[k]:
                return Admissibility(False, witnesses, (g1, g2))
            witnesses[(g1, g2)] = flat[int(first[k])]
    return Admissibility(True, witnesses)


def _unseparated(system, delta, a1, a2, g1, g2):
    """True when g1 != g2 lie in Sigma outside Delta and no flat root of Delta tells them apart."""
    gram = system.gram
    values = gram[a1] + gram[a2]
    if g1 == g2 or g1 in delta or g2 in delta or values[g1] != 2 or values[g2] != 2:
        return False
    return not any(values[b] == 0 and gram[b, g1] != gram[b, g2] for b in delta.roots)


@dataclass(frozen=True)
class Counterexample:
    """
    obstructions holds ((a1, a2), (g1, g2)) for every candidate pair at gamma:
    g1, g2 are two roots of Sigma outside Delta that the pair leaves unseparated.
    """
    system: object
    delta: object
    gamma: int
    reason: str
    obstructions: tuple = ()

    ok = False

    def validate(self):
        """Replays the obstruction of every orthogonal pair at gamma."""
        system, delta = self.system, self.delta
        if self.gamma in delta:
            return False
        recorded = dict(self.obstructions)
        for a1, a2 in negative_orthogonal_pairs(system, delta, self.gamma):
            blocked = recorded.get((a1, a2))
            if blocked is None or not _unseparated(system, delta, a1, a2, *blocked):
                logger.warning(f"No valid obstruction for the pair {system.roots[a1]}, {system.roots[a2]}")
                return False
        return True

    def to_json(self):
        roots = self.system.roots
        return {"schema": CERTIFICATE_SCHEMA, "status": "fail",
                **self.delta.to_json(),
                "gamma": roots[self.gamma].to_json(),
                "reason": self.reason,
                "obstructions": [{"pair": [roots[a1].to_json(), roots[a2].to_json()],
                                  "unseparated": [roots[g1].to_json(), roots[g2].to_json()]}
                                 for (a1, a2), (g1, g2) in self.obstructions]}


@dataclass
class StarCertificate:
    """
    pairs[rep] / witnesses[rep] hold the search result for each W(Delta)-orbit
    representative; transport[gamma] = (rep, word) carries it to the rest.
    """
    system: object
    delta: object
    pairs: dict
    witnesses: dict
    transport: dict

    ok = True

    def entry(self, gamma):
        """(a1, a2, witness map) for any gamma outside Delta."""
        rep, word = self.transport[gamma]
        a1, a2 = self.pairs[rep]
        if not word:
            return a1, a2, self.witnesses[rep]
        move = lambda i: apply_word(self.system, i, word)
        moved = {}
        for (g1, g2), beta in self.witnesses[rep].items():
            h1, h2 = move(g1), move(g2)
            moved[(min(h1, h2), max(h1, h2))] = move(beta)
        return move(a1), move(a2), moved

    def validate(self):
        """Replays every recorded pair and witness against the defining inequalities."""
        system, delta = self.system, self.delta
        gram = system.gram
        for gamma in delta.complement():
            if gamma not in self.transport:
                logger.warning(f"No certificate entry for {system.roots[gamma]}")
                return False
            a1, a2, witnesses = self.entry(gamma)
            if a1 not in delta or a2 not in delta or gram[a1, a2] != 0:
                return False
            if gram[a1, gamma] != -1 or gram[a2, gamma] != -1:
                return False
            values = gram[a1] + gram[a2]
            outside = [g for g in np.nonzero(values == 2)[0] if int(g) not in delta]
            for g1, g2 in itertools.combinations(sorted(int(g) for g in outside), 2):
                beta = witnesses.get((g1, g2))
                if beta is None or beta not in delta or values[beta] != 0 or gram[beta, g1] == gram[beta, g2]:
                    logger.warning(f"Witness for {system.roots[g1]}, {system.roots[g2]} fails")
                    return False
        return True

    def to_json(self):
        roots = self.system.roots
        reps = []
        for rep in sorted(self.pairs):
            a1, a2 = self.pairs[rep]
            reps.append({"gamma": roots[rep].to_json(),
                         "pair": [roots[a1].to_json(), roots[a2].to_json()],
                         "witnesses": [[roots[g1].to_json(), roots[g2].to_json(), roots[b].to_json()]
                                       for (g1, g2), b in sorted(self.witnesses[rep].items())]})
        transported = [{"gamma": roots[g].to_json(), "representative": roots[rep].to_json(),
                        "word": [roots[b].to_json() for b in word]}
                       for g, (rep, word) in sorted(self.transport.items()) if word]
        return {"schema": CERTIFICATE_SCHEMA, "status": "ok", **self.delta.to_json(),
                "representatives": reps, "transported": transported}


def _search_representative(system, delta, gamma):
    pairs = negative_orthogonal_pairs(system, delta, gamma)
    if not pairs:
        return None, "no orthogonal pair in Delta at -1 with gamma", ()
    obstructions = []
    for a1, a2 in pairs:
        result = is_admissible(system, delta, a1, a2)
        if result:
            return (a1, a2, result.witnesses), None, ()
        obstructions.append(((a1, a2), result.unseparated))
    return None, f"none of {len(pairs)} orthogonal pairs is admissible", tuple(obstructions)


def check_star(system, delta, threads=None):
    """
    Decides condition (*) for (system, delta).
    Returns:
        StarCertificate, or Counterexample naming the first failing root.
    """
    orbits = weyl_orbits(system, delta)
    reps = [members[0] for members in orbits.orbits if members[0] not in delta]
    workers = max(1, min(threads or CHEVLAB_THREADS, len(reps) or 1))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda g: _search_representative(system, delta, g), reps))
    else:
        results = [_search_representative(system, delta, g) for g in reps]

    pairs, witnesses = {}, {}
    for gamma, (found, reason, obstructions) in zip(reps, results):
        if found is None:
            logger.info(f"{system.label}: condition (*) fails at {system.roots[gamma]} ({reason})")
            return Counterexample(system, delta, gamma, reason, obstructions)
        a1, a2, wit = found
        pairs[gamma] = (a1, a2)
        witnesses[gamma] = wit

    transport = {}
    for gamma in delta.complement():
        oid = orbits.orbit_of[gamma]
        transport[gamma] = (orbits.representative(oid), tuple(orbits.words[gamma]))
    logger.info(f"{system.label}: condition (*) holds, {len(reps)} orbit representative(s), "
                f"{len(transport)} roots outside Delta")
    return StarCertificate(system, delta, pairs, witnesses, transport)


def u_prime_generators(system, a1, a2, net):
    """Sigma roots with their sigma-ideals."""
    return [(g, net.ideal_of(g)) for g in sigma_set(system, a1, a2)]


# -- certificate files -----------------------------------------------------

def emit_certificate(result, path):
    """Writes a certificate or counterexample as JSON."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(result.to_json(), f, indent=2)
    logger.info(f"Wrote {'certificate' if result.ok else 'counterexample'} to {path}")


def certificate_from_json(data):
    if data.get("schema") != CERTIFICATE_SCHEMA:
        raise StarError(f"Unsupported certificate schema {data.get('schema')}")
    system = build_system(data["system"])
    delta = subsystem_closure(system, [Root(c) for c in data["subsystem_simple_roots"]])
    idx = lambda coords: system.idx(Root(coords))
    if data["status"] == "fail":
        obstructions = tuple(((idx(o["pair"][0]), idx(o["pair"][1])),
                              (idx(o["unseparated"][0]), idx(o["unseparated"][1])))
                             for o in data.get("obstructions", []))
        return Counterexample(system, delta, idx(data["gamma"]), data.get("reason", ""), obstructions)
    pairs, witnesses, transport = {}, {}, {}
    for rep in data["representatives"]:
        gamma = idx(rep["gamma"])
        pairs[gamma] = tuple(idx(a) for a in rep["pair"])
        witnesses[gamma] = {(idx(g1), idx(g2)): idx(b) for g1, g2, b in rep["witnesses"]}
        transport[gamma] = (gamma, ())
    for entry in data["transported"]:
        transport[idx(entry["gamma"])] = (idx(entry["representative"]),
                                          tuple(idx(b) for b in entry["word"]))
    return StarCertificate(system, delta, pairs, witnesses, transport)


def load_certificate(path):
    """
    Loads and re-validates a certificate file.
    Returns:
        (result, valid) where valid is False when the certificate fails to replay.
    """
    with open(path, 'r', encoding='utf-8') as f:
        result = certificate_from_json(json.load(f))
    valid = result.validate()
    if not valid:
        logger.warning(f"{'Certificate' if result.ok else 'Counterexample'} {path} does not re-validate")
    return result, valid
