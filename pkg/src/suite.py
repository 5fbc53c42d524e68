"""
Acceptance suite: the thirteen named checks, in quick and full profiles.

Reports carry no timings or timestamps so a fixed seed gives identical files;
timing and memory go to the log.
"""
import itertools
import json
import logging
import os
import random
import sys
import time
from dataclasses import dataclass, field

import psutil

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from chevalgebra import (ChevalleyAlgebra, algebra_for, antisymmetry_violations, constant_net,
                         enumerate_nets, in_L_sigma, jacobi_defect, support_violations)
from chevgroup import (GroupElement, identity, in_parabolic, in_S_sigma, level_of_S, random_element,
                       random_parameter, reduction_witness, root_element)
from exactrings import ChevlabError, Ideal, IntegerRing, ModularRing
from presets import NEGATIVE_CONTROLS, case_table_labels, expected_star_status, resolve_preset
from rootsys import build_system, weyl_orbits
from starcond import check_star
from tandemlab import (BitandemWithParameter, NoWitness, bitandem_quadratic_decomposition,
                       extract_to_Uprime, in_parabolic_vector, make_tandem, random_tandem,
                       special_bitandem, tandem_action_holds, u_prime_reduce, verify_formula_sharp)

logger = logging.getLogger(__name__)

_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CHEVLAB_REPORTS_DIR = os.environ.get('CHEVLAB_REPORTS_DIR', os.path.join(_ROOT, 'reports'))
CHEVLAB_SEED = int(os.environ.get('CHEVLAB_SEED', '0'))

PROFILES = ("quick", "full")

# samples per profile: (quick, full)
SAMPLES = {
    "tandem_action": (20, 200),
    "bitandem": (10, 50),
    "special_bitandem": (10, 100),
    "tandems_in_S": (20, 100),
    "u_prime_reduce": (20, 100),
    "reduction_witness": (5, 20),
    "extraction": (10, 40),
    "random_triples": (0, 10 ** 4),
}


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    checks: int = 0
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {"number": self.number, "name": self.name, "passed": self.passed,
                "checks": self.checks, "details": self.details}


def _orthogonal_partner(system, a1, rng):
    partners = [b for b in range(len(system)) if system.gram[a1, b] == 0]
    return rng.choice(partners)


def _structure_constant_defect(algebra, triples):
    """First failing check among antisymmetry, support and Jacobi on the given triples."""
    if antisymmetry_violations(algebra.constants):
        return "antisymmetry"
    if support_violations(algebra.constants):
        return "support"
    for triple in triples:
        if jacobi_defect(algebra, *triple):
            return f"jacobi at {triple}"
    return None


class AcceptanceSuite:
    """
    Runs the acceptance checks for a profile and seed.

    Args:
        algebras: optional {system label: ChevalleyAlgebra} overriding the default
                  algebras in the structure-constant check (used for mutation runs).
    """

    def __init__(self, profile="quick", seed=None, algebras=None):
        if profile not in PROFILES:
            raise ChevlabError(f"Unknown profile '{profile}'")
        self.profile = profile
        self.seed = CHEVLAB_SEED if seed is None else seed
        self.algebras = algebras or {}
        self.results = []

    def _samples(self, key):
        quick, full = SAMPLES[key]
        return quick if self.profile == "quick" else full

    def _rng(self, number):
        return random.Random(f"{self.seed}:{number}")

    def _d4_4a1(self):
        system, delta = resolve_preset("D4:4A1")
        return system, delta, algebra_for(system)

    # -- 1 ---------------------------------------------------------------
    def structure_constants(self):
        rng = self._rng(1)
        checks, details = 0, {}
        for label in ("A2", "A3", "D4"):
            algebra = self.algebras.get(label) or algebra_for(build_system(label))
            triples = list(itertools.combinations_with_replacement(range(algebra.dim), 3))
            details[label] = _structure_constant_defect(algebra, triples) or "ok"
            checks += len(triples)
        for label in ("E7", "E8"):
            count = self._samples("random_triples")
            if not count:
                continue
            algebra = self.algebras.get(label) or algebra_for(build_system(label))
            triples = [tuple(rng.randrange(algebra.dim) for _ in range(3)) for _ in range(count)]
            details[label] = _structure_constant_defect(algebra, triples) or "ok"
            checks += count
        passed = all(v == "ok" for v in details.values())
        return CriterionResult(1, "structure constants", passed, checks, details)

    # -- 2 ---------------------------------------------------------------
    def formula_sharp(self):
        labels = ("A2", "A3") if self.profile == "quick" else ("A2", "D4")
        details = {label: verify_formula_sharp(build_system(label)) for label in labels}
        return CriterionResult(2, "root element action formula", all(details.values()), len(labels), details)

    # -- 3 ---------------------------------------------------------------
    def tandem_action(self):
        rng = self._rng(3)
        algebra = algebra_for(build_system("D4"))
        ring = ModularRing(3)
        checks, failures = 0, 0
        for _ in range(self._samples("tandem_action")):
            T = random_tandem(algebra, ring, rng, max_length=6)
            for beta in range(algebra.num_roots):
                checks += 1
                failures += not tandem_action_holds(T.g, T.l, beta)
        return CriterionResult(3, "tandem action", failures == 0, checks, {"failures": failures})

    # -- 4 ---------------------------------------------------------------
    def bitandem_decomposition(self):
        rng = self._rng(4)
        system = build_system("D4")
        algebra = algebra_for(system)
        ring = IntegerRing()
        checks, failures = 0, []
        for k in range(self._samples("bitandem")):
            h = random_element(algebra, ring, rng, rng.randint(0, 3))
            a1 = rng.randrange(algebra.num_roots)
            a2 = _orthogonal_partner(system, a1, rng)
            B = BitandemWithParameter(h, a1, a2, random_parameter(ring, rng), random_parameter(ring, rng))
            v = algebra.basis_vector(rng.randrange(algebra.dim), ring)
            try:
                bitandem_quadratic_decomposition(B, v)
            except ChevlabError as e:
                failures.append(f"sample {k}: {e}")
            checks += 1
        return CriterionResult(4, "bitandem decomposition", not failures, checks, {"failures": failures[:5]})

    # -- 5 ---------------------------------------------------------------
    def special_bitandems_parabolic(self):
        rng = self._rng(5)
        system = build_system("D4")
        algebra = algebra_for(system)
        ring = ModularRing(3)
        checks, failures = 0, 0
        for _ in range(self._samples("special_bitandem")):
            T = random_tandem(algebra, ring, rng)
            a1 = rng.randrange(algebra.num_roots)
            a2 = _orthogonal_partner(system, a1, rng)
            B = special_bitandem(T, a1, a2)
            failures += not in_parabolic_vector(B.l(1), a1, a2)
            for t in ring.elements():
                checks += 1
                failures += not in_parabolic(B.g(t), a1, a2)
        return CriterionResult(5, "special bitandems in parabolic", failures == 0, checks, {"failures": failures})

    # -- 6 ---------------------------------------------------------------
    def tandems_in_S_sigma(self):
        rng = self._rng(6)
        system, delta, algebra = self._d4_4a1()
        ring = ModularRing(4)
        checks, details = 0, {}
        for generator in (0, 2, 1):
            net = constant_net(system, delta, Ideal(ring, (generator,)))
            mismatches = 0
            for _ in range(self._samples("tandems_in_S")):
                T = random_tandem(algebra, ring, rng)
                checks += 1
                mismatches += in_S_sigma(T.g, net) != in_L_sigma(T.l, net)
            details[f"({generator})"] = mismatches
        return CriterionResult(6, "tandems in S(sigma)", not any(details.values()), checks, details)

    # -- 7 ---------------------------------------------------------------
    def levels(self):
        system, delta, algebra = self._d4_4a1()
        checks, details = 0, {}
        for n in (2, 3, 4):
            ring = ModularRing(n)
            nets = enumerate_nets(system, delta, ring)
            matches = [level_of_S(net, algebra).matches_net() for net in nets]
            checks += len(nets)
            details[str(ring)] = {"nets": len(nets), "matching": sum(matches)}
        passed = all(d["nets"] == d["matching"] and d["nets"] > 0 for d in details.values())
        return CriterionResult(7, "level of S(sigma)", passed, checks, details)

    # -- 8 ---------------------------------------------------------------
    def star_table(self):
        if self.profile == "quick":
            labels = ["D4:4A1", "D6:6A1", "E6:D5", "E6:A5+A1", "E6:3A2"]
        else:
            labels = case_table_labels((4, 6))
        details = {}
        for label in labels + sorted(NEGATIVE_CONTROLS):
            result = check_star(*resolve_preset(label))
            status = "ok" if result.ok else "fail"
            if status != expected_star_status(label) or not result.validate():
                details[label] = "FAILED"
            else:
                details[label] = "certificate" if result.ok else "counterexample"
        passed = "FAILED" not in details.values()
        return CriterionResult(8, "condition (*) table", passed, len(details), details)

    # -- 9 ---------------------------------------------------------------
    def orbit_facts(self):
        def non_delta(label):
            system, delta = resolve_preset(label)
            orbits = weyl_orbits(system, delta)
            return system, [members for members in orbits.orbits if members[0] not in delta]

        details = {}
        _, d4 = non_delta("D4:4A1")
        details["D4:4A1"] = len(d4) == 1 and len(d4[0]) == 16
        _, e7 = non_delta("E7:A7")
        details["E7:A7"] = len(e7) == 1
        e8, orbits = non_delta("E8:A8")
        details["E8:A8"] = (len(orbits) == 2
                            and sorted(e8.negation[i] for i in orbits[0]) == sorted(orbits[1]))
        return CriterionResult(9, "orbit facts", all(details.values()), len(details), details)

    # -- 10 --------------------------------------------------------------
    def u_prime_reduction(self):
        rng = self._rng(10)
        system, delta, algebra = self._d4_4a1()
        ring = ModularRing(3)
        certificate = check_star(system, delta)
        outside = delta.complement()
        checks, failures = 0, 0
        for _ in range(self._samples("u_prime_reduce")):
            gamma = rng.choice(outside)
            a1, a2, witnesses = certificate.entry(gamma)
            pairs = sorted(witnesses)
            if not pairs:
                continue
            g1, g2 = rng.choice(pairs)
            beta = witnesses[(g1, g2)]
            sigma_outside = sorted({g for pair in pairs for g in pair})
            extra = [g for g in sigma_outside if g not in (g1, g2)]
            roots = [g1, g2] + rng.sample(extra, rng.randint(0, len(extra)))
            factors = [(g, ring.element(rng.choice((1, 2)))) for g in roots]
            reduced = u_prime_reduce(algebra, factors, beta, a1, a2)
            checks += 1
            failures += len(reduced) >= len(factors)
        return CriterionResult(10, "U' reduction", failures == 0 and checks > 0, checks, {"failures": failures})

    # -- 11 --------------------------------------------------------------
    def reduction_witnesses(self):
        rng = self._rng(11)
        system, delta, algebra = self._d4_4a1()
        ring = ModularRing(4)
        ideal = Ideal(ring, (2,))
        certificate = check_star(system, delta)
        outside = delta.complement()
        checks, failures, signs = 0, [], {1: 0, -1: 0}
        for k in range(self._samples("reduction_witness")):
            gamma = rng.choice(outside)
            b1, b2, _ = certificate.entry(gamma)
            alpha1 = system.negation[b1]
            xi = random_parameter(ring, rng)
            h = root_element(algebra, gamma, xi)
            for _ in range(rng.randint(0, 3)):
                h = h * root_element(algebra, rng.randrange(algebra.num_roots), ring.element(2))
            try:
                witness = reduction_witness(h, gamma, alpha1, b2, ideal, delta)
                signs[witness.sign] += 1
            except ChevlabError as e:
                failures.append(f"sample {k}: {e}")
            checks += 1
        return CriterionResult(11, "reduction witness", not failures, checks,
                               {"signs": {str(s): c for s, c in signs.items()}, "failures": failures[:5]})

    # -- 12 --------------------------------------------------------------
    def extraction(self):
        rng = self._rng(12)
        system, delta, algebra = self._d4_4a1()
        certificate = check_star(system, delta)
        outside = delta.complement()
        details, checks, passed = {}, 0, True
        for n in (3, 2):
            ring = ModularRing(n)
            counts = {"case 1": 0, "case 2": 0, "no witness": 0, "zero coefficient": 0, "not in U'": 0}
            samples, attempts = self._samples("extraction"), 0
            while sum(counts[c] for c in ("case 1", "case 2", "no witness")) < samples and attempts < 20 * samples:
                attempts += 1
                T = random_tandem(algebra, ring, rng)
                options = []
                for gamma in outside:
                    if T.l.coefficient(gamma).is_zero():
                        continue
                    b1, b2, _ = certificate.entry(gamma)
                    options += [(gamma, b1, b2), (gamma, b2, b1)]
                if not options:
                    continue
                # even draws favour l^-a1 != 0 so the special bitandem branch runs
                second = [o for o in options if not T.l.coefficient(system.negation[o[1]]).is_zero()]
                gamma, a1, a2 = rng.choice(second if second and attempts % 2 == 0 else options)
                checks += 1
                try:
                    result = extract_to_Uprime(T, gamma, a1, a2)
                except NoWitness:
                    counts["no witness"] += 1
                    continue
                counts[f"case {result.case}"] += 1
                if result.coefficient.is_zero():
                    counts["zero coefficient"] += 1
                if result.uprime is None:
                    counts["not in U'"] += 1
            details[str(ring)] = counts
            if counts["zero coefficient"] or counts["not in U'"] or not counts["case 2"]:
                passed = False
            if n == 3 and counts["no witness"]:
                passed = False
        return CriterionResult(12, "extraction to U'", passed and checks > 0, checks, details)

    # -- 13 --------------------------------------------------------------
    def mutation_sensitivity(self):
        rng = self._rng(13)
        system = build_system("D4")
        algebra = algebra_for(system)
        triples = list(itertools.combinations_with_replacement(range(algebra.dim), 3))
        entries = [tuple(int(x) for x in ij) for ij in zip(*algebra.constants.table.nonzero())]
        if self.profile == "quick":
            entries = rng.sample(entries, 10)
        undetected_flips = 0
        for i, j in entries:
            mutated = ChevalleyAlgebra(system, algebra.constants.flipped(i, j))
            undetected_flips += _structure_constant_defect(mutated, triples) is None

        ring = ModularRing(3)
        roots = list(range(algebra.num_roots))
        if self.profile == "quick":
            roots = rng.sample(roots, 4)
        zeroed, undetected_zeros = 0, 0
        for alpha in roots:
            T = make_tandem(identity(algebra, ring), alpha, ring.one)
            matrix = T.g.matrix
            for r, c in zip(*matrix[:, :algebra.num_roots].nonzero()):
                broken = matrix.copy()
                broken[r, c] = 0
                g = GroupElement(algebra, ring, broken, T.g.word)
                zeroed += 1
                undetected_zeros += tandem_action_holds(g, T.l, int(c))
        details = {"flips": len(entries), "undetected flips": undetected_flips,
                   "zeroed entries": zeroed, "undetected zeroings": undetected_zeros}
        passed = undetected_flips == 0 and undetected_zeros == 0
        return CriterionResult(13, "mutation sensitivity", passed, len(entries) + zeroed, details)

    # -- run -------------------------------------------------------------
    CRITERIA = ("structure_constants", "formula_sharp", "tandem_action", "bitandem_decomposition",
                "special_bitandems_parabolic", "tandems_in_S_sigma", "levels", "star_table",
                "orbit_facts", "u_prime_reduction", "reduction_witnesses", "extraction",
                "mutation_sensitivity")

    def run(self, only=None):
        process = psutil.Process()
        self.results = []
        for number, name in enumerate(self.CRITERIA, 1):
            if only and number not in only:
                continue
            start = time.perf_counter()
            try:
                result = getattr(self, name)()
            except ChevlabError as e:
                logger.error(f"Criterion {number} ({name}) raised: {e}")
                result = CriterionResult(number, name.replace("_", " "), False, 0, {"error": str(e)})
            elapsed = time.perf_counter() - start
            rss = process.memory_info().rss / 2 ** 20
            logger.info(f"[{number:2d}] {result.name}: {'PASS' if result.passed else 'FAIL'} "
                        f"({result.checks} checks, {elapsed:.1f}s, rss {rss:.0f} MiB)")
            self.results.append(result)
        return self.results

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    @property
    def first_failure(self):
        return next((r.name for r in self.results if not r.passed), None)

    def to_json(self):
        return {"profile": self.profile, "seed": self.seed, "passed": self.passed,
                "first_failure": self.first_failure,
                "criteria": [r.to_json() for r in self.results]}

    def generate_report(self, output_json=None, output_md=None):
        """Writes report.json and report.md; returns True when both were written."""
        if output_json is None:
            output_json = os.path.join(CHEVLAB_REPORTS_DIR, f"suite-{self.profile}-{self.seed}.json")
        if output_md is None:
            output_md = os.path.join(os.path.dirname(output_json), 'report.md')
        report = self.to_json()
        try:
            os.makedirs(os.path.dirname(os.path.abspath(output_json)), exist_ok=True)
            with open(output_json, 'w', encoding='utf-8') as f:
                json.dump(report, f, indent=2, sort_keys=True)
            logger.info(f"Suite report saved to {output_json}")
        except OSError as e:
            logger.error(f"Failed to save JSON report: {e}")
            return False

        try:
            with open(output_md, 'w', encoding='utf-8') as f:
                f.write("# Acceptance suite\n")
                f.write(f"**Profile:** {self.profile}  \n**Seed:** {self.seed}  \n")
                f.write(f"**Result:** {'PASS' if self.passed else 'FAIL'}\n\n")
                f.write("| # | Check | Result | Checks |\n")
                f.write("|---|---|---|---|\n")
                for r in self.results:
                    f.write(f"| {r.number} | {r.name} | {'pass' if r.passed else 'FAIL'} | {r.checks} |\n")
                if self.first_failure:
                    f.write(f"\nFirst failing check: {self.first_failure}\n")
            logger.info(f"Summary saved to {output_md}")
        except OSError as e:
            logger.error(f"Failed to save Markdown summary: {e}")
            return False
        return True


def run_suite(profile="quick", seed=None, algebras=None, only=None):
    suite = AcceptanceSuite(profile, seed, algebras)
    suite.run(only)
    return suite
