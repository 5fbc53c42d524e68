"""
Command-line entry point.

    python src/cli.py roots --system E7
    python src/cli.py star check E7:A7 --json certificates/E7-A7.json
    python src/cli.py star verify certificates/E7-A7.json
    python src/cli.py net D4:4A1 --ring mod:4
    python src/cli.py group D4 --ring mod:3 --samples 5 --emit-matrix
    python src/cli.py tandem verify --system D4 --ring mod:3 --samples 200 --seed 1
    python src/cli.py tandem extract D4:4A1 --ring mod:3 --seed 1
    python src/cli.py suite --profile quick

Exit code 0 iff every requested check passes.
"""
import argparse
import json
import logging
import os
import random
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from chevalgebra import ChevalleyAlgebra, algebra_for, enumerate_nets, lemma_Lprime_check, lsigma_is_closed
from chevgroup import determinant_is_unit, level_of_S, random_element, random_parameter, root_element
from exactrings import ChevlabError, parse_ring
from presets import resolve_preset
from rootsys import Root, build_system, subsystem_closure
from starcond import check_star, emit_certificate, load_certificate
from suite import CHEVLAB_REPORTS_DIR, CHEVLAB_SEED, AcceptanceSuite
from tandemlab import NoWitness, extract_to_Uprime, random_tandem, verify_tandem_action

CHEVLAB_LOG_LEVEL = os.environ.get('CHEVLAB_LOG_LEVEL', 'INFO').upper()

logger = logging.getLogger(__name__)


def _write_json(data, path):
    if not path:
        print(json.dumps(data, indent=2))
        return
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=2)
    logger.info(f"Wrote {path}")


def _resolve_pair(args):
    """(system, delta) from a positional preset or --system/--subsystem."""
    if getattr(args, 'preset', None):
        return resolve_preset(args.preset)
    if not args.system:
        raise ChevlabError("Give a preset such as E7:A7 or --system with --subsystem")
    if args.subsystem and ":" in args.subsystem:
        return resolve_preset(args.subsystem)
    if args.subsystem and args.subsystem.strip().startswith("["):
        system = build_system(args.system)
        coords = json.loads(args.subsystem)
        return system, subsystem_closure(system, [Root(c) for c in coords])
    if args.subsystem:
        return resolve_preset(f"{args.system}:{args.subsystem}")
    raise ChevlabError("--subsystem is required with --system")


# -- subcommands -----------------------------------------------------------

def cmd_roots(args):
    system = build_system(args.system)
    top = system.highest_root()
    data = {"system": system.label, "rank": system.rank, "roots": len(system),
            "positive_roots": system.num_positive,
            "simple_roots": [system.roots[i].to_json() for i in system.simple_roots],
            "highest_root": system.roots[top].to_json(),
            "highest_root_coefficients": list(system.coefficients[top])}
    _write_json(data, args.json)
    return 0


def cmd_star_check(args):
    system, delta = _resolve_pair(args)
    result = check_star(system, delta)
    if args.json:
        emit_certificate(result, args.json)
        _, valid = load_certificate(args.json)
        if not valid:
            return 1
    else:
        print(json.dumps(result.to_json(), indent=2))
    if result.ok:
        print(f"{system.label}: condition (*) holds ({len(result.pairs)} orbit representative(s))")
        return 0
    print(f"{system.label}: condition (*) fails at {system.roots[result.gamma]}: {result.reason}")
    roots = system.roots
    for (a1, a2), (g1, g2) in result.obstructions:
        print(f"  pair {roots[a1]}, {roots[a2]} leaves {roots[g1]} and {roots[g2]} unseparated")
    return 1


def cmd_star_verify(args):
    result, valid = load_certificate(args.path)
    if result.ok:
        status = "valid" if valid else "INVALID"
    else:
        status = "counterexample" if valid else "INVALID counterexample"
    print(f"{args.path}: {status}")
    return 0 if result.ok and valid else 1


def cmd_net(args):
    system, delta = _resolve_pair(args)
    ring = parse_ring(args.ring)
    algebra = algebra_for(system)
    nets = enumerate_nets(system, delta, ring)
    entries, failures = [], 0
    for net in nets:
        level = level_of_S(net, algebra)
        closed = lsigma_is_closed(net, algebra)
        lemma = lemma_Lprime_check(net, algebra)
        ok = level.matches_net() and closed and lemma
        failures += not ok
        entries.append({"net": net.to_json(), "level": level.to_json(), "L_sigma_closed": closed,
                        "L_prime_lemma": lemma, "passed": ok})
    _write_json({"system": system.label, "ring": ring.to_json(), "nets": entries}, args.json)
    logger.info(f"{len(nets)} nets, {failures} failing")
    return 0 if failures == 0 else 1


def cmd_group(args):
    if ":" in args.target:
        system, _ = resolve_preset(args.target)
    else:
        system = build_system(args.target)
    ring = parse_ring(args.ring)
    algebra = algebra_for(system)
    rng = random.Random(args.seed)
    elements, failures = [], 0
    for _ in range(args.samples):
        g = random_element(algebra, ring, rng, rng.randint(1, 4))
        alpha = rng.randrange(algebra.num_roots)
        xi, zeta = random_parameter(ring, rng), random_parameter(ring, rng)
        checks = {
            "inverse": (g * g.inverse()).is_identity(),
            "one_parameter": (root_element(algebra, alpha, xi) * root_element(algebra, alpha, zeta)
                              == root_element(algebra, alpha, xi + zeta)),
        }
        try:
            checks["determinant_unit"] = determinant_is_unit(g)
        except ChevlabError as e:
            logger.warning(f"Determinant check skipped: {e}")
        failures += not all(checks.values())
        elements.append({"element": g.to_json(emit_matrix=args.emit_matrix), "checks": checks})
    _write_json({"system": system.label, "ring": ring.to_json(), "seed": args.seed, "elements": elements},
                args.json)
    return 0 if failures == 0 else 1


def cmd_tandem_verify(args):
    system = build_system(args.system)
    ring = parse_ring(args.ring)
    algebra = algebra_for(system)
    rng = random.Random(args.seed)
    checks, failures = 0, []
    for k in range(args.samples):
        T = random_tandem(algebra, ring, rng)
        for beta in range(algebra.num_roots):
            checks += 1
            if not verify_tandem_action(T, beta):
                failures.append({"sample": k, "beta": system.roots[beta].to_json()})
    _write_json({"system": system.label, "ring": ring.to_json(), "seed": args.seed,
                 "checks": checks, "failures": failures}, args.json)
    return 0 if not failures else 1


def cmd_tandem_extract(args):
    system, delta = _resolve_pair(args)
    ring = parse_ring(args.ring)
    algebra = algebra_for(system)
    rng = random.Random(args.seed)
    certificate = check_star(system, delta)
    if not certificate.ok:
        print(f"No admissible pair: condition (*) fails at {system.roots[certificate.gamma]}")
        return 1
    outside = delta.complement()
    for _ in range(100):
        T = random_tandem(algebra, ring, rng)
        candidates = [g for g in outside if not T.l.coefficient(g).is_zero()]
        if candidates:
            break
    else:
        print("No seeded tandem with a nonzero coefficient outside Delta")
        return 1
    gamma = rng.choice(candidates)
    a1, a2, _ = certificate.entry(gamma)
    try:
        result = extract_to_Uprime(T, gamma, a1, a2, t=args.t, delta=delta)
    except NoWitness as e:
        print(f"No witness: {e}")
        return 1
    roots = system.roots
    print(f"tandem l^gamma = {T.l.coefficient(gamma)} at gamma = {roots[gamma]}")
    print(f"pair a1 = {roots[a1]}, a2 = {roots[a2]}")
    print(f"case {result.case}" + (f", t = {result.t}" if result.t is not None else ""))
    print(f"coefficient at {roots[result.target]}: {result.coefficient}")
    print(f"result in U': {result.uprime is not None}")
    if args.json:
        _write_json(result.to_json(), args.json)
    return 0 if not result.coefficient.is_zero() else 1


def cmd_suite(args):
    algebras = None
    if args.mutate_constant:
        i, j = (int(x) for x in args.mutate_constant.split(","))
        system = build_system("D4")
        algebras = {"D4": ChevalleyAlgebra(system, algebra_for(system).constants.flipped(i, j))}
    suite = AcceptanceSuite(args.profile, args.seed, algebras)
    suite.run()
    out = args.out or CHEVLAB_REPORTS_DIR
    written = suite.generate_report(os.path.join(out, f"suite-{args.profile}-{suite.seed}.json"),
                                    os.path.join(out, 'report.md'))
    passed = sum(r.passed for r in suite.results)
    print(f"{passed}/{len(suite.results)} criteria passed")
    if suite.first_failure:
        print(f"First failing check: {suite.first_failure}")
    return 0 if suite.passed and written else 1


# -- parser ----------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="chevlab", description="Chevalley group overgroup checks")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, ring=False, pair=False):
        p.add_argument("--json", default=None, help="Write JSON output to this path")
        p.add_argument("--seed", type=int, default=CHEVLAB_SEED)
        if ring:
            p.add_argument("--ring", default="mod:3", help="int | mod:n | dual:mod:n | poly:int:x,y")
        if pair:
            p.add_argument("preset", nargs="?", help="Preset label, e.g. E7:A7 or D6:6A1")
            p.add_argument("--system", default=None)
            p.add_argument("--subsystem", default=None, help="Preset name or JSON list of root coordinates")

    p = sub.add_parser("roots", help="Describe a root system")
    p.add_argument("--system", required=True)
    common(p)
    p.set_defaults(func=cmd_roots)

    star = sub.add_parser("star", help="Condition (*)").add_subparsers(dest="star_command", required=True)
    p = star.add_parser("check", help="Decide condition (*) and emit a certificate")
    common(p, pair=True)
    p.set_defaults(func=cmd_star_check)
    p = star.add_parser("verify", help="Re-validate a certificate file")
    p.add_argument("path")
    p.set_defaults(func=cmd_star_verify)

    p = sub.add_parser("net", help="Enumerate nets over a finite ring and check their levels")
    common(p, ring=True, pair=True)
    p.set_defaults(func=cmd_net)

    p = sub.add_parser("group", help="Sample group elements and check group laws")
    p.add_argument("target", help="System label or preset")
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--emit-matrix", action="store_true")
    common(p, ring=True)
    p.set_defaults(func=cmd_group)

    tandem = sub.add_parser("tandem", help="Tandem checks").add_subparsers(dest="tandem_command", required=True)
    p = tandem.add_parser("verify", help="Check the tandem action identity on seeded tandems")
    p.add_argument("--system", default="D4")
    p.add_argument("--samples", type=int, default=200)
    common(p, ring=True)
    p.set_defaults(func=cmd_tandem_verify)
    p = tandem.add_parser("extract", help="Extract a U' tandem from a seeded tandem")
    p.add_argument("--t", type=int, default=None, help="Fix the bitandem parameter instead of searching")
    common(p, ring=True, pair=True)
    p.set_defaults(func=cmd_tandem_extract)

    p = sub.add_parser("suite", help="Run the acceptance suite")
    p.add_argument("--profile", choices=("quick", "full"), default="quick")
    p.add_argument("--seed", type=int, default=CHEVLAB_SEED)
    p.add_argument("--out", default=None, help=f"Report directory (default {CHEVLAB_REPORTS_DIR})")
    p.add_argument("--mutate-constant", default=None, metavar="I,J",
                   help="Negate the D4 structure constant N[I, J] before running")
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None):
    logging.basicConfig(level=getattr(logging, CHEVLAB_LOG_LEVEL, logging.INFO),
                        format='%(asctime)s - %(levelname)s - %(message)s')
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ChevlabError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return 2
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"I/O failure: {e}")
        return 1


if __name__ == '__main__':
    sys.exit(main())
