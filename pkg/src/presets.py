"""
Named (system, subsystem) pairs.

A generator list is read token by token:
    3              the simple root at Bourbaki position 3
    "-delta"       minus the highest root
    "delta(2,3,4,5)" / "-delta(1,...)"  (minus) the highest root of the span of those simple roots
    "perp(2,3,4,5)"  every root orthogonal to the span of those simple roots
    [2, 2, 0, ...]   explicit doubled coordinates
"""
import logging
import os
import re
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from rootsys import Root, RootSystemError, build_system, perp, subsystem_closure

logger = logging.getLogger(__name__)


class UnknownPreset(RootSystemError):
    pass


def _even_pairs(n):
    """e1 +- e2, e3 +- e4, ... in doubled coordinates."""
    roots = []
    for k in range(0, n, 2):
        for sign in (2, -2):
            v = [0] * n
            v[k], v[k + 1] = 2, sign
            roots.append(v)
    return roots


# Items of the case table in their printed order.
CASE_TABLE = {
    "E7:A7": ("E7", ["-delta", 1, 3, 4, 5, 6, 7]),
    "E6:A5+A1": ("E6", ["-delta", 1, 3, 4, 5, 6]),
    "E8:A8": ("E8", [1, 3, 4, 5, 6, 7, 8, "-delta"]),
    "E6:D5": ("E6", [1, 2, 3, 4, 5]),
    "E7:E6": ("E7", [1, 2, 3, 4, 5, 6]),
    "E7:A5+A2": ("E7", ["-delta", 1, 2, 4, 5, 6, 7]),
    "E7:2A3+A1": ("E7", ["-delta", 1, 2, 3, 5, 6, 7]),
    "E8:A1+A7": ("E8", ["-delta", 1, 2, 4, 5, 6, 7, 8]),
    "E8:D5+A3": ("E8", [1, 2, 3, 4, 5, 7, 8, "-delta"]),
    "E8:2A4": ("E8", [1, 2, 3, 4, 6, 7, 8, "-delta"]),
    "E8:4A2": ("E8", [1, 3, 5, 6, 2, "-delta(1,2,3,4,5,6)", 8, "-delta"]),
    "E6:3A2": ("E6", [1, 3, 5, 6, 2, "-delta"]),
    "E8:E6+A2": ("E8", [1, 2, 3, 4, 5, 6, 8, "-delta"]),
    "E7:D6+A1": ("E7", ["-delta", 1, 3, 4, 5, 2, 7]),
    "E8:D8": ("E8", [2, 3, 4, 5, 6, 7, 8, "-delta"]),
    "E8:E7+A1": ("E8", [1, 2, 3, 4, 5, 6, 7, "-delta"]),
    "E7:D4+3A1": ("E7", [2, 3, 4, 5, "perp(2,3,4,5)"]),
    "E8:D6+2A1": ("E8", [2, 3, 4, 5, 6, 7, "perp(2,3,4,5,6,7)"]),
    "E8:2D4": ("E8", [2, 3, 4, 5, "perp(2,3,4,5)"]),
    "E7:7A1": ("E7", [2, 3, 5, "delta(2,3,4,5)", "perp(2,3,4,5)"]),
    "D2m:2mA1": None,
    "E8:8A1": ("E8", _even_pairs(8)),
}

NEGATIVE_CONTROLS = {
    "A2:A1": ("A2", [1]),
    "A3:2A1": ("A3", [1, 3]),
    "D4:2A1": ("D4", [1, 3]),
}

# Case-table items where no orthogonal pair separates Sigma outside Delta for
# some root; check_star returns a counterexample for these.
REFUTED_ITEMS = ("E6:D5", "E7:E6", "E8:A1+A7")

_SPAN_TOKEN = re.compile(r"(-?delta|perp)\(([\d,\s]+)\)")


def preset_definition(label):
    """Returns (system label, token list) for a preset label."""
    match = re.fullmatch(r"D(\d+):(\d+)A1", label)
    if match and match.group(1) == match.group(2):
        n = int(match.group(1))
        if n < 4 or n % 2:
            raise UnknownPreset(f"'{label}' needs an even rank of at least 4")
        return f"D{n}", _even_pairs(n)
    definition = CASE_TABLE.get(label) or NEGATIVE_CONTROLS.get(label)
    if definition is None:
        raise UnknownPreset(f"Unknown preset '{label}'")
    return definition


def _expand(system, token):
    if isinstance(token, int):
        return [system.simple_roots[token - 1]]
    if isinstance(token, (list, tuple)):
        return [system.idx(Root(token))]
    if token == "-delta":
        return [system.negation[system.highest_root()]]
    match = _SPAN_TOKEN.fullmatch(token.replace(" ", ""))
    if not match:
        raise UnknownPreset(f"Bad generator token '{token}'")
    head = match.group(1)
    positions = [int(p) for p in match.group(2).split(",")]
    if head == "perp":
        span = subsystem_closure(system, [system.simple_roots[p - 1] for p in positions])
        return perp(system, span)
    top = system.highest_root(positions)
    return [system.negation[top]] if head == "-delta" else [top]


def resolve_preset(label):
    """
    Builds the root system and subsystem named by a preset label.
    Returns:
        (RootSystem, Subsystem)
    """
    system_label, tokens = preset_definition(label)
    system = build_system(system_label)
    generators = []
    for token in tokens:
        generators.extend(_expand(system, token))
    delta = subsystem_closure(system, generators)
    logger.info(f"Preset {label}: |Phi| = {len(system)}, |Delta| = {len(delta)}")
    return system, delta


def case_table_labels(d_ranks=(4, 6)):
    """All case-table labels with the D2m family instantiated for the given ranks."""
    labels = []
    for label in CASE_TABLE:
        if label == "D2m:2mA1":
            labels.extend(f"D{n}:{n}A1" for n in d_ranks)
        else:
            labels.append(label)
    return labels


def expected_star_status(label):
    """'ok' when check_star should certify the preset, 'fail' when it should refute it."""
    preset_definition(label)
    if label in NEGATIVE_CONTROLS or label in REFUTED_ITEMS:
        return "fail"
    return "ok"
