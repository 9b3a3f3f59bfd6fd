"""Rebuild dependencies over the original tokens from a baseline parse and a
parse of MWE-collapsed tokens."""
import logging
from typing import Dict, Iterable, List, Sequence, Set

from ..category import arity
from ..collapse import build_index_map, check_disjoint
from ..errors import ConfigError, DataInconsistencyError
from ..recognizer import MweOccurrence
from ..treebank import Dependency
from .scoring import EdgeClass, classify_edge, unit_map

logger = logging.getLogger(__name__)

MED_FROM_A = 'medFromA'
RIGHTMOST_MED = 'rightmostMed'
LEFTMOST_MED = 'leftmostMed'
SCHEMES = (MED_FROM_A, RIGHTMOST_MED, LEFTMOST_MED)


def combine_models(out_a: Iterable[Dependency], out_b: Iterable[Dependency], occurrences: Sequence[MweOccurrence],
                   scheme: str, length: int) -> Set[Dependency]:
    """Combine baseline dependencies ``out_a`` with collapsed-model dependencies ``out_b``.

    External edges come from ``out_b`` and internal edges from ``out_a``.
    Mediating edges come from ``out_a`` under ``medFromA``; otherwise the MWE
    end of each ``out_b`` mediating edge is attached to the rightmost or
    leftmost unit. ``length`` is the number of original tokens.
    """
    if scheme not in SCHEMES:
        raise ConfigError("Unknown combination scheme {!r}. Supported schemes: {}".format(scheme, ", ".join(SCHEMES)))
    out_a, out_b = list(out_a), list(out_b)
    check_disjoint(occurrences, length)
    units = unit_map(occurrences)
    index_map = build_index_map(length, occurrences)
    expand: Dict[int, List[int]] = {}
    for original, collapsed in index_map.items():
        expand.setdefault(collapsed, []).append(original)
    by_start = {o.start: o for o in occurrences}
    functor_cats = {d.j: d.cat_j for d in out_a}

    combined = set()
    for dep in out_a:
        if max(dep.i, dep.j) >= length:
            raise DataInconsistencyError("Baseline dependency {}->{} outside a {}-token sentence".format(
                dep.i + 1, dep.j + 1, length))
        edge = classify_edge(dep, units)
        if edge is EdgeClass.INTERNAL or (edge is EdgeClass.MEDIATING and scheme == MED_FROM_A):
            combined.add(dep)

    for dep in out_b:
        if dep.i not in expand or dep.j not in expand:
            raise DataInconsistencyError("Collapsed index {} cannot be mapped back".format(
                (dep.i if dep.i not in expand else dep.j) + 1))
        i_units, j_units = expand[dep.i], expand[dep.j]
        mediating = len(i_units) > 1 or len(j_units) > 1
        if mediating and scheme == MED_FROM_A:
            continue
        pick = -1 if scheme == RIGHTMOST_MED else 0
        i, j = i_units[pick], j_units[pick]
        word_i = by_start[i_units[0]].tokens[pick] if len(i_units) > 1 else dep.word_i
        word_j = by_start[j_units[0]].tokens[pick] if len(j_units) > 1 else dep.word_j
        cat_j = dep.cat_j
        if len(j_units) > 1 and j in functor_cats and dep.arg_k <= arity(functor_cats[j]):
            cat_j = functor_cats[j]
        combined.add(Dependency(i, j, cat_j, dep.arg_k, word_i, word_j))
    logger.debug("%s: %d edges from %d baseline and %d collapsed edges", scheme, len(combined), len(out_a), len(out_b))
    return combined


def combine_all(out_a, out_b, occurrences, scheme, lengths) -> Dict[str, Set[Dependency]]:
    """Apply :func:`combine_models` to every sentence id of ``out_a``."""
    return {sid: combine_models(out_a[sid], out_b.get(sid, set()), occurrences.get(sid, []), scheme, lengths[sid])
            for sid in out_a}
