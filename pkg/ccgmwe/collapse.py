"""Collapsing MWEs into single tokens in trees, dependency graphs and raw
token sequences."""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Set, Tuple

import pandas

from .category import Category, arity, render
from .errors import DataInconsistencyError, OverlapError
from .recognizer import MweOccurrence
from .treebank import Dependency, MWE_JOINER, SentenceRecord, Tree, join_units
from .treebank.tree import lowest_dominating_path, index_leaves, node_at, replace_nodes

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CollapseOutcome:
    tree: Tree
    kept: Tuple[MweOccurrence, ...]
    discarded: Tuple[MweOccurrence, ...]
    index_map: Mapping[int, int]


def check_disjoint(occurrences: Iterable[MweOccurrence], length: Optional[int] = None):
    seen: Set[int] = set()
    for occurrence in occurrences:
        for i in occurrence.indices:
            if i in seen:
                raise OverlapError("Leaf {} belongs to more than one MWE".format(i))
            if length is not None and not 0 <= i < length:
                raise OverlapError("MWE {} refers to leaf {} of a {}-token sentence".format(
                    occurrence.joined, i, length))
            seen.add(i)


def build_index_map(length: int, occurrences: Iterable[MweOccurrence]) -> Dict[int, int]:
    """Map original positions to positions after merging each occurrence's units."""
    owner = {}
    for occurrence in occurrences:
        for i in occurrence.indices:
            owner[i] = occurrence.start
    index_map = {}
    position = -1
    for i in range(length):
        if i not in owner or owner[i] == i:
            position += 1
        index_map[i] = position
    return index_map


def collapse_tree(tree: Tree, occurrences: Sequence[MweOccurrence], joiner: str = MWE_JOINER) -> CollapseOutcome:
    """Collapse every occurrence whose units form a constituent; discard the rest.

    A collapsed MWE becomes one leaf labelled with the category of the lowest
    node dominating its units, which must dominate nothing else.
    """
    leaves = tree.leaves()
    check_disjoint(occurrences, len(leaves))
    kept, discarded, replacements = [], [], {}
    for occurrence in sorted(occurrences, key=lambda o: o.start):
        indices = set(occurrence.indices)
        path = tuple(lowest_dominating_path(tree, indices))
        node = node_at(tree, path)
        if {leaf.index for leaf in node.leaves()} != indices:
            logger.debug("Discarding %s: units are not siblings", occurrence.joined)
            discarded.append(occurrence)
            continue
        unit_tags = [leaves[i].pos for i in occurrence.indices]
        replacements[path] = Tree(node.category, token=join_units(occurrence.tokens, joiner),
                                  pos=None if None in unit_tags else unit_tags[-1])
        kept.append(occurrence)
    collapsed = index_leaves(replace_nodes(tree, replacements)) if replacements else tree
    return CollapseOutcome(collapsed, tuple(kept), tuple(discarded), build_index_map(len(leaves), kept))


def collapsed_categories(outcome: CollapseOutcome) -> Dict[int, Category]:
    """Category of each collapsed MWE leaf, keyed by the original start of the MWE."""
    leaves = outcome.tree.leaves()
    return {o.start: leaves[outcome.index_map[o.start]].category for o in outcome.kept}


def _unit_owners(occurrences):
    owner = {}
    for occurrence in occurrences:
        for i in occurrence.indices:
            owner[i] = occurrence
    return owner


def _functor_category(dep: Dependency, collapsed: Optional[Category]) -> Category:
    if collapsed is None:
        return dep.cat_j
    if dep.arg_k > arity(collapsed):
        logger.debug("%s has no argument slot %d, keeping %s for %s", render(collapsed), dep.arg_k,
                     render(dep.cat_j), dep.word_j)
        return dep.cat_j
    return collapsed


def _rewrite(deps, occurrences, index_map, categories, joiner):
    owner = _unit_owners(occurrences)
    collapsed = set()
    rewritten = 0
    for dep in deps:
        if dep.i not in index_map or dep.j not in index_map:
            raise DataInconsistencyError("Dependency {}->{} outside the sentence".format(dep.i + 1, dep.j + 1))
        mwe_i, mwe_j = owner.get(dep.i), owner.get(dep.j)
        if mwe_i is not None and mwe_i is mwe_j:
            continue
        word_i, word_j, cat_j = dep.word_i, dep.word_j, dep.cat_j
        if mwe_i is not None:
            word_i = join_units(mwe_i.tokens, joiner)
        if mwe_j is not None:
            word_j = join_units(mwe_j.tokens, joiner)
            cat_j = _functor_category(dep, categories.get(mwe_j.start) if categories else None)
        collapsed.add(Dependency(index_map[dep.i], index_map[dep.j], cat_j, dep.arg_k, word_i, word_j))
        rewritten += 1
    if rewritten > len(collapsed):
        logger.debug("%d rewritten edges coincide with another edge", rewritten - len(collapsed))
    return collapsed


def collapse_dependencies(deps: Iterable[Dependency], kept: Sequence[MweOccurrence], index_map: Mapping[int, int],
                          categories: Optional[Mapping[int, Category]] = None,
                          joiner: str = MWE_JOINER) -> Set[Dependency]:
    """Delete internal edges, reroute mediating edges to the MWE and re-index.

    ``categories`` gives the collapsed category of each MWE by the original
    position of its first unit. A swallowed functor keeps its own category
    when its MWE has no entry or the entry has no slot ``arg_k``.
    """
    check_disjoint(kept)
    return _rewrite(deps, kept, index_map, categories, joiner)


def collapse_all_dependencies(deps: Iterable[Dependency], occurrences: Sequence[MweOccurrence],
                              joiner: str = MWE_JOINER) -> Set[Dependency]:
    """Collapse every occurrence, constituent or not, keeping functor categories."""
    deps = list(deps)
    check_disjoint(occurrences)
    length = 1 + max([max(d.i, d.j) for d in deps] + [o.end for o in occurrences] + [-1])
    return _rewrite(deps, occurrences, build_index_map(length, occurrences), None, joiner)


def collapse_tokens(tokens: Sequence[str], occurrences: Sequence[MweOccurrence],
                    joiner: str = MWE_JOINER) -> Tuple[Tuple[str, ...], Dict[int, int]]:
    check_disjoint(occurrences, len(tokens))
    starts = {o.start: o for o in occurrences}
    swallowed = {i for o in occurrences for i in o.indices[1:]}
    collapsed = []
    for i, token in enumerate(tokens):
        if i in starts:
            collapsed.append(join_units(starts[i].tokens, joiner))
        elif i not in swallowed:
            collapsed.append(token)
    return tuple(collapsed), build_index_map(len(tokens), occurrences)


def detect_cycles(deps: Iterable[Dependency]) -> int:
    """Count word pairs joined by edges in both directions."""
    edges = {(d.i, d.j) for d in deps}
    return sum(1 for i, j in edges if i < j and (j, i) in edges)


@dataclass(frozen=True)
class CollapseStats:
    sentence_id: str
    recognized: int
    kept: int
    discarded: int
    cycles: int


def collapse_record(record: SentenceRecord, occurrences: Sequence[MweOccurrence],
                    joiner: str = MWE_JOINER) -> Tuple[SentenceRecord, CollapseOutcome, CollapseStats]:
    """Collapse one gold sentence: its tree and, when present, its dependencies."""
    outcome = collapse_tree(record.tree, occurrences, joiner)
    deps = None
    cycles = 0
    if record.dependencies is not None:
        deps = collapse_dependencies(record.dependencies, outcome.kept, outcome.index_map,
                                     collapsed_categories(outcome), joiner)
        cycles = detect_cycles(deps)
        if cycles:
            logger.warning("Sentence %s: collapsing created %d cyclic dependencies", record.sentence_id, cycles)
    collapsed = SentenceRecord(record.sentence_id, outcome.tree, dependencies=deps)
    stats = CollapseStats(record.sentence_id, len(occurrences), len(outcome.kept), len(outcome.discarded), cycles)
    return collapsed, outcome, stats


def summarize(stats: Iterable[CollapseStats]) -> Dict[str, float]:
    stats = list(stats)
    recognized = sum(s.recognized for s in stats)
    kept = sum(s.kept for s in stats)
    return {
        'sentences': len(stats),
        'recognized': recognized,
        'kept': kept,
        'discarded': sum(s.discarded for s in stats),
        'kept_pct': 100.0 * kept / recognized if recognized else 0.0,
        'cycles': sum(s.cycles for s in stats),
    }


def collapse_treebank(records: Iterable[SentenceRecord], occurrences: Mapping[str, Sequence[MweOccurrence]],
                      joiner: str = MWE_JOINER):
    """Collapse every record with its occurrences; records without a tree pass through.

    Returns the collapsed records, the outcome of each collapsed record keyed
    by sentence id, and the per-sentence stats.
    """
    collapsed, outcomes, stats = [], {}, []
    for record in records:
        found = occurrences.get(record.sentence_id, ())
        if record.tree is None:
            collapsed.append(record)
            stats.append(CollapseStats(record.sentence_id, len(found), 0, len(found), 0))
            continue
        new_record, outcome, record_stats = collapse_record(record, found, joiner)
        collapsed.append(new_record)
        outcomes[record.sentence_id] = outcome
        stats.append(record_stats)
    totals = summarize(stats)
    logger.info("Collapsed %d of %d MWEs (%.1f%% siblings), %d cyclic dependencies",
                totals['kept'], totals['recognized'], totals['kept_pct'], totals['cycles'])
    return collapsed, outcomes, stats


STATS_COLUMNS = ['id', 'recognized', 'kept', 'discarded', 'cycles']


def write_stats(stats: Iterable[CollapseStats], path):
    rows = [(s.sentence_id, s.recognized, s.kept, s.discarded, s.cycles) for s in stats]
    pandas.DataFrame(rows, columns=STATS_COLUMNS).to_csv(path, sep='\t', index=False)
