#!/usr/bin/env python

"""Tests for `ccgmwe.collapse`."""
import random
import unittest

from ccgmwe.category import parse_category
from ccgmwe.collapse import (build_index_map, collapse_all_dependencies, collapse_dependencies, collapse_record,
                             collapse_tokens, collapse_tree, collapse_treebank, collapsed_categories, detect_cycles,
                             summarize)
from ccgmwe.errors import DataInconsistencyError, OverlapError
from ccgmwe.evaluation import EdgeClass, classify_edge, edge_counts, unit_map
from ccgmwe.recognizer import MweOccurrence
from ccgmwe.treebank import Dependency, SentenceRecord, parse_tree, read_treebank, write_tree
from ccgmwe.parser import extract_dependencies

from .fixtures import (ACCORDING_TREE, BUREAU_COLLAPSED, BUREAU_TREE, STACKED_TREE, TREEBANK, VINKEN_COLLAPSED_DEPS,
                       VINKEN_DEPS, VINKEN_TREE, dependencies)

MR_VINKEN = MweOccurrence((0, 1), ('Mr.', 'Vinken'), 'proper-noun')
ELSEVIER = MweOccurrence((5, 6), ('Elsevier', 'N.V.'), 'proper-noun')
STACKED = [MweOccurrence((0, 1), ('a', 'b')), MweOccurrence((3, 4), ('d', 'e')), MweOccurrence((5, 6), ('f', 'g'))]


def random_graph(rng, length):
    deps = set()
    for _ in range(rng.randint(0, 3 * length)):
        i, j = rng.sample(range(length), 2)
        deps.add(Dependency(i, j, parse_category('(S\\NP)/NP'), rng.randint(1, 2), 'w%d' % i, 'w%d' % j))
    return deps


def random_overlay(rng, length):
    occurrences, position = [], 0
    while position < length - 1:
        if rng.random() < 0.3:
            size = min(rng.randint(2, 3), length - position)
            indices = tuple(range(position, position + size))
            occurrences.append(MweOccurrence(indices, tuple('w%d' % i for i in indices)))
            position += size
        else:
            position += 1
    return occurrences


class TestCollapseTree(unittest.TestCase):

    def test_sibling_mwe_becomes_one_leaf(self):
        outcome = collapse_tree(parse_tree(BUREAU_TREE),
                                [MweOccurrence((0, 1, 2), ('Publishers', 'Information', 'Bureau'))], joiner='_')
        self.assertEqual(write_tree(outcome.tree), BUREAU_COLLAPSED)
        self.assertEqual(len(outcome.kept), 1)
        self.assertEqual(outcome.index_map, {0: 0, 1: 0, 2: 0})

    def test_non_sibling_mwe_is_discarded(self):
        tree = parse_tree(ACCORDING_TREE)
        outcome = collapse_tree(tree, [MweOccurrence((0, 1), ('according', 'to'), 'stop-word')])
        self.assertEqual(outcome.tree, tree)
        self.assertEqual(outcome.kept, ())
        self.assertEqual(len(outcome.discarded), 1)

    def test_collapse_in_sentence(self):
        outcome = collapse_tree(parse_tree(VINKEN_TREE), [MR_VINKEN, ELSEVIER])
        leaves = outcome.tree.leaves()
        self.assertEqual([leaf.token for leaf in leaves][:5], ['mr.+vinken', 'is', 'chairman', 'of', 'elsevier+n.v.'])
        self.assertEqual([leaf.index for leaf in leaves], list(range(10)))
        self.assertEqual(collapsed_categories(outcome), {0: parse_category('N'), 5: parse_category('N')})
        self.assertTrue(all(node.derivable for node in outcome.tree.nodes()))

    def test_pos_of_rightmost_unit(self):
        tree = parse_tree('(NP (N (N/N New N) (N York NNP)))')
        outcome = collapse_tree(tree, [MweOccurrence((0, 1), ('New', 'York'))])
        self.assertEqual(write_tree(outcome.tree), '(NP (N new+york NNP))')

    def test_overlapping_occurrences(self):
        with self.assertRaises(OverlapError):
            collapse_tree(parse_tree(BUREAU_TREE),
                          [MweOccurrence((0, 1), ('a', 'b')), MweOccurrence((1, 2), ('b', 'c'))])
        with self.assertRaises(OverlapError):
            collapse_tree(parse_tree(BUREAU_TREE), [MweOccurrence((2, 3), ('a', 'b'))])

    def test_independent_of_occurrence_order(self):
        tree = parse_tree(STACKED_TREE)
        expected = collapse_tree(tree, STACKED)
        self.assertEqual([o.joined for o in expected.kept], ['d+e'])
        self.assertEqual([o.joined for o in expected.discarded], ['a+b', 'f+g'])
        rng = random.Random(3)
        for _ in range(20):
            shuffled = rng.sample(STACKED, len(STACKED))
            self.assertEqual(collapse_tree(tree, shuffled), expected)
        vinken = parse_tree(VINKEN_TREE)
        self.assertEqual(collapse_tree(vinken, [ELSEVIER, MR_VINKEN]), collapse_tree(vinken, [MR_VINKEN, ELSEVIER]))

    def test_no_occurrences(self):
        tree = parse_tree(VINKEN_TREE)
        outcome = collapse_tree(tree, [])
        self.assertEqual(outcome.tree, tree)
        self.assertEqual(outcome.index_map, {i: i for i in range(12)})


class TestCollapseDependencies(unittest.TestCase):

    def test_sentence_graph(self):
        deps = dependencies(VINKEN_DEPS)
        index_map = build_index_map(12, [MR_VINKEN, ELSEVIER])
        collapsed = collapse_dependencies(deps, [MR_VINKEN, ELSEVIER], index_map)
        self.assertEqual(collapsed, dependencies(VINKEN_COLLAPSED_DEPS))

    def test_joiner(self):
        deps = dependencies([
            (2, 1, 'N/N', 1, 'Vinken', 'Mr.'),
            (2, 3, r'(S\NP)/NP', 1, 'Vinken', 'is'),
            (4, 3, r'(S\NP)/NP', 2, 'chairman', 'is'),
        ])
        collapsed = collapse_dependencies(deps, [MR_VINKEN], build_index_map(4, [MR_VINKEN]), joiner='_')
        lines = sorted(d.to_line() for d in collapsed)
        self.assertEqual(lines, ['1\t2\t(S\\NP)/NP\t1\tmr._vinken\tis', '3\t2\t(S\\NP)/NP\t2\tchairman\tis'])

    def test_swallowed_functor_takes_collapsed_category(self):
        deps = dependencies([(1, 2, r'((S\NP)\(S\NP))/PP', 1, 'rose', 'according'),
                             (4, 3, 'PP/NP', 1, 'Bureau', 'to')])
        occurrence = MweOccurrence((1, 2), ('according', 'to'))
        index_map = build_index_map(4, [occurrence])
        categories = {1: parse_category(r'((S\NP)\(S\NP))/NP')}
        collapsed = collapse_dependencies(deps, [occurrence], index_map, categories)
        self.assertEqual({str(d.cat_j) for d in collapsed}, {r'((S\NP)\(S\NP))/NP'})
        kept_category = collapse_dependencies(deps, [occurrence], index_map)
        self.assertEqual({str(d.cat_j) for d in kept_category}, {r'((S\NP)\(S\NP))/PP', 'PP/NP'})

    def test_categories_after_a_discarded_occurrence(self):
        outcome = collapse_tree(parse_tree(STACKED_TREE), STACKED)
        categories = collapsed_categories(outcome)
        self.assertEqual(categories, {3: parse_category('N')})
        deps = dependencies([(8, 6, r'(S\NP)/NP', 2, 'h', 'f'), (3, 4, 'N/N', 1, 'c', 'd'),
                             (5, 4, 'N/N', 1, 'e', 'd')])
        collapsed = collapse_dependencies(deps, STACKED, build_index_map(8, STACKED), categories)
        self.assertEqual(collapsed, {
            Dependency(4, 3, parse_category(r'(S\NP)/NP'), 2, 'h', 'f+g'),
            Dependency(1, 2, parse_category('N/N'), 1, 'c', 'd+e'),
        })

    def test_index_outside_map(self):
        deps = dependencies([(5, 1, 'N/N', 1, 'a', 'b')])
        with self.assertRaises(DataInconsistencyError):
            collapse_dependencies(deps, [MR_VINKEN], build_index_map(3, [MR_VINKEN]))

    def test_conservation_on_random_graphs(self):
        rng = random.Random(1)
        for _ in range(1000):
            length = rng.randint(2, 12)
            deps = random_graph(rng, length)
            occurrences = random_overlay(rng, length)
            units = unit_map(occurrences)
            counts = edge_counts(deps, units)
            self.assertEqual(sum(counts.values()), len(deps))
            index_map = build_index_map(length, occurrences)
            collapsed = collapse_dependencies(deps, occurrences, index_map)
            kept = len(deps) - counts[EdgeClass.INTERNAL]
            images = {(index_map[d.i], index_map[d.j], d.arg_k) for d in deps
                      if classify_edge(d, units) is not EdgeClass.INTERNAL}
            merged = kept - len(images)
            self.assertEqual(len(collapsed) + merged, kept)
            self.assertEqual({(d.i, d.j, d.arg_k) for d in collapsed}, images)
            for dep in collapsed:
                self.assertLess(max(dep.i, dep.j), length - sum(len(o) - 1 for o in occurrences))

    def test_collapse_all_keeps_categories(self):
        deps = dependencies(VINKEN_DEPS)
        collapsed = collapse_all_dependencies(deps, [MR_VINKEN, ELSEVIER])
        self.assertEqual(collapsed, dependencies(VINKEN_COLLAPSED_DEPS))

    def test_cycles(self):
        deps = dependencies([(1, 2, 'N/N', 1, 'a', 'b'), (2, 1, 'N/N', 1, 'b', 'a'), (3, 1, 'N/N', 1, 'c', 'a')])
        self.assertEqual(detect_cycles(deps), 1)


class TestCollapseTokensAndRecords(unittest.TestCase):

    def test_tokens(self):
        tokens = parse_tree(VINKEN_TREE)
        words = tuple(leaf.token for leaf in tokens.leaves())
        collapsed, index_map = collapse_tokens(words, [MR_VINKEN, ELSEVIER])
        self.assertEqual(collapsed[:5], ('mr.+vinken', 'is', 'chairman', 'of', 'elsevier+n.v.'))
        self.assertEqual(len(collapsed), 10)
        self.assertEqual(index_map[6], 4)
        self.assertEqual(index_map[11], 9)

    def test_record(self):
        tree = parse_tree(VINKEN_TREE)
        record = SentenceRecord('01.001', tree, dependencies=extract_dependencies(tree))
        collapsed, outcome, stats = collapse_record(record, [MR_VINKEN, ELSEVIER])
        self.assertEqual(collapsed.dependencies, dependencies(VINKEN_COLLAPSED_DEPS))
        self.assertEqual(collapsed.tokens[0], 'mr.+vinken')
        self.assertEqual((stats.recognized, stats.kept, stats.discarded, stats.cycles), (2, 2, 0, 0))

    def test_treebank_stats(self):
        records = read_treebank(TREEBANK)
        records = [SentenceRecord(r.sentence_id, r.tree, dependencies=extract_dependencies(r.tree)) for r in records]
        occurrences = {
            '01.006': [MweOccurrence((2, 3), ('according', 'to'), 'stop-word'),
                       MweOccurrence((4, 5, 6), ('Publishers', 'Information', 'Bureau'), 'proper-noun')],
        }
        collapsed, outcomes, stats = collapse_treebank(records, occurrences)
        self.assertEqual(len(collapsed), 50)
        totals = summarize(stats)
        counts = [totals[key] for key in ('sentences', 'recognized', 'kept', 'discarded')]
        self.assertEqual(counts, [50, 2, 1, 1])
        self.assertEqual(totals['kept_pct'], 50.0)
        self.assertEqual(outcomes['01.006'].tree.leaves()[4].token, 'publishers+information+bureau')


if __name__ == '__main__':
    unittest.main()
