#!/usr/bin/env python

"""Tests for `ccgmwe.parser`."""
import math
import os
import random
import tempfile
import unittest

from ccgmwe.category import Atom, arity, parse_category
from ccgmwe.errors import CcgMweError, FormatError
from ccgmwe.parser import (count_combinations, extract_dependencies, load_model, parse, pos_tag, save_model,
                           score_tree, train)
from ccgmwe.treebank import Dependency, SentenceRecord, Tree, parse_tree, read_treebank, write_tree

from .fixtures import TREEBANK, VINKEN_DEPS, VINKEN_TREE, dependencies

CATEGORIES = [Atom('S'), Atom('NP'), Atom('N')]
VOCABULARY = ['a', 'b', 'c']


def random_tree(rng, depth=0):
    cat = rng.choice(CATEGORIES)
    roll = rng.random()
    if depth >= 2 or roll < 0.35:
        return Tree(cat, token=rng.choice(VOCABULARY))
    if roll < 0.5:
        return Tree(cat, (random_tree(rng, depth + 1),))
    return Tree(cat, (random_tree(rng, depth + 1), random_tree(rng, depth + 1)))


def with_unary_chains(model, trees):
    found = []
    frontier = [(tree, {tree.category}) for tree in trees]
    while frontier:
        tree, seen = frontier.pop()
        found.append(tree)
        for parent, _ in model.unary.get(tree.category, ()):
            if parent not in seen:
                frontier.append((Tree(parent, (tree,)), seen | {parent}))
    return found


def all_derivations(model, tokens, tags):
    """Every tree the model can build over ``tokens``, unary cycles excluded."""
    spans = {}
    n = len(tokens)
    for i, token in enumerate(tokens):
        leaves = [Tree(cat, token=token, pos=tags[i], index=i) for cat, _ in model.leaf_scores(token, tags[i])]
        spans[i, i + 1] = with_unary_chains(model, leaves)
    for width in range(2, n + 1):
        for start in range(0, n - width + 1):
            end = start + width
            built = []
            for split in range(start + 1, end):
                for left in spans[start, split]:
                    for right in spans[split, end]:
                        for parent, _ in model.binary.get((left.category, right.category), ()):
                            built.append(Tree(parent, (left, right)))
            spans[start, end] = with_unary_chains(model, built)
    return spans[0, n]


class TestTraining(unittest.TestCase):

    def setUp(self):
        self.records = read_treebank(TREEBANK)
        self.model = train(self.records)

    def test_distributions_are_normalized(self):
        for table, condition, mapping in self.model.distributions():
            self.assertAlmostEqual(sum(mapping.values()), 1.0, places=9, msg="{} {}".format(table, condition))

    def test_parses_every_training_sentence(self):
        self.assertEqual(len(self.records), 50)
        for record in self.records:
            with self.subTest(sentence=record.sentence_id):
                result = parse(self.model, record.tokens)
                self.assertFalse(result.failed)
                self.assertEqual(tuple(leaf.token for leaf in result.tree.leaves()), record.tokens)
                self.assertGreaterEqual(result.logprob, score_tree(self.model, record.tree) - 1e-9)
                self.assertAlmostEqual(score_tree(self.model, result.tree), result.logprob, places=9)

    def test_save_and_load(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'model.tsv')
            save_model(self.model, path)
            loaded = load_model(path)
        self.assertEqual(loaded.root, self.model.root)
        self.assertEqual(loaded.rules, self.model.rules)
        self.assertEqual(loaded.lexicon, self.model.lexicon)
        self.assertEqual(loaded.backoff, self.model.backoff)
        self.assertEqual(loaded.token_counts, self.model.token_counts)
        self.assertEqual((loaded.smoothing, loaded.unknown_threshold), (0.1, 2))
        tokens = self.records[7].tokens
        self.assertEqual(parse(loaded, tokens).logprob, parse(self.model, tokens).logprob)

    def test_load_rejects_other_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'model.tsv')
            with open(path, 'w') as f:
                f.write('a\tb\n1\t2\n')
            with self.assertRaises(FormatError):
                load_model(path)

    def test_invalid_training(self):
        with self.assertRaises(CcgMweError):
            train([])
        with self.assertRaises(CcgMweError):
            train(self.records, smoothing=-1)


class TestParsing(unittest.TestCase):

    def test_viterbi_matches_enumeration(self):
        rng = random.Random(3)
        for _ in range(500):
            records = [SentenceRecord(str(n), random_tree(rng)) for n in range(4)]
            model = train(records, smoothing=rng.choice([0.1, 0.5, 1.0]), unknown_threshold=1)
            tokens = [rng.choice(VOCABULARY + ['z']) for _ in range(rng.randint(1, 4))]
            tags = pos_tag(model, tokens)
            result = parse(model, tokens, tags)
            scores = [score_tree(model, tree, tags) for tree in all_derivations(model, tokens, tags)]
            best = max(scores, default=-math.inf)
            if best == -math.inf:
                self.assertTrue(result.failed)
            else:
                self.assertAlmostEqual(result.logprob, best, places=9)
                self.assertAlmostEqual(score_tree(model, result.tree, tags), best, places=9)

    def test_no_parse(self):
        model = train([SentenceRecord('1', parse_tree(r'(S (NP (N dogs NNS)) (S\NP bark VBP))'))],
                      unknown_threshold=1)
        result = parse(model, ['bark', 'dogs'])
        self.assertTrue(result.failed)
        self.assertEqual(result.logprob, -math.inf)
        self.assertFalse(parse(model, ['dogs', 'bark']).failed)

    def test_single_derivation(self):
        text = r'(S (NP John N) (S\NP ((S\NP)/NP buys V) (NP shares N)))'
        model = train([SentenceRecord('1', parse_tree(text))], unknown_threshold=1)
        self.assertAlmostEqual(model.rules[parse_category('S')][(parse_category('NP'), parse_category(r'S\NP'))], 1.0)
        result = parse(model, ['John', 'buys', 'shares'])
        self.assertEqual(write_tree(result.tree), text)
        self.assertAlmostEqual(result.logprob, math.log(0.25))
        buys = parse_category(r'(S\NP)/NP')
        self.assertEqual(extract_dependencies(result.tree), {Dependency(0, 1, buys, 1, 'John', 'buys'),
                                                             Dependency(2, 1, buys, 2, 'shares', 'buys')})

    def test_unseen_mwe_token_backs_off_to_its_tag(self):
        model = train([SentenceRecord('1', parse_tree(r'(S (NP (NP/N the D) (N tag N)) (S\NP helps V))')),
                       SentenceRecord('2', parse_tree(r'(S (NP (NP/N the D) (N speech N)) (S\NP helps V))'))])
        tokens = ['the', 'part+of+speech', 'helps']
        self.assertFalse(model.is_known('part+of+speech'))
        self.assertEqual(pos_tag(model, tokens), ['D', 'N', 'V'])
        result = parse(model, tokens)
        self.assertEqual(write_tree(result.tree), r'(S (NP (NP/N the D) (N part+of+speech N)) (S\NP helps V))')

    def test_empty_sentence(self):
        model = train([SentenceRecord('1', parse_tree('(N dogs NNS)'))])
        with self.assertRaises(ValueError):
            parse(model, [])


class TestPosTags(unittest.TestCase):

    def setUp(self):
        records = [
            SentenceRecord('1', parse_tree(r'(S (NP (N (N/N stock NN) (N exchange NN))) (S\NP rose VBD))')),
            SentenceRecord('2', parse_tree(r'(S (NP (N shares NNS)) (S\NP rose VBN))')),
        ]
        self.model = train(records)

    def test_most_frequent_tag(self):
        self.assertEqual(pos_tag(self.model, ['stock', 'shares', 'rose']), ['NN', 'NNS', 'VBD'])

    def test_unknown_tokens(self):
        self.assertEqual(pos_tag(self.model, ['Stock', 'zebra']), ['NN', 'NN'])

    def test_joined_token_takes_rightmost_unit(self):
        self.assertEqual(pos_tag(self.model, ['new+shares', 'stock+exchange']), ['NNS', 'NN'])


class TestDependencies(unittest.TestCase):

    def test_sentence_dependencies(self):
        self.assertEqual(extract_dependencies(parse_tree(VINKEN_TREE)), dependencies(VINKEN_DEPS))

    def test_failed_parse_has_none(self):
        self.assertEqual(extract_dependencies(None), set())

    def test_one_edge_per_argument_slot(self):
        tree = parse_tree(r'(S (NP (N Profits N)) (S\NP ((S\NP)/NP hit V) (NP (N records N))))')
        deps = extract_dependencies(tree)
        self.assertEqual(sorted((d.i, d.j, d.arg_k) for d in deps), [(0, 1, 1), (2, 1, 2)])
        self.assertEqual(count_combinations(tree), 2)

    def test_every_bundled_tree(self):
        for record in read_treebank(TREEBANK):
            deps = extract_dependencies(record.tree)
            self.assertTrue(deps, record.sentence_id)
            for dep in deps:
                self.assertEqual(dep.word_i, record.tokens[dep.i])
                self.assertEqual(dep.word_j, record.tokens[dep.j])
                self.assertLessEqual(dep.arg_k, arity(dep.cat_j))


if __name__ == '__main__':
    unittest.main()
