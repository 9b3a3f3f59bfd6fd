#!/usr/bin/env python

"""Tests for the `ccgmwe` command line."""
import os
import unittest

from click.testing import CliRunner

from ccgmwe import __version__, cli
from ccgmwe.recognizer import read_occurrences
from ccgmwe.treebank import read_dependencies, read_treebank

from .fixtures import LEXICON, TREEBANK


class TestCommandLine(unittest.TestCase):

    def setUp(self):
        self.runner = CliRunner()

    def invoke(self, *args):
        return self.runner.invoke(cli.main, list(args))

    def test_help(self):
        result = self.invoke('--help')
        self.assertEqual(result.exit_code, 0)
        self.assertIn('Collapse multiword expressions', result.output)
        self.assertIn('sigtest', result.output)
        result = self.invoke('--version')
        self.assertIn(__version__, result.output)

    def test_split(self):
        with self.runner.isolated_filesystem():
            result = self.invoke('split', str(TREEBANK), '--train', '01.001:04.999', '--test', '05.001:05.999',
                                 '--dev', '00.001:00.999', '--out-dir', 'parts')
            self.assertEqual(result.exit_code, 0, result.output)
            self.assertIn('train: 35 sentences', result.output)
            self.assertEqual(len(read_treebank(os.path.join('parts', 'test.treebank'))), 10)

    def test_split_rejects_bad_range(self):
        result = self.invoke('split', str(TREEBANK), '--train', '04.999:01.001', '--test', '05.001',
                             '--out-dir', 'parts')
        self.assertEqual(result.exit_code, 2)
        self.assertIn('ends before it starts', result.output)

    def test_recognize_and_collapse(self):
        with self.runner.isolated_filesystem():
            result = self.invoke('recognize', str(TREEBANK), '--lexicon', str(LEXICON), '--preset', 'rec1',
                                 '-o', 'occurrences.tsv')
            self.assertEqual(result.exit_code, 0, result.output)
            self.assertIn('in 50 sentences', result.output)
            found = read_occurrences('occurrences.tsv')
            self.assertIn('mr.+vinken', [o.joined for o in found['01.001']])
            result = self.invoke('collapse', str(TREEBANK), '--occurrences', 'occurrences.tsv', '--out-dir', 'out')
            self.assertEqual(result.exit_code, 0, result.output)
            self.assertIn('Collapsed', result.output)
            collapsed = read_treebank(os.path.join('out', 'collapsed.treebank'))
            self.assertEqual(collapsed[0].sentence_id, '00.001')
            self.assertIn('mr.+vinken', next(r for r in collapsed if r.sentence_id == '01.001').tokens)
            self.assertEqual(len(read_dependencies(os.path.join('out', 'collapsed.deps'))), 50)

    def test_combine_restores_gold(self):
        with self.runner.isolated_filesystem():
            self.assertEqual(self.invoke('extract-deps', str(TREEBANK), '-o', 'gold.deps').exit_code, 0)
            result = self.invoke('recognize', str(TREEBANK), '--lexicon', str(LEXICON), '--preset', 'rec1',
                                 '-o', 'occurrences.tsv')
            self.assertEqual(result.exit_code, 0, result.output)
            result = self.invoke('collapse', str(TREEBANK), '--occurrences', 'occurrences.tsv', '--out-dir', 'out',
                                 '--all')
            self.assertEqual(result.exit_code, 0, result.output)
            result = self.invoke('combine', 'gold.deps', os.path.join('out', 'collapsed.deps'), '--occurrences',
                                 'occurrences.tsv', '--tokens', str(TREEBANK), '--scheme', 'medFromA', '-o', 'A+B.deps')
            self.assertEqual(result.exit_code, 0, result.output)
            self.assertEqual(dict(read_dependencies('A+B.deps')), dict(read_dependencies('gold.deps')))
            with open('short.tokens', 'w') as f:
                f.write('00.001\tThe company bought shares .\n')
            result = self.invoke('combine', 'gold.deps', os.path.join('out', 'collapsed.deps'), '--occurrences',
                                 'occurrences.tsv', '--tokens', 'short.tokens')
            self.assertEqual(result.exit_code, 1)
            self.assertIn('has no sentences', result.output)

    def test_recognize_rejects_unknown_filter(self):
        result = self.invoke('recognize', str(TREEBANK), '--lexicon', str(LEXICON), '--filter', 'shortest',
                             '-o', 'x.tsv')
        self.assertEqual(result.exit_code, 2)
        self.assertIn('Unsupported filter shortest', result.output)

    def test_evaluate_and_sigtest(self):
        with self.runner.isolated_filesystem():
            result = self.invoke('extract-deps', str(TREEBANK), '-o', 'gold.deps')
            self.assertEqual(result.exit_code, 0, result.output)
            result = self.invoke('eval', 'gold.deps', 'gold.deps', '--counts', 'counts.tsv', '-o', 'report.tsv')
            self.assertEqual(result.exit_code, 0, result.output)
            self.assertIn('1.0000', result.output)
            self.assertTrue(os.path.isfile('report.tsv'))
            result = self.invoke('sigtest', 'counts.tsv', 'counts.tsv', '--iterations', '500', '--workers', '2')
            self.assertEqual(result.exit_code, 0, result.output)
            self.assertIn('p=1.0000 (500 shuffles)', result.output)

    def test_run_reports_stage_errors(self):
        with self.runner.isolated_filesystem():
            with open('experiment.env', 'w') as f:
                f.write('TREEBANK={}\nLEXICON={}\nTRAIN=01.001:04.999\nTEST=99.001:99.010\n'.format(TREEBANK, LEXICON))
            result = self.invoke('run', '--config', 'experiment.env', '--output-dir', 'out')
            self.assertEqual(result.exit_code, 1)
            self.assertIn('[split] empty test split', result.output)


if __name__ == '__main__':
    unittest.main()
