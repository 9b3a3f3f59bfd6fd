"""Console script for ccgmwe."""
import logging
import sys
from pathlib import Path

import click
from dotenv import load_dotenv
from tabulate import tabulate

from . import __version__, collapse as collapsing
from .errors import CcgMweError, ConfigError
from .evaluation import SCHEMES, combine_all, format_p, read_counts, score, sig_test, write_counts, write_report
from .parser import extract_all, load_model, parse_all, save_model, train as train_model
from .pipeline import ExperimentConfig, parse_ranges, run_pipeline, run_sweep, split_records
from .recognizer import (DETECTORS, RESOLVERS, RecognizerConfig, parse_filter, preset_names, read_occurrences,
                         recognize_all, write_occurrences)
from .treebank import (SentenceRecord, open_text, read_dependencies, read_lexicon, read_tokens, read_treebank,
                       write_dependencies, write_tokens, write_treebank)

logger = logging.getLogger(__name__)


class IdRangeType(click.ParamType):
    name = 'id-range'

    def convert(self, value, param, ctx):
        try:
            ranges = parse_ranges(value)
        except ConfigError as e:
            self.fail(str(e), param, ctx)
        if not ranges:
            self.fail('Format must be FIRST:LAST or ID, comma-separated', param, ctx)
        return ranges


class FilterType(click.ParamType):
    name = 'filter'

    def convert(self, value, param, ctx):
        try:
            parse_filter(value)
        except ConfigError:
            self.fail('Unsupported filter {}. Supported filters: continuous, more-frequent-as-mwe, '
                      'constrain-length(N)'.format(value), param, ctx)
        return value.strip()


class DetectorType(click.ParamType):
    name = 'detector'

    def convert(self, value, param, ctx):
        for part in value.split('+'):
            if part not in DETECTORS:
                self.fail('Unsupported detector {}. Supported detectors: {} (join with +)'.format(
                    part, ", ".join(DETECTORS)), param, ctx)
        return value


class Group(click.Group):
    """Reports library errors as click errors."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except CcgMweError as e:
            raise click.ClickException(str(e)) from e


def _read_sentences(path):
    """Sentences of a treebank (``ID`` lines) or of a token file."""
    with open_text(path) as f:
        first = next((line for line in f if line.strip()), '')
    if first.startswith('ID '):
        return [(r.sentence_id, r.tokens) for r in read_treebank(path)]
    return read_tokens(path)


@click.group(cls=Group)
@click.option('--debug', is_flag=True, help='Enable debug logging')
@click.version_option(version=__version__)
def main(debug):
    """Collapse multiword expressions in a CCG treebank and measure the effect on parsing."""
    load_dotenv()
    level = logging.DEBUG if debug else logging.INFO
    logging.basicConfig(level=level)


@main.command()
@click.argument('treebank', type=click.Path(exists=True, dir_okay=False))
@click.option('--train', 'train_ranges', type=IdRangeType(), required=True, help='Training sentence ids')
@click.option('--test', 'test_ranges', type=IdRangeType(), required=True, help='Test sentence ids')
@click.option('--dev', 'dev_ranges', type=IdRangeType(), default=None, help='Development sentence ids')
@click.option('--out-dir', type=click.Path(file_okay=False), required=True)
def split(treebank, train_ranges, test_ranges, dev_ranges, out_dir):
    """Split TREEBANK into train, dev and test treebanks by sentence id range.

    \b
    Ranges look like 01.001:04.010 and may be comma-separated. Ids are
    compared with digit runs as numbers.
    """
    parts = split_records(read_treebank(treebank), train_ranges, test_ranges, dev_ranges or ())
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, records in zip(('train', 'dev', 'test'), parts):
        write_treebank(records, out / '{}.treebank'.format(name))
        click.echo('{}: {} sentences'.format(name, len(records)))


@main.command()
@click.argument('source', type=click.Path(exists=True, dir_okay=False))
@click.option('--lexicon', type=click.Path(exists=True, dir_okay=False), required=True, help='MWE lexicon (TSV)')
@click.option('--preset', type=click.Choice(preset_names()), help='Recognizer preset; other options override it')
@click.option('--detector', type=DetectorType(), help='Detector, e.g. exhaustive or proper-noun+stop-word')
@click.option('--filter', 'filters', type=FilterType(), multiple=True, help='Filter, may be repeated')
@click.option('--resolver', type=click.Choice(RESOLVERS))
@click.option('-o', '--output', type=click.Path(dir_okay=False, writable=True), required=True)
def recognize(source, lexicon, preset, detector, filters, resolver, output):
    """Recognize MWEs in SOURCE, a treebank or a token file."""
    config = RecognizerConfig.from_preset(preset) if preset else RecognizerConfig()
    overrides = {'DETECTOR': detector, 'RESOLVER': resolver}
    if filters:
        overrides['FILTERS'] = ','.join(filters)
    config = RecognizerConfig.from_mapping(overrides, config)
    found = recognize_all(read_lexicon(lexicon), _read_sentences(source), config)
    write_occurrences(found, output)
    click.echo('{} MWEs in {} sentences'.format(sum(len(o) for o in found.values()), len(found)))


@main.command()
@click.argument('treebank', type=click.Path(exists=True, dir_okay=False))
@click.option('--deps', type=click.Path(exists=True, dir_okay=False),
              help='Gold dependencies; extracted from the trees when omitted')
@click.option('--occurrences', type=click.Path(exists=True, dir_okay=False), required=True)
@click.option('--out-dir', type=click.Path(file_okay=False), required=True)
@click.option('--all', 'collapse_all', is_flag=True,
              help='Also collapse MWEs that are not constituents (dependencies and tokens only)')
def collapse(treebank, deps, occurrences, out_dir, collapse_all):
    """Collapse the MWEs of OCCURRENCES in TREEBANK, its dependencies and its tokens."""
    records = read_treebank(treebank)
    gold = dict(read_dependencies(deps)) if deps else dict(extract_all(records))
    found = read_occurrences(occurrences)
    records = [SentenceRecord(r.sentence_id, r.tree, dependencies=gold.get(r.sentence_id, set())) for r in records]
    collapsed, outcomes, stats = collapsing.collapse_treebank(records, found)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_treebank(collapsed, out / 'collapsed.treebank')
    if collapse_all:
        deps_out = [(r.sentence_id, collapsing.collapse_all_dependencies(r.dependencies, found.get(r.sentence_id, ())))
                    for r in records]
        tokens_out = [(r.sentence_id, collapsing.collapse_tokens(r.tokens, found.get(r.sentence_id, ()))[0])
                      for r in records]
    else:
        deps_out = [(r.sentence_id, r.dependencies or set()) for r in collapsed]
        tokens_out = [(r.sentence_id, r.tokens) for r in collapsed]
    write_dependencies(deps_out, out / 'collapsed.deps')
    write_tokens(tokens_out, out / 'collapsed.tokens')
    collapsing.write_stats(stats, out / 'stats.tsv')
    totals = collapsing.summarize(stats)
    click.echo('Collapsed {kept} of {recognized} MWEs ({kept_pct:.1f}%), {cycles} cyclic dependencies'.format(**totals))


@main.command()
@click.argument('treebank', type=click.Path(exists=True, dir_okay=False))
@click.option('-o', '--output', type=click.Path(dir_okay=False, writable=True), required=True)
@click.option('--smoothing', type=click.FloatRange(min=0), default=0.1, show_default=True)
@click.option('--unknown-threshold', type=click.IntRange(min=0), default=2, show_default=True,
              help='Tokens seen fewer times are scored through their POS tag')
def train(treebank, output, smoothing, unknown_threshold):
    """Train a parsing model on TREEBANK."""
    save_model(train_model(read_treebank(treebank), smoothing, unknown_threshold), output)


@main.command()
@click.argument('model', type=click.Path(exists=True, dir_okay=False))
@click.argument('tokens', type=click.Path(exists=True, dir_okay=False, allow_dash=True))
@click.option('-o', '--output', type=click.Path(dir_okay=False, writable=True, allow_dash=True), default='-')
def parse(model, tokens, output):
    """Parse the sentences in TOKENS with MODEL."""
    sentences = read_tokens(tokens)
    results = parse_all(load_model(model), sentences)
    records = [SentenceRecord(sid, result.tree, tokens=() if result.tree else toks)
               for (sid, toks), (_, result) in zip(sentences, results)]
    write_treebank(records, output)


@main.command('extract-deps')
@click.argument('treebank', type=click.Path(exists=True, dir_okay=False, allow_dash=True))
@click.option('-o', '--output', type=click.Path(dir_okay=False, writable=True, allow_dash=True), default='-')
def extract_deps(treebank, output):
    """Extract word-word dependencies from the derivations in TREEBANK."""
    write_dependencies(extract_all(read_treebank(treebank)), output)


@main.command()
@click.argument('out_a', type=click.Path(exists=True, dir_okay=False))
@click.argument('out_b', type=click.Path(exists=True, dir_okay=False))
@click.option('--occurrences', type=click.Path(exists=True, dir_okay=False), required=True)
@click.option('--tokens', type=click.Path(exists=True, dir_okay=False), required=True,
              help='Original sentences, as a treebank or a token file')
@click.option('--scheme', type=click.Choice(SCHEMES), default=SCHEMES[0], show_default=True)
@click.option('-o', '--output', type=click.Path(dir_okay=False, writable=True, allow_dash=True), default='-')
def combine(out_a, out_b, occurrences, tokens, scheme, output):
    """Combine baseline dependencies OUT_A with collapsed-model dependencies OUT_B."""
    a = dict(read_dependencies(out_a))
    b = dict(read_dependencies(out_b))
    lengths = {sid: len(words) for sid, words in _read_sentences(tokens)}
    for source, ids in ((out_b, b), (tokens, lengths)):
        missing = sorted(set(a) - set(ids))
        if missing:
            raise ConfigError("{} has no sentences {}".format(source, ", ".join(missing)))
    combined = combine_all(a, b, read_occurrences(occurrences), scheme, lengths)
    write_dependencies(combined.items(), output)


@main.command('eval')
@click.argument('system', type=click.Path(exists=True, dir_okay=False))
@click.argument('gold', type=click.Path(exists=True, dir_okay=False))
@click.option('--labeled', is_flag=True, help='Also match functor category and argument slot')
@click.option('-o', '--output', type=click.Path(dir_okay=False, writable=True), help='Write the report as TSV')
@click.option('--counts', type=click.Path(dir_okay=False, writable=True), help='Write per-sentence counts')
def evaluate(system, gold, labeled, output, counts):
    """Score dependencies in SYSTEM against GOLD."""
    report = score(dict(read_dependencies(system)), dict(read_dependencies(gold)), labeled)
    rows = [[metric, value] for metric, value in report.metrics().items()]
    click.echo(tabulate(rows, headers=['metric', 'value'], floatfmt='.4f'))
    if output:
        write_report({Path(system).stem: report}, output)
    if counts:
        write_counts(report, counts)


@main.command()
@click.argument('counts_x', type=click.Path(exists=True, dir_okay=False))
@click.argument('counts_y', type=click.Path(exists=True, dir_okay=False))
@click.option('--iterations', type=click.IntRange(min=1), default=10000, show_default=True)
@click.option('--seed', type=int, default=1, envvar='CCGMWE_SEED', show_default=True,
              help='Will use environment CCGMWE_SEED if set. Supports .env')
@click.option('--workers', type=click.IntRange(min=1), default=1, show_default=True)
@click.option('--exhaustive/--sampled', default=None, help='Force or forbid enumerating every swap pattern')
def sigtest(counts_x, counts_y, iterations, seed, workers, exhaustive):
    """One-tailed test that the system of COUNTS_X is better than that of COUNTS_Y."""
    result = sig_test(read_counts(counts_x), read_counts(counts_y), iterations, seed, exhaustive, workers)
    click.echo('F1 difference {:+.4f}, {} ({} shuffles{})'.format(
        result.observed, format_p(result.p_value), result.iterations, ', exhaustive' if result.exhaustive else ''))


@main.command()
@click.option('--config', 'config_file', type=click.Path(exists=True, dir_okay=False), required=True,
              help='Experiment config (KEY=VALUE lines)')
@click.option('--output-dir', type=click.Path(file_okay=False), envvar='CCGMWE_OUTPUT_DIR',
              help='Will use environment CCGMWE_OUTPUT_DIR if set. Supports .env')
@click.option('--seed', type=int, envvar='CCGMWE_SEED', help='Will use environment CCGMWE_SEED if set. Supports .env')
@click.option('--recognizer', 'recognizers', type=click.Choice(preset_names()), multiple=True,
              help='Recognizer preset; repeat to compare several in one sweep')
def run(config_file, output_dir, seed, recognizers):
    """Run the whole experiment described by --config."""
    if len(recognizers) > 1:
        config = ExperimentConfig.from_file(config_file, output_dir=output_dir, seed=seed)
        run_sweep(config, recognizers)
        click.echo('Wrote {}'.format(Path(config.output_dir) / 'sweep.tsv'))
        return
    config = ExperimentConfig.from_file(config_file, output_dir=output_dir, seed=seed,
                                        recognizer=recognizers[0] if recognizers else None)
    run_pipeline(config)
    click.echo((Path(config.output_dir) / 'summary.txt').read_text(encoding='utf-8'), nl=False)


if __name__ == "__main__":
    sys.exit(main())  # pragma: no cover
