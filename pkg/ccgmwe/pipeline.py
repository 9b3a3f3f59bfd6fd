"""The collapsing experiment: train a baseline on the original treebank and a
second model on the MWE-collapsed treebank, then compare them on collapsed
and on original tokenization."""
import contextlib
import csv
import logging
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import pandas
from dotenv import dotenv_values
from jinja2 import Environment, FileSystemLoader, StrictUndefined
from tabulate import tabulate

from .collapse import (build_index_map, collapse_all_dependencies, collapse_dependencies, collapse_tokens,
                       collapse_tree, collapse_treebank, collapsed_categories, summarize, write_stats)
from .errors import CcgMweError, ConfigError, StageError
from .evaluation import SCHEMES, EvalReport, SigResult, combine_models, format_p, score, sig_test, write_counts
from .evaluation.scoring import format_value
from .parser import extract_dependencies, parse, save_model, train
from .recognizer import RecognizerConfig, recognize_all, write_occurrences
from .treebank import (SentenceRecord, read_lexicon, read_treebank, write_dependencies, write_tokens,
                       write_treebank)

logger = logging.getLogger(__name__)

KEYS = ('TREEBANK', 'LEXICON', 'OUTPUT_DIR', 'TRAIN', 'DEV', 'TEST', 'RECOGNIZER', 'DETECTOR', 'FILTERS',
        'RESOLVER', 'SCHEMES', 'SMOOTHING', 'UNKNOWN_THRESHOLD', 'SEED', 'ITERATIONS', 'SIG_PAIRS')
DEFAULT_OUTPUT_DIR = 'experiment-out'
TEMPLATES_DIR = Path(__file__).parent / 'templates'
GOLD_A = 'gold_A'
GOLD_B = 'gold_B'

IdRange = Tuple[str, str]


def natural_key(text: str):
    """Sort key comparing digit runs numerically, so ``s2`` sorts before ``s10``."""
    return tuple((0, int(part), '') if part.isdigit() else (1, 0, part) for part in re.split(r'(\d+)', text) if part)


def parse_ranges(text: str) -> Tuple[IdRange, ...]:
    """Parse ``first:last,id,...`` into inclusive id ranges."""
    ranges = []
    for part in text.split(','):
        part = part.strip()
        if not part:
            continue
        first, sep, last = part.partition(':')
        first, last = first.strip(), last.strip() if sep else first.strip()
        if not first or not last:
            raise ConfigError("Malformed sentence id range {!r}".format(part))
        if natural_key(last) < natural_key(first):
            raise ConfigError("Sentence id range {!r} ends before it starts".format(part))
        ranges.append((first, last))
    return tuple(ranges)


def in_ranges(sentence_id: str, ranges: Sequence[IdRange]) -> bool:
    key = natural_key(sentence_id)
    return any(natural_key(first) <= key <= natural_key(last) for first, last in ranges)


def parse_sig_pairs(text: str) -> Tuple[Tuple[str, str], ...]:
    pairs = []
    for part in text.split(';'):
        part = part.strip()
        if not part:
            continue
        better, sep, worse = part.partition('>')
        if not sep or not better.strip() or not worse.strip():
            raise ConfigError("Significance pair {!r} must look like X>Y".format(part))
        pairs.append((better.strip(), worse.strip()))
    return tuple(pairs)


def default_sig_pairs(schemes: Sequence[str]) -> Tuple[Tuple[str, str], ...]:
    pairs = [('B.gold', 'A.gold.before'), ('B.full', 'A.full.before'),
             ('A.gold.before', 'A.gold.after'), ('A.full.before', 'A.full.after')]
    for scheme in schemes:
        pairs += [('A+B.gold.' + scheme, 'A'), ('A+B.full.' + scheme, 'A')]
    return tuple(pairs)


def evaluation_names(schemes: Sequence[str]) -> Dict[str, List[str]]:
    return {
        GOLD_B: ['A.gold.after', 'A.gold.before', 'B.gold', 'A.full.after', 'A.full.before', 'B.full'],
        GOLD_A: ['A'] + ['A+B.gold.' + s for s in schemes] + ['A+B.full.' + s for s in schemes],
    }


def _convert(values, key, cast, default):
    if not values.get(key):
        return default
    try:
        return cast(values[key])
    except ValueError:
        raise ConfigError("{} must be a number, got {!r}".format(key, values[key]))


@dataclass(frozen=True)
class ExperimentConfig:
    treebank: Path
    lexicon: Path
    train: Tuple[IdRange, ...]
    test: Tuple[IdRange, ...]
    dev: Tuple[IdRange, ...] = ()
    output_dir: Path = Path(DEFAULT_OUTPUT_DIR)
    recognizer: RecognizerConfig = field(default_factory=RecognizerConfig)
    recognizer_name: Optional[str] = None
    schemes: Tuple[str, ...] = SCHEMES
    smoothing: float = 0.1
    unknown_threshold: int = 2
    seed: int = 1
    iterations: int = 10000
    sig_pairs: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        for scheme in self.schemes:
            if scheme not in SCHEMES:
                raise ConfigError("Unknown combination scheme {!r}. Supported schemes: {}".format(
                    scheme, ", ".join(SCHEMES)))
        if self.smoothing < 0:
            raise ConfigError("SMOOTHING must not be negative")
        if self.unknown_threshold < 0:
            raise ConfigError("UNKNOWN_THRESHOLD must not be negative")
        if self.iterations < 1:
            raise ConfigError("ITERATIONS must be positive")
        if not self.sig_pairs:
            object.__setattr__(self, 'sig_pairs', default_sig_pairs(self.schemes))
        names = {n for section in evaluation_names(self.schemes).values() for n in section}
        for better, worse in self.sig_pairs:
            for name in (better, worse):
                if name not in names:
                    raise ConfigError("Significance pair names unknown evaluation {!r}".format(name))

    @classmethod
    def from_mapping(cls, values: Mapping[str, Optional[str]], base_dir=Path('.'), output_dir=None, seed=None,
                     recognizer=None) -> 'ExperimentConfig':
        """Build a config from flat KEY=VALUE pairs; relative paths resolve against ``base_dir``."""
        values = {k.upper(): (v or '').strip() for k, v in values.items()}
        unknown = sorted(set(values) - set(KEYS))
        if unknown:
            raise ConfigError("Unknown config key(s): {}".format(", ".join(unknown)))
        for key in ('TREEBANK', 'LEXICON', 'TRAIN', 'TEST'):
            if not values.get(key):
                raise ConfigError("Missing required config key {}".format(key))

        def path(value):
            p = Path(value)
            return p if p.is_absolute() else Path(base_dir) / p

        if recognizer:
            recognizer_name, settings = recognizer, RecognizerConfig.from_preset(recognizer)
        else:
            recognizer_name = values.get('RECOGNIZER') or None
            base = RecognizerConfig.from_preset(recognizer_name) if recognizer_name else None
            settings = RecognizerConfig.from_mapping(
                {k: values[k] for k in ('DETECTOR', 'FILTERS', 'RESOLVER') if k in values}, base)
        schemes = tuple(s.strip() for s in values.get('SCHEMES', '').split(',') if s.strip()) or SCHEMES
        return cls(
            treebank=path(values['TREEBANK']),
            lexicon=path(values['LEXICON']),
            train=parse_ranges(values['TRAIN']),
            test=parse_ranges(values['TEST']),
            dev=parse_ranges(values.get('DEV', '')),
            output_dir=Path(output_dir) if output_dir else path(values.get('OUTPUT_DIR') or DEFAULT_OUTPUT_DIR),
            recognizer=settings,
            recognizer_name=recognizer_name,
            schemes=schemes,
            smoothing=_convert(values, 'SMOOTHING', float, 0.1),
            unknown_threshold=_convert(values, 'UNKNOWN_THRESHOLD', int, 2),
            seed=seed if seed is not None else _convert(values, 'SEED', int, 1),
            iterations=_convert(values, 'ITERATIONS', int, 10000),
            sig_pairs=parse_sig_pairs(values.get('SIG_PAIRS', '')),
        )

    @classmethod
    def from_file(cls, path, **overrides) -> 'ExperimentConfig':
        path = Path(path)
        if not path.is_file():
            raise ConfigError("Config file {} does not exist".format(path))
        return cls.from_mapping(dotenv_values(path), path.parent, **overrides)


@dataclass
class ExperimentReport:
    recognizer: str
    split: Dict[str, int]
    collapse: Dict[str, float]
    evaluations: Dict[str, Dict[str, EvalReport]]
    significance: List[Tuple[str, str, SigResult]] = field(default_factory=list)

    def evaluation(self, name: str) -> EvalReport:
        for reports in self.evaluations.values():
            if name in reports:
                return reports[name]
        raise KeyError(name)

    def rows(self):
        """Long-format rows: section, name, metric, value."""
        rows = [('split', part, 'sentences', str(n)) for part, n in self.split.items()]
        rows += [('collapse', 'all', metric, format_value(value)) for metric, value in self.collapse.items()]
        for section, reports in self.evaluations.items():
            for name, report in reports.items():
                rows += [(section, name, metric, format_value(value)) for metric, value in report.metrics().items()]
        for better, worse, result in self.significance:
            name = '{}>{}'.format(better, worse)
            rows += [('significance', name, 'observed', format_value(result.observed)),
                     ('significance', name, 'p_value', format_value(result.p_value)),
                     ('significance', name, 'shuffles', str(result.iterations))]
        return rows


def split_records(records: Sequence[SentenceRecord], train: Sequence[IdRange], test: Sequence[IdRange],
                  dev: Sequence[IdRange] = ()):
    """Partition ``records`` into train, dev and test lists by sentence id."""
    parts = {'train': [], 'dev': [], 'test': []}
    ranges = {'train': train, 'dev': dev, 'test': test}
    for record in records:
        owners = [part for part, r in ranges.items() if in_ranges(record.sentence_id, r)]
        if len(owners) > 1:
            raise StageError('split', record.sentence_id, "belongs to both {} and {}".format(*owners[:2]))
        if owners:
            parts[owners[0]].append(record)
    for part in ('train', 'test'):
        if not parts[part]:
            raise StageError('split', cause="empty {} split".format(part))
    return parts['train'], parts['dev'], parts['test']


@contextlib.contextmanager
def stage(name: str):
    logger.info("Stage: %s", name)
    try:
        yield
    except StageError:
        raise
    except (CcgMweError, ValueError, KeyError, OSError) as e:
        raise StageError(name, cause=e) from e


def _parse_records(model, sentences, label) -> List[SentenceRecord]:
    parsed = []
    for sid, tokens in sentences:
        try:
            result = parse(model, tokens)
        except (CcgMweError, ValueError) as e:
            raise StageError('parse', sid, e) from e
        parsed.append(SentenceRecord(sid, result.tree, tokens=() if result.tree else tokens))
    failed = sum(1 for r in parsed if r.tree is None)
    logger.info("%s: parsed %d sentences, %d without a parse", label, len(parsed), failed)
    return parsed


def _extract(records) -> Dict[str, set]:
    extracted = {}
    for record in records:
        try:
            extracted[record.sentence_id] = extract_dependencies(record.tree)
        except CcgMweError as e:
            raise StageError('extract', record.sentence_id, e) from e
    return extracted


def collapse_after_parsing(parsed: Sequence[SentenceRecord], deps: Mapping[str, set],
                           occurrences: Mapping[str, Sequence]) -> Dict[str, set]:
    """Collapse parsed output with the given occurrences after parsing."""
    collapsed = {}
    for record in parsed:
        sid = record.sentence_id
        found = occurrences.get(sid, ())
        try:
            index_map = build_index_map(len(record.tokens), found)
            categories = None
            if record.tree is not None:
                categories = collapsed_categories(collapse_tree(record.tree, found))
            collapsed[sid] = collapse_dependencies(deps[sid], found, index_map, categories)
        except CcgMweError as e:
            raise StageError('collapse-after', sid, e) from e
    return collapsed


def _combine(out_a, out_b, occurrences, scheme, lengths):
    combined = {}
    for sid in out_a:
        try:
            combined[sid] = combine_models(out_a[sid], out_b[sid], occurrences.get(sid, ()), scheme, lengths[sid])
        except CcgMweError as e:
            raise StageError('combine', sid, e) from e
    return combined


def run_pipeline(config: ExperimentConfig) -> ExperimentReport:
    """Run every stage of the experiment and write its artifacts to ``config.output_dir``."""
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    with stage('read'):
        records = read_treebank(config.treebank)
        lexicon = read_lexicon(config.lexicon)
        for record in records:
            if record.tree is None:
                raise StageError('read', record.sentence_id, "gold treebank contains a failed tree")

    with stage('extract'):
        gold_a_all = _extract(records)
        records = [SentenceRecord(r.sentence_id, r.tree, dependencies=gold_a_all[r.sentence_id]) for r in records]

    with stage('recognize'):
        occurrences = recognize_all(lexicon, [(r.sentence_id, r.tokens) for r in records], config.recognizer)
        write_occurrences(occurrences, out / 'occurrences.tsv')

    with stage('collapse'):
        collapsed, outcomes, stats = collapse_treebank(records, occurrences)
        write_treebank(collapsed, out / 'B.treebank')
        write_dependencies(((r.sentence_id, r.dependencies) for r in collapsed), out / 'B.deps')
        write_stats(stats, out / 'collapse_stats.tsv')
        kept = {sid: list(outcome.kept) for sid, outcome in outcomes.items()}

    with stage('split'):
        train_a, dev_a, test_a = split_records(records, config.train, config.test, config.dev)
        train_b, _, test_b = split_records(collapsed, config.train, config.test, config.dev)
        for name, part in (('train', train_a), ('dev', dev_a), ('test', test_a)):
            write_treebank(part, out / '{}.treebank'.format(name))
        logger.info("Split: %d train, %d dev, %d test sentences", len(train_a), len(dev_a), len(test_a))

    with stage('train'):
        model_a = train(train_a, config.smoothing, config.unknown_threshold)
        model_b = train(train_b, config.smoothing, config.unknown_threshold)
        save_model(model_a, out / 'model_A.tsv')
        save_model(model_b, out / 'model_B.tsv')

    test_ids = [r.sentence_id for r in test_a]
    lengths = {r.sentence_id: len(r.tokens) for r in test_a}
    with stage('tokens'):
        plain = [(r.sentence_id, r.tokens) for r in test_a]
        gold_tokens = [(r.sentence_id, r.tokens) for r in test_b]
        full_tokens = [(sid, collapse_tokens(tokens, occurrences.get(sid, ()))[0]) for sid, tokens in plain]
        write_tokens(plain, out / 'test.tokens')
        write_tokens(gold_tokens, out / 'test.gold.tokens')
        write_tokens(full_tokens, out / 'test.full.tokens')

    with stage('parse'):
        parsed = {
            'A': _parse_records(model_a, plain, 'model A'),
            'A.gold.before': _parse_records(model_a, gold_tokens, 'model A, gold-collapsed input'),
            'A.full.before': _parse_records(model_a, full_tokens, 'model A, fully collapsed input'),
            'B.gold': _parse_records(model_b, gold_tokens, 'model B, gold-collapsed input'),
            'B.full': _parse_records(model_b, full_tokens, 'model B, fully collapsed input'),
        }
        for name, part in parsed.items():
            write_treebank(part, out / '{}.parsed'.format(name))

    with stage('extract'):
        system = {name: _extract(part) for name, part in parsed.items()}
        gold_a = {sid: gold_a_all[sid] for sid in test_ids}
        gold_b = {r.sentence_id: r.dependencies for r in test_b}
        gold_b_full = {sid: collapse_all_dependencies(gold_a[sid], occurrences.get(sid, ())) for sid in test_ids}
        system['A.gold.after'] = collapse_after_parsing(parsed['A'], system['A'], kept)
        system['A.full.after'] = collapse_after_parsing(parsed['A'], system['A'], occurrences)

    with stage('combine'):
        for scheme in config.schemes:
            system['A+B.gold.' + scheme] = _combine(system['A'], system['B.gold'], kept, scheme, lengths)
            system['A+B.full.' + scheme] = _combine(system['A'], system['B.full'], occurrences, scheme, lengths)

    golds = {'A.gold.after': gold_b, 'A.gold.before': gold_b, 'B.gold': gold_b,
             'A.full.after': gold_b_full, 'A.full.before': gold_b_full, 'B.full': gold_b_full}
    with stage('eval'):
        evaluations = {}
        for section, names in evaluation_names(config.schemes).items():
            evaluations[section] = {}
            for name in names:
                gold = golds.get(name, gold_a)
                report = evaluations[section][name] = score(system[name], gold)
                logger.info("%s vs %s: P=%.4f R=%.4f F1=%.4f", name, section, report.precision, report.recall,
                            report.f1)
        for name, deps in system.items():
            write_dependencies(((sid, deps[sid]) for sid in test_ids), out / '{}.deps'.format(name))
        write_dependencies(((sid, gold_a[sid]) for sid in test_ids), out / 'gold_A.deps')
        write_dependencies(((sid, gold_b[sid]) for sid in test_ids), out / 'gold_B.deps')
        write_dependencies(((sid, gold_b_full[sid]) for sid in test_ids), out / 'gold_B.full.deps')

    report = ExperimentReport(
        recognizer=config.recognizer_name or config.recognizer.describe(),
        split={'train': len(train_a), 'dev': len(dev_a), 'test': len(test_a)},
        collapse=summarize(stats),
        evaluations=evaluations,
    )
    counts_dir = out / 'counts'
    counts_dir.mkdir(exist_ok=True)
    for section in evaluations.values():
        for name, evaluation in section.items():
            write_counts(evaluation, counts_dir / '{}.tsv'.format(name))

    with stage('sigtest'):
        for better, worse in config.sig_pairs:
            result = sig_test(report.evaluation(better).per_sentence, report.evaluation(worse).per_sentence,
                              config.iterations, config.seed)
            logger.info("%s > %s: %s", better, worse, format_p(result.p_value))
            report.significance.append((better, worse, result))

    with stage('report'):
        write_report_file(report, out / 'report.tsv')
        (out / 'summary.txt').write_text(render_summary(report), encoding='utf-8')
    return report


def write_report_file(report: ExperimentReport, path):
    frame = pandas.DataFrame(report.rows(), columns=['section', 'name', 'metric', 'value'])
    frame.to_csv(path, sep='\t', index=False, quoting=csv.QUOTE_NONE)


def _pct(value: float) -> str:
    return "{:.2f}".format(100 * value)


def filter_table(rows, headers=('system', 'P', 'R', 'F1')):
    return tabulate(rows, headers=list(headers))


def score_rows(report: ExperimentReport, names: Sequence[str]):
    rows = []
    for name in names:
        evaluation = report.evaluation(name)
        rows.append([name, _pct(evaluation.precision), _pct(evaluation.recall), _pct(evaluation.f1)])
    return rows


def render_summary(report: ExperimentReport, template: str = 'summary.txt') -> str:
    searchpaths = [Path.cwd(), TEMPLATES_DIR]
    env = Environment(loader=FileSystemLoader([str(p) for p in searchpaths]), undefined=StrictUndefined,
                      keep_trailing_newline=True)
    env.filters['table'] = filter_table
    env.filters['pvalue'] = format_p
    schemes = [n[len('A+B.gold.'):] for n in report.evaluations[GOLD_A] if n.startswith('A+B.gold.')]
    tables = {
        'training': score_rows(report, ['A.gold.before', 'B.gold', 'A.full.before', 'B.full']),
        'parsing': score_rows(report, ['A.gold.after', 'A.gold.before', 'A.full.after', 'A.full.before']),
        'gold_combination': score_rows(report, ['A'] + ['A+B.gold.' + s for s in schemes]),
        'full_combination': score_rows(report, ['A'] + ['A+B.full.' + s for s in schemes]),
    }
    significance = [[better, worse, "{:+.4f}".format(result.observed), format_p(result.p_value)]
                    for better, worse, result in report.significance]
    return env.get_template(template).render(report=report, tables=tables, significance=significance)


SWEEP_COLUMNS = ['recognizer', 'mwes', 'siblings', 'sibling_pct']


def run_sweep(config: ExperimentConfig, presets: Sequence[str]) -> List[ExperimentReport]:
    """Run the experiment once per recognizer preset and compare them in ``sweep.tsv``."""
    reports, rows = [], []
    for preset in presets:
        logger.info("Recognizer %s", preset)
        preset_config = replace(config, recognizer=RecognizerConfig.from_preset(preset), recognizer_name=preset,
                                output_dir=Path(config.output_dir) / preset)
        report = run_pipeline(preset_config)
        reports.append(report)
        row = {'recognizer': preset, 'mwes': report.collapse['recognized'], 'siblings': report.collapse['kept'],
               'sibling_pct': format_value(report.collapse['kept_pct'])}
        row.update({name: format_value(evaluation.f1) for name, evaluation in report.evaluations[GOLD_A].items()})
        rows.append(row)
    frame = pandas.DataFrame(rows)
    frame.to_csv(Path(config.output_dir) / 'sweep.tsv', sep='\t', index=False, quoting=csv.QUOTE_NONE)
    return reports
