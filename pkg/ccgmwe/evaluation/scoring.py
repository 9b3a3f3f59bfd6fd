import csv
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Hashable, Iterable, Mapping, Sequence, Set, Tuple

import pandas

from ..errors import DataInconsistencyError, FormatError
from ..treebank import MWE_JOINER, Dependency

logger = logging.getLogger(__name__)

COUNT_COLUMNS = ['id', 'correct', 'attempted', 'gold']


def f_measure(precision: float, recall: float, beta: float = 1.0) -> float:
    if precision + recall == 0:
        return 0.0
    b2 = beta * beta
    return (1 + b2) * precision * recall / (b2 * precision + recall)


@dataclass(frozen=True)
class EvalReport:
    correct: int
    attempted: int
    gold: int
    per_sentence: Tuple[Tuple[str, int, int, int], ...] = ()
    labeled: bool = False

    @property
    def precision_undefined(self) -> bool:
        return self.attempted == 0

    @property
    def precision(self) -> float:
        return self.correct / self.attempted if self.attempted else 0.0

    @property
    def recall(self) -> float:
        return self.correct / self.gold if self.gold else 0.0

    @property
    def f1(self) -> float:
        return f_measure(self.precision, self.recall)

    def metrics(self) -> Dict[str, float]:
        return {
            'precision': self.precision,
            'recall': self.recall,
            'f1': self.f1,
            'correct': self.correct,
            'attempted': self.attempted,
            'gold': self.gold,
            'precision_undefined': int(self.precision_undefined),
        }

    @classmethod
    def from_counts(cls, per_sentence: Iterable[Tuple[str, int, int, int]], labeled=False) -> 'EvalReport':
        per_sentence = tuple(per_sentence)
        return cls(sum(s[1] for s in per_sentence), sum(s[2] for s in per_sentence),
                   sum(s[3] for s in per_sentence), per_sentence, labeled)


def dependency_key(dep: Dependency, labeled: bool = False) -> tuple:
    key = (dep.i, dep.word_i, dep.j, dep.word_j)
    if labeled:
        key += (str(dep.cat_j), dep.arg_k)
    return key


def score(system: Mapping[str, Set[Dependency]], gold: Mapping[str, Set[Dependency]],
          labeled: bool = False) -> EvalReport:
    """Micro-averaged precision, recall and F1 over matching sentence ids."""
    if set(system) != set(gold):
        only_system = sorted(set(system) - set(gold))
        only_gold = sorted(set(gold) - set(system))
        raise DataInconsistencyError("Sentence ids differ; system only: {}; gold only: {}".format(
            ", ".join(only_system) or "-", ", ".join(only_gold) or "-"))
    per_sentence = []
    for sid in gold:
        s = {dependency_key(d, labeled) for d in system[sid]}
        g = {dependency_key(d, labeled) for d in gold[sid]}
        per_sentence.append((sid, len(s & g), len(s), len(g)))
    report = EvalReport.from_counts(per_sentence, labeled)
    if report.precision_undefined:
        logger.warning("No dependencies attempted; precision reported as 0")
    return report


class EdgeClass(Enum):
    INTERNAL = 'internal'
    MEDIATING = 'mediating'
    EXTERNAL = 'external'


def unit_map(occurrences) -> Dict[int, int]:
    """Map each unit index of each occurrence to the occurrence's position in the list."""
    units = {}
    for n, occurrence in enumerate(occurrences):
        for i in occurrence.indices:
            units[i] = n
    return units


def unit_map_from_tokens(tokens: Sequence[str], joiner: str = MWE_JOINER) -> Dict[int, int]:
    """Treat every joined token of a collapsed sentence as an MWE of its own."""
    return {i: i for i, token in enumerate(tokens) if joiner in token.strip(joiner)}


def classify_edge(dep: Dependency, units: Mapping[int, Hashable]) -> EdgeClass:
    mwe_i, mwe_j = units.get(dep.i), units.get(dep.j)
    if mwe_i is None and mwe_j is None:
        return EdgeClass.EXTERNAL
    if mwe_i is not None and mwe_i == mwe_j:
        return EdgeClass.INTERNAL
    return EdgeClass.MEDIATING


def edge_counts(deps: Iterable[Dependency], units: Mapping[int, Hashable]) -> Dict[EdgeClass, int]:
    counts = {c: 0 for c in EdgeClass}
    for dep in deps:
        counts[classify_edge(dep, units)] += 1
    return counts


def format_value(value) -> str:
    return "{:.6f}".format(value) if isinstance(value, float) else str(value)


def report_rows(reports: Mapping[str, EvalReport]):
    return [(name, metric, format_value(value))
            for name, report in reports.items() for metric, value in report.metrics().items()]


def write_report(reports: Mapping[str, EvalReport], path):
    """Write reports in long format: name, metric, value."""
    frame = pandas.DataFrame(report_rows(reports), columns=["name", "metric", "value"])
    frame.to_csv(path, sep="\t", index=False, quoting=csv.QUOTE_NONE)


def write_counts(report: EvalReport, path):
    frame = pandas.DataFrame(list(report.per_sentence), columns=COUNT_COLUMNS)
    frame.to_csv(path, sep='\t', index=False, quoting=csv.QUOTE_NONE)


def read_counts(path) -> Tuple[Tuple[str, int, int, int], ...]:
    try:
        frame = pandas.read_csv(path, sep='\t', dtype={'id': str}, keep_default_na=False, quoting=csv.QUOTE_NONE)
    except pandas.errors.EmptyDataError:
        raise FormatError(path, None, "empty counts file")
    if list(frame.columns) != COUNT_COLUMNS:
        raise FormatError(path, 1, "expected columns {}".format(", ".join(COUNT_COLUMNS)))
    try:
        return tuple((str(r.id), int(r.correct), int(r.attempted), int(r.gold)) for r in frame.itertuples(index=False))
    except ValueError as e:
        raise FormatError(path, None, str(e)) from e
