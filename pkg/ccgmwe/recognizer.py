"""MWE recognition: a detector proposes candidates, filters prune them and a
resolver picks a set of non-overlapping occurrences."""
import csv
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Sequence, Set, Tuple

import pandas
from dotenv import dotenv_values

from .errors import ConfigError, FormatError
from .treebank import MweLexicon, join_units

logger = logging.getLogger(__name__)

DETECTORS = ('exhaustive', 'proper-noun', 'stop-word')
RESOLVERS = ('longest', 'leftmost')
CONTINUOUS = 'continuous'
PRESETS_DIR = Path(__file__).parent / 'presets'

_DETECTOR_KINDS = {
    'exhaustive': None,
    'proper-noun': 'proper-noun',
    'stop-word': 'stop-word',
}
_FILTER_RE = re.compile(r'^(continuous|more-frequent-as-mwe|constrain-length\((\d+)\))$')


@dataclass(frozen=True)
class MweOccurrence:
    indices: Tuple[int, ...]
    tokens: Tuple[str, ...]
    kind: str = 'general'

    def __post_init__(self):
        if len(self.indices) < 2 or len(self.indices) != len(self.tokens):
            raise ValueError("An MWE occurrence needs at least two units with one index each")
        if any(a >= b for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError("Unit indices must be strictly increasing: {}".format(self.indices))

    @property
    def joined(self) -> str:
        return join_units(self.tokens)

    @property
    def start(self) -> int:
        return self.indices[0]

    @property
    def end(self) -> int:
        return self.indices[-1]

    @property
    def is_continuous(self) -> bool:
        return self.end - self.start == len(self.indices) - 1

    def __len__(self):
        return len(self.indices)


def _check_detector(detector: str):
    parts = detector.split('+')
    for part in parts:
        if part not in DETECTORS:
            raise ConfigError("Unknown detector {!r}. Supported detectors: {}".format(part, ", ".join(DETECTORS)))
    return parts


def parse_filter(text: str) -> Tuple[str, int]:
    """Split a filter name such as ``constrain-length(2)`` into name and argument."""
    match = _FILTER_RE.match(text.strip())
    if match is None:
        raise ConfigError("Unknown filter {!r}".format(text))
    name = match.group(1)
    if name.startswith('constrain-length'):
        return 'constrain-length', int(match.group(2))
    return name, 0


@dataclass(frozen=True)
class RecognizerConfig:
    detector: str = 'exhaustive'
    filters: Tuple[str, ...] = (CONTINUOUS,)
    resolver: str = 'longest'

    def __post_init__(self):
        _check_detector(self.detector)
        if self.resolver not in RESOLVERS:
            raise ConfigError("Unknown resolver {!r}. Supported resolvers: {}".format(
                self.resolver, ", ".join(RESOLVERS)))
        filters = [f.strip() for f in self.filters if f.strip()]
        for f in filters:
            parse_filter(f)
        filters = [CONTINUOUS] + [f for f in filters if f != CONTINUOUS]
        object.__setattr__(self, 'filters', tuple(filters))

    @classmethod
    def from_mapping(cls, values: Mapping[str, str], base: 'RecognizerConfig' = None) -> 'RecognizerConfig':
        """Build a config from DETECTOR / FILTERS / RESOLVER keys, on top of ``base``."""
        values = {k.upper(): v for k, v in values.items() if v is not None}
        base = base or cls()
        filters = base.filters
        if 'FILTERS' in values:
            text = values['FILTERS'].strip()
            filters = () if text in ('', 'no filter', 'none') else tuple(_split_filters(text))
        return cls(
            detector=values.get('DETECTOR', base.detector).strip(),
            filters=filters,
            resolver=values.get('RESOLVER', base.resolver).strip(),
        )

    @classmethod
    def from_preset(cls, name: str) -> 'RecognizerConfig':
        path = PRESETS_DIR / '{}.env'.format(name)
        if not path.is_file():
            raise ConfigError("Unknown recognizer preset {!r}. Available: {}".format(name, ", ".join(preset_names())))
        return cls.from_mapping(dotenv_values(path))

    def describe(self) -> str:
        return "{} / {} / {}".format(self.detector, ", ".join(self.filters), self.resolver)


def _split_filters(text):
    return [part.strip() for part in text.split(',') if part.strip()]


def preset_names() -> List[str]:
    return sorted(p.stem for p in PRESETS_DIR.glob('*.env'))


def detect(lexicon: MweLexicon, tokens: Sequence[str], detector: str = 'exhaustive') -> Set[MweOccurrence]:
    """Every contiguous match of a lexicon entry, overlaps included."""
    kinds = {_DETECTOR_KINDS[d] for d in _check_detector(detector)}
    lowered = [t.lower() for t in tokens]
    found = set()
    for start, token in enumerate(lowered):
        for entry in lexicon.starting_with(token):
            if None not in kinds and entry.kind not in kinds:
                continue
            end = start + len(entry.units)
            if tuple(lowered[start:end]) == entry.units:
                found.add(MweOccurrence(tuple(range(start, end)), tuple(tokens[start:end]), entry.kind))
    return found


def apply_filters(candidates: Iterable[MweOccurrence], filters: Sequence[str],
                  lexicon: MweLexicon) -> Set[MweOccurrence]:
    kept = set(candidates)
    for text in filters:
        name, argument = parse_filter(text)
        before = len(kept)
        if name == CONTINUOUS:
            kept = {o for o in kept if o.is_continuous}
        elif name == 'more-frequent-as-mwe':
            kept = {o for o in kept if _more_frequent_as_mwe(o, lexicon)}
        elif name == 'constrain-length':
            kept = {o for o in kept if len(o) <= argument}
        logger.debug("Filter %s removed %d candidates", text, before - len(kept))
    return kept


def _more_frequent_as_mwe(occurrence: MweOccurrence, lexicon: MweLexicon) -> bool:
    entry = lexicon.get(occurrence.tokens)
    if entry is None:
        return False
    return all(entry.mwe_count > count for count in entry.unit_counts)


def _overlaps(occurrence: MweOccurrence, taken: Set[int]) -> bool:
    return any(i in taken for i in occurrence.indices)


def resolve(candidates: Iterable[MweOccurrence], resolver: str = 'longest') -> List[MweOccurrence]:
    """Pick index-disjoint occurrences, returned in sentence order.

    ``longest`` prefers more units, then the leftmost start, then the
    alphabetically first joined form. ``leftmost`` prefers the leftmost start,
    then more units, then the joined form.
    """
    if resolver == 'longest':
        order = sorted(set(candidates), key=lambda o: (-len(o), o.start, o.joined, o.indices))
    elif resolver == 'leftmost':
        order = sorted(set(candidates), key=lambda o: (o.start, -len(o), o.joined, o.indices))
    else:
        raise ConfigError("Unknown resolver {!r}".format(resolver))
    taken: Set[int] = set()
    chosen = []
    for occurrence in order:
        if _overlaps(occurrence, taken):
            continue
        chosen.append(occurrence)
        taken.update(occurrence.indices)
    return sorted(chosen, key=lambda o: o.start)


def recognize(lexicon: MweLexicon, tokens: Sequence[str], config: RecognizerConfig) -> List[MweOccurrence]:
    candidates = detect(lexicon, tokens, config.detector)
    return resolve(apply_filters(candidates, config.filters, lexicon), config.resolver)


def recognize_all(lexicon, sentences, config) -> Dict[str, List[MweOccurrence]]:
    """Run :func:`recognize` over ``(sentence id, tokens)`` pairs."""
    found = {sid: recognize(lexicon, tokens, config) for sid, tokens in sentences}
    logger.info("Recognized %d MWEs in %d sentences with %s",
                sum(len(o) for o in found.values()), len(found), config.describe())
    return found


OCCURRENCE_COLUMNS = ['id', 'positions', 'tokens', 'kind']


def write_occurrences(occurrences: Mapping[str, Sequence[MweOccurrence]], path):
    rows = []
    for sid, found in occurrences.items():
        for o in found:
            rows.append((sid, ','.join(str(i + 1) for i in o.indices), ' '.join(o.tokens), o.kind))
    frame = pandas.DataFrame(rows, columns=OCCURRENCE_COLUMNS)
    frame.to_csv(path, sep='\t', index=False, quoting=csv.QUOTE_NONE)


def read_occurrences(path) -> Dict[str, List[MweOccurrence]]:
    """Read an occurrence file (1-based positions) keyed by sentence id."""
    try:
        frame = pandas.read_csv(path, sep='\t', dtype=str, keep_default_na=False, quoting=csv.QUOTE_NONE)
    except pandas.errors.EmptyDataError:
        return {}
    missing = set(OCCURRENCE_COLUMNS) - set(frame.columns)
    if missing:
        raise FormatError(path, 1, "missing columns: {}".format(", ".join(sorted(missing))))
    occurrences: Dict[str, List[MweOccurrence]] = {}
    for row, record in enumerate(frame.itertuples(index=False), start=2):
        try:
            indices = tuple(int(p) - 1 for p in record.positions.split(','))
            occurrence = MweOccurrence(indices, tuple(record.tokens.split()), record.kind)
        except ValueError as e:
            raise FormatError(path, row, str(e)) from e
        if min(indices) < 0:
            raise FormatError(path, row, "positions start at 1")
        occurrences.setdefault(record.id, []).append(occurrence)
    return occurrences
