import csv
import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

import pandas

from ..errors import LexiconError

logger = logging.getLogger(__name__)

KINDS = ('proper-noun', 'stop-word', 'general')
COLUMNS = ['units', 'kind', 'mwe_count', 'unit_counts']


@dataclass(frozen=True)
class LexiconEntry:
    units: Tuple[str, ...]
    kind: str
    mwe_count: int
    unit_counts: Tuple[int, ...]

    def __len__(self):
        return len(self.units)


class MweLexicon:
    """MWE index keyed by the lowercased unit sequence."""

    def __init__(self, entries=()):
        self.entries: Dict[Tuple[str, ...], LexiconEntry] = {}
        self._by_first: Dict[str, List[LexiconEntry]] = {}
        for entry in entries:
            self.add(entry)

    def add(self, entry: LexiconEntry):
        key = tuple(u.lower() for u in entry.units)
        if key in self.entries:
            raise LexiconError('<lexicon>', None, "duplicate entry {!r}".format(' '.join(key)))
        entry = LexiconEntry(key, entry.kind, entry.mwe_count, entry.unit_counts)
        self.entries[key] = entry
        self._by_first.setdefault(key[0], []).append(entry)

    def get(self, units) -> Optional[LexiconEntry]:
        return self.entries.get(tuple(u.lower() for u in units))

    def starting_with(self, token: str) -> List[LexiconEntry]:
        return self._by_first.get(token.lower(), [])

    def __len__(self):
        return len(self.entries)

    def __contains__(self, units):
        return self.get(units) is not None

    def __iter__(self) -> Iterator[LexiconEntry]:
        return iter(self.entries.values())


def read_lexicon(path) -> MweLexicon:
    """Read a TSV lexicon: units, kind, MWE count and ``;``-separated unit counts."""
    try:
        frame = pandas.read_csv(path, sep='\t', header=None, dtype=str, keep_default_na=False,
                                quoting=csv.QUOTE_NONE, skip_blank_lines=True)
    except pandas.errors.EmptyDataError:
        return MweLexicon()
    except pandas.errors.ParserError as e:
        raise LexiconError(path, None, str(e)) from e
    if frame.shape[1] != len(COLUMNS):
        raise LexiconError(path, None, "expected {} columns, found {}".format(len(COLUMNS), frame.shape[1]))
    frame.columns = COLUMNS

    lexicon = MweLexicon()
    for row, record in enumerate(frame.itertuples(index=False), start=1):
        units = tuple(record.units.split())
        if len(units) < 2:
            raise LexiconError(path, row, "an MWE needs at least two units")
        if record.kind not in KINDS:
            raise LexiconError(path, row, "unknown kind {!r}".format(record.kind))
        try:
            mwe_count = int(record.mwe_count)
            unit_counts = tuple(int(c) for c in record.unit_counts.split(';'))
        except ValueError:
            raise LexiconError(path, row, "counts must be integers")
        if mwe_count < 0 or any(c < 0 for c in unit_counts):
            raise LexiconError(path, row, "negative count")
        if len(unit_counts) != len(units):
            raise LexiconError(path, row, "{} units but {} unit counts".format(len(units), len(unit_counts)))
        try:
            lexicon.add(LexiconEntry(units, record.kind, mwe_count, unit_counts))
        except LexiconError as e:
            raise LexiconError(path, row, e.reason) from e
    logger.info("Loaded %d MWEs from %s", len(lexicon), path)
    return lexicon


def write_lexicon(lexicon: MweLexicon, path):
    frame = pandas.DataFrame(
        [(' '.join(e.units), e.kind, e.mwe_count, ';'.join(map(str, e.unit_counts))) for e in lexicon],
        columns=COLUMNS)
    frame.to_csv(path, sep='\t', header=False, index=False, quoting=csv.QUOTE_NONE)
