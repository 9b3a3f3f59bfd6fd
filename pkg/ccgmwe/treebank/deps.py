import logging
from dataclasses import dataclass
from typing import Iterable, List, Set, Tuple

from ..category import Category, arity, parse_category, render
from ..errors import CategoryParseError, DataInconsistencyError, FormatError
from .files import open_text

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Dependency:
    """Word ``i`` fills argument slot ``arg_k`` of functor word ``j``.

    Indices are 0-based leaf indices; dependency files store them 1-based.
    """
    i: int
    j: int
    cat_j: Category
    arg_k: int
    word_i: str
    word_j: str

    def __post_init__(self):
        if self.i == self.j:
            raise DataInconsistencyError("Dependency of word {} on itself".format(self.i))
        if self.i < 0 or self.j < 0:
            raise DataInconsistencyError("Negative dependency index in {}".format(self))
        if self.arg_k < 1:
            raise DataInconsistencyError("Argument slot must be positive, got {}".format(self.arg_k))
        if self.arg_k > arity(self.cat_j):
            raise DataInconsistencyError("{} has no argument slot {}".format(render(self.cat_j), self.arg_k))

    @property
    def sort_key(self):
        return self.i, self.j, self.arg_k, render(self.cat_j), self.word_i, self.word_j

    def to_line(self) -> str:
        return "\t".join([str(self.i + 1), str(self.j + 1), render(self.cat_j), str(self.arg_k),
                          self.word_i, self.word_j])


def sorted_dependencies(deps: Iterable[Dependency]) -> List[Dependency]:
    return sorted(deps, key=lambda d: d.sort_key)


def parse_dependency(line: str, path='<string>', lineno=None) -> Dependency:
    fields = line.split('\t')
    if len(fields) != 6:
        raise FormatError(path, lineno, "expected 6 tab-separated fields, found {}".format(len(fields)))
    i, j, cat, k, word_i, word_j = fields
    try:
        i, j, k = int(i), int(j), int(k)
    except ValueError:
        raise FormatError(path, lineno, "indices and slot must be integers")
    if i < 1 or j < 1:
        raise FormatError(path, lineno, "positions start at 1")
    try:
        cat_j = parse_category(cat)
    except CategoryParseError as e:
        raise FormatError(path, lineno, str(e)) from e
    try:
        return Dependency(i - 1, j - 1, cat_j, k, word_i, word_j)
    except DataInconsistencyError as e:
        raise FormatError(path, lineno, str(e)) from e


def read_dependencies(source) -> List[Tuple[str, Set[Dependency]]]:
    """Read a dependency file into ``(sentence id, dependencies)`` pairs."""
    sentences = []
    with open_text(source) as f:
        name = getattr(f, 'name', source)
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip('\r\n')
            if not line.strip():
                continue
            if line.startswith('ID '):
                sentences.append((line[3:].strip(), set()))
                continue
            if not sentences:
                raise FormatError(name, lineno, "dependency before the first 'ID' line")
            sentences[-1][1].add(parse_dependency(line, name, lineno))
    logger.debug("Read dependencies for %d sentences from %s", len(sentences), name)
    return sentences


def write_dependencies(sentences, destination):
    with open_text(destination, 'w') as f:
        for sentence_id, deps in sentences:
            f.write("ID {}\n".format(sentence_id))
            for dep in sorted_dependencies(deps):
                f.write(dep.to_line() + "\n")
