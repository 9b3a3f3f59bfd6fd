import logging
from typing import List, Sequence, Tuple

from ..errors import FormatError
from .files import open_text

logger = logging.getLogger(__name__)

MWE_JOINER = '+'
DISPLAY_JOINER = '_'


def join_units(units: Sequence[str], joiner: str = MWE_JOINER) -> str:
    """Form a collapsed MWE token, e.g. ``mr.+vinken``."""
    return joiner.join(u.lower() for u in units)


def display_form(token: str) -> str:
    return token.replace(MWE_JOINER, DISPLAY_JOINER)


def read_tokens(source) -> List[Tuple[str, Tuple[str, ...]]]:
    """Read one sentence per line; lines may start with ``<id><TAB>``.

    Sentences without an id are numbered by their 1-based line number.
    """
    sentences = []
    with open_text(source) as f:
        name = getattr(f, 'name', source)
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip('\r\n')
            if '\t' in line:
                sentence_id, line = line.split('\t', 1)
                if not sentence_id or '\t' in line:
                    raise FormatError(name, lineno, "expected '<id><TAB><tokens>'")
            else:
                sentence_id = str(lineno)
            tokens = tuple(line.split())
            if not tokens:
                continue
            sentences.append((sentence_id, tokens))
    return sentences


def write_tokens(sentences, destination, with_ids=True):
    with open_text(destination, 'w') as f:
        for sentence_id, tokens in sentences:
            line = ' '.join(tokens)
            f.write("{}\t{}\n".format(sentence_id, line) if with_ids else line + "\n")
