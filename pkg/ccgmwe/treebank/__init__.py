"""Derivation trees, dependency files, token files and the MWE lexicon."""
from .deps import Dependency, read_dependencies, sorted_dependencies, write_dependencies
from .files import open_text
from .lexicon import LexiconEntry, MweLexicon, read_lexicon, write_lexicon
from .tokens import MWE_JOINER, display_form, join_units, read_tokens, write_tokens
from .tree import (
    FAILED, SentenceRecord, Tree, index_leaves, leaves, lowest_dominating_node, parse_tree,
    read_treebank, write_tree, write_treebank,
)
