import itertools
import logging
from dataclasses import dataclass, field, replace
from typing import Iterator, List, Optional, Sequence, Set, Tuple

from ..category import Category, derivation_rule, parse_category, render
from ..errors import CategoryParseError, DataInconsistencyError, FormatError
from .files import open_text

logger = logging.getLogger(__name__)

FAILED = 'FAILED'


@dataclass(frozen=True)
class Tree:
    """A derivation tree node.

    Leaves carry a token, an optional POS tag and their leaf index. Internal
    nodes carry one or two children.
    """
    category: Category
    children: Tuple['Tree', ...] = ()
    token: Optional[str] = None
    pos: Optional[str] = None
    index: Optional[int] = None

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def rule(self) -> Optional[str]:
        return derivation_rule(self.category, [c.category for c in self.children])

    @property
    def derivable(self) -> bool:
        return self.rule is not None

    def leaves(self) -> List['Tree']:
        if self.is_leaf:
            return [self]
        found = []
        for child in self.children:
            found.extend(child.leaves())
        return found

    def nodes(self) -> Iterator['Tree']:
        yield self
        for child in self.children:
            yield from child.nodes()

    @property
    def span(self) -> Tuple[int, int]:
        """First and last leaf index under this node."""
        node = self
        while not node.is_leaf:
            node = node.children[0]
        first = node.index
        node = self
        while not node.is_leaf:
            node = node.children[-1]
        return first, node.index

    def __str__(self):
        return write_tree(self)


@dataclass
class SentenceRecord:
    sentence_id: str
    tree: Optional[Tree] = None
    tokens: Tuple[str, ...] = ()
    dependencies: Optional[Set] = field(default=None, compare=False)

    def __post_init__(self):
        if self.tree is not None:
            leaf_tokens = tuple(leaf.token for leaf in self.tree.leaves())
            if self.tokens and tuple(self.tokens) != leaf_tokens:
                raise DataInconsistencyError("Sentence {}: tokens do not match the leaves".format(self.sentence_id))
            self.tokens = leaf_tokens
        else:
            self.tokens = tuple(self.tokens)

    @property
    def tags(self) -> Optional[Tuple[str, ...]]:
        if self.tree is None:
            return None
        tags = tuple(leaf.pos for leaf in self.tree.leaves())
        return None if None in tags else tags


def leaves(tree: Tree) -> List[Tuple[int, str]]:
    """(index, token) of every leaf, left to right."""
    return [(leaf.index, leaf.token) for leaf in tree.leaves()]


def index_leaves(tree: Tree) -> Tree:
    """Return a copy of ``tree`` whose leaves are numbered 0..n-1 left to right."""
    counter = itertools.count()

    def walk(node):
        if node.is_leaf:
            return replace(node, index=next(counter))
        return replace(node, children=tuple(walk(c) for c in node.children))
    return walk(tree)


def lowest_dominating_path(tree: Tree, indices: Set[int]) -> List[int]:
    path = []
    node = tree
    while not node.is_leaf:
        for position, child in enumerate(node.children):
            first, last = child.span
            if all(first <= i <= last for i in indices):
                path.append(position)
                node = child
                break
        else:
            break
    return path


def node_at(tree: Tree, path: Sequence[int]) -> Tree:
    node = tree
    for position in path:
        node = node.children[position]
    return node


def lowest_dominating_node(tree: Tree, indices) -> Tuple[Tree, bool]:
    """Find the lowest node whose span covers every index in ``indices``.

    The flag is True when that node covers exactly those leaves. Unary nodes
    are passed through, so the lowest node of a unary chain is returned.
    """
    indices = set(indices)
    if not indices:
        raise ValueError("No leaf indices given")
    first, last = tree.span
    if min(indices) < first or max(indices) > last:
        raise ValueError("Leaf indices {} outside the tree".format(sorted(indices)))
    node = node_at(tree, lowest_dominating_path(tree, indices))
    covered = {leaf.index for leaf in node.leaves()}
    return node, covered == indices


def replace_nodes(tree: Tree, replacements) -> Tree:
    """Swap the nodes at the given paths (a mapping of path tuple to node)."""
    if () in replacements:
        return replacements[()]

    def walk(node, path):
        if not any(p[:len(path)] == path for p in replacements):
            return node
        children = []
        for position, child in enumerate(node.children):
            child_path = path + (position,)
            if child_path in replacements:
                children.append(replacements[child_path])
            else:
                children.append(walk(child, child_path))
        return replace(node, children=tuple(children))
    return walk(tree, ())


def write_tree(tree: Optional[Tree]) -> str:
    if tree is None:
        return FAILED
    if tree.is_leaf:
        fields = [render(tree.category), tree.token]
        if tree.pos is not None:
            fields.append(tree.pos)
        return '(' + ' '.join(fields) + ')'
    return '(' + render(tree.category) + ' ' + ' '.join(write_tree(c) for c in tree.children) + ')'


class _TreeReader:
    def __init__(self, text, path, line):
        self.text = text
        self.path = path
        self.line = line
        self.pos = 0

    def fail(self, reason):
        raise FormatError(self.path, self.line, "{} (column {})".format(reason, self.pos + 1))

    def field(self):
        start = self.pos
        while self.pos < len(self.text) and not self.text[self.pos].isspace() and self.text[self.pos] != ')':
            self.pos += 1
        return self.text[start:self.pos]

    def category_field(self):
        # categories may contain brackets, so read up to the next space
        start = self.pos
        while self.pos < len(self.text) and not self.text[self.pos].isspace():
            self.pos += 1
        text = self.text[start:self.pos]
        try:
            return parse_category(text)
        except CategoryParseError as e:
            raise FormatError(self.path, self.line, str(e)) from e

    def skip_space(self):
        while self.pos < len(self.text) and self.text[self.pos] == ' ':
            self.pos += 1

    def node(self) -> Tree:
        if self.pos >= len(self.text) or self.text[self.pos] != '(':
            self.fail("expected '('")
        self.pos += 1
        category = self.category_field()
        self.skip_space()
        if self.pos >= len(self.text):
            self.fail("unexpected end of tree")
        if self.text[self.pos] == '(':
            children = []
            while self.pos < len(self.text) and self.text[self.pos] == '(':
                children.append(self.node())
                self.skip_space()
            if len(children) > 2:
                self.fail("node with {} children".format(len(children)))
            self.expect_close()
            return Tree(category, tuple(children))
        token = self.field()
        if not token:
            self.fail("leaf without token")
        self.skip_space()
        pos = None
        if self.pos < len(self.text) and self.text[self.pos] != ')':
            pos = self.field()
            self.skip_space()
        self.expect_close()
        return Tree(category, token=token, pos=pos)

    def expect_close(self):
        if self.pos >= len(self.text) or self.text[self.pos] != ')':
            self.fail("expected ')'")
        self.pos += 1

    def read(self) -> Tree:
        tree = self.node()
        self.skip_space()
        if self.pos != len(self.text):
            self.fail("trailing characters after tree")
        return index_leaves(tree)


def parse_tree(text: str, path='<string>', line=None) -> Optional[Tree]:
    text = text.strip()
    if text == FAILED:
        return None
    return _TreeReader(text, path, line).read()


def read_treebank(source) -> List[SentenceRecord]:
    """Read ``ID <id>`` / tree line pairs from a path or an open stream."""
    records = []
    with open_text(source) as f:
        name = getattr(f, 'name', source)
        sentence_id = None
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip('\n').rstrip('\r')
            if not line.strip():
                continue
            if sentence_id is None:
                if not line.startswith('ID '):
                    raise FormatError(name, lineno, "expected 'ID <id>' line")
                sentence_id = line[3:].strip()
                if not sentence_id:
                    raise FormatError(name, lineno, "empty sentence id")
                continue
            tree = parse_tree(line, name, lineno)
            records.append(SentenceRecord(sentence_id, tree))
            sentence_id = None
        if sentence_id is not None:
            raise FormatError(name, None, "sentence {} has no tree".format(sentence_id))
    logger.debug("Read %d trees from %s", len(records), name)
    return records


def write_treebank(records, destination):
    with open_text(destination, 'w') as f:
        for record in records:
            f.write("ID {}\n{}\n".format(record.sentence_id, write_tree(record.tree)))
