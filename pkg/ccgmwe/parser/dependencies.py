"""Word-word dependencies read off a derivation.

Each node carries its lexical heads and its pending argument slots, outermost
first. A slot lists the ``(leaf, k)`` pairs that own it; coordinated functors
give one slot several owners. Consuming a slot emits one edge per owner and
argument head.
"""
import logging
from dataclasses import dataclass
from typing import List, Set, Tuple

from ..category import Atom, Functor, arity, is_modifier
from ..treebank import Dependency, Tree

logger = logging.getLogger(__name__)

Slot = Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class _Info:
    heads: Tuple[int, ...]
    slots: Tuple[Slot, ...]


def _passes_head(cat) -> bool:
    # modifiers and determiners (NP/N) take the head of their argument
    if is_modifier(cat):
        return True
    return (isinstance(cat, Functor) and isinstance(cat.result, Atom) and isinstance(cat.argument, Atom)
            and cat.result.name == 'NP' and cat.argument.name == 'N')


class _Extractor:
    def __init__(self, tree: Tree):
        self.leaves = tree.leaves()
        self.deps: Set[Dependency] = set()
        self.skipped = 0

    def edges(self, slot: Slot, heads):
        for owner, k in slot:
            functor = self.leaves[owner]
            for head in heads:
                if head == owner:
                    continue
                self.deps.add(Dependency(head, owner, functor.category, k, self.leaves[head].token, functor.token))

    def apply(self, functor_category, functor, argument):
        """Functor consumes its outermost slot with ``argument``."""
        if functor.slots:
            self.edges(functor.slots[0], argument.heads)
        if _passes_head(functor_category):
            return _Info(argument.heads, argument.slots)
        return _Info(functor.heads, functor.slots[1:])

    def compose(self, functor_category, primary, secondary):
        if primary.slots:
            self.edges(primary.slots[0], secondary.heads)
        if _passes_head(functor_category):
            return _Info(secondary.heads, secondary.slots)
        return _Info(primary.heads, secondary.slots[:1] + primary.slots[1:])

    def visit(self, node: Tree) -> _Info:
        if node.is_leaf:
            n = arity(node.category)
            return _Info((node.index,), tuple(((node.index, k),) for k in range(n, 0, -1)))
        children = [self.visit(c) for c in node.children]
        if len(children) == 1:
            child = children[0]
            if arity(node.category) == arity(node.children[0].category):
                return child
            return _Info(child.heads, ((),) * arity(node.category))
        left, right = children
        rule = node.rule
        if rule == 'fa':
            return self.apply(node.children[0].category, left, right)
        if rule == 'ba':
            return self.apply(node.children[1].category, right, left)
        if rule == 'fc':
            return self.compose(node.children[0].category, left, right)
        if rule == 'bc':
            return self.compose(node.children[1].category, right, left)
        if rule in ('conj', 'lpunct'):
            return right
        if rule == 'rpunct':
            return left
        if rule == 'coord':
            slots = tuple(a + b for a, b in zip(left.slots, right.slots))
            return _Info(left.heads + right.heads, slots)
        self.skipped += 1
        return _Info(right.heads, ((),) * arity(node.category))


def extract_dependencies(tree: Tree) -> Set[Dependency]:
    """Dependencies of every application and composition in ``tree``.

    Non-derivable binary nodes are skipped with a warning.
    """
    if tree is None:
        return set()
    extractor = _Extractor(tree)
    extractor.visit(tree)
    if extractor.skipped:
        logger.warning("Skipped %d non-derivable nodes in tree over %r", extractor.skipped,
                       ' '.join(leaf.token for leaf in extractor.leaves))
    return extractor.deps


def count_combinations(tree: Tree) -> int:
    return sum(1 for node in tree.nodes() if node.rule in ('fa', 'ba', 'fc', 'bc'))


def extract_all(records) -> List[Tuple[str, Set[Dependency]]]:
    return [(r.sentence_id, extract_dependencies(r.tree)) for r in records]
