"""CCG categories and the combinatory rules over them.

Category strings follow the usual CCGbank notation: atoms such as ``S``, ``NP``
or ``N`` with an optional feature (``S[dcl]``), combined with ``/`` (argument to
the right) and ``\\`` (argument to the left). Slashes associate to the left, so
``S\\NP/NP`` is ``(S\\NP)/NP``.
"""
import functools
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .errors import CategoryParseError

FORWARD = '/'
BACKWARD = '\\'

PUNCTUATION = frozenset([',', '.', ';', ':', 'LRB', 'RRB'])
CONJ = 'conj'

_RESERVED = set('()[]/\\')


@functools.total_ordering
class Category:
    """Common behaviour of :class:`Atom` and :class:`Functor`."""

    def __str__(self):
        return render(self)

    def __lt__(self, other):
        if not isinstance(other, Category):
            return NotImplemented
        return render(self) < render(other)

    @property
    def is_atom(self) -> bool:
        return isinstance(self, Atom)

    @property
    def is_functor(self) -> bool:
        return isinstance(self, Functor)


@dataclass(frozen=True, eq=True)
class Atom(Category):
    name: str
    feature: Optional[str] = None


@dataclass(frozen=True, eq=True)
class Functor(Category):
    result: Category
    slash: str
    argument: Category

    def __post_init__(self):
        if self.slash not in (FORWARD, BACKWARD):
            raise ValueError("Unknown slash {!r}".format(self.slash))


class _Reader:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def fail(self, reason, offset=None):
        raise CategoryParseError(self.text, self.pos if offset is None else offset, reason)

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else None

    def expression(self):
        left = self.operand()
        while self.peek() in (FORWARD, BACKWARD):
            slash = self.text[self.pos]
            self.pos += 1
            if self.peek() is None:
                self.fail("empty operand after slash")
            left = Functor(left, slash, self.operand())
        return left

    def operand(self):
        char = self.peek()
        if char is None:
            self.fail("unexpected end of category")
        if char == '(':
            start = self.pos
            self.pos += 1
            if self.peek() == ')':
                self.fail("empty brackets")
            inner = self.expression()
            if self.peek() != ')':
                self.fail("unbalanced parenthesis opened at offset {}".format(start))
            self.pos += 1
            return inner
        if char in _RESERVED:
            self.fail("empty operand" if char in ')/\\' else "illegal character {!r}".format(char))
        if char.isspace():
            self.fail("illegal whitespace")
        return self.atom()

    def atom(self):
        start = self.pos
        while self.peek() is not None and self.peek() not in _RESERVED and not self.peek().isspace():
            self.pos += 1
        name = self.text[start:self.pos]
        feature = None
        if self.peek() == '[':
            close = self.text.find(']', self.pos)
            if close < 0:
                self.fail("unterminated feature")
            feature = self.text[self.pos + 1:close]
            if not feature or any(c in _RESERVED or c.isspace() for c in feature):
                self.fail("malformed feature {!r}".format(feature))
            self.pos = close + 1
        return Atom(name, feature)


@functools.lru_cache(maxsize=4096)
def parse_category(text: str) -> Category:
    """Parse a category string such as ``(S\\NP)/NP``.

    :raises CategoryParseError: with the offset of the first problem found
    """
    if not text:
        raise CategoryParseError(text, 0, "empty category")
    reader = _Reader(text)
    cat = reader.expression()
    if reader.pos != len(text):
        char = text[reader.pos]
        reader.fail("unbalanced parenthesis" if char == ')' else "illegal character {!r}".format(char))
    return cat


def render(cat: Category) -> str:
    if isinstance(cat, Atom):
        return cat.name if cat.feature is None else "{}[{}]".format(cat.name, cat.feature)
    return _operand(cat.result) + cat.slash + _operand(cat.argument)


def _operand(cat):
    return render(cat) if isinstance(cat, Atom) else '(' + render(cat) + ')'


def arity(cat: Category) -> int:
    n = 0
    while isinstance(cat, Functor):
        n += 1
        cat = cat.result
    return n


def arguments(cat: Category) -> List[Category]:
    """Arguments of ``cat``, innermost first, so ``arguments(c)[k - 1]`` is slot ``k``."""
    args = []
    while isinstance(cat, Functor):
        args.append(cat.argument)
        cat = cat.result
    args.reverse()
    return args


def argument_slot(cat: Category, k: int) -> Category:
    """Return the argument filling slot ``k``; slot 1 is the innermost argument.

    :raises IndexError: when ``k`` is larger than the arity of ``cat``
    """
    if k < 1:
        raise ValueError("Argument slots start at 1, got {}".format(k))
    args = arguments(cat)
    if k > len(args):
        raise IndexError("{} has no argument slot {}".format(render(cat), k))
    return args[k - 1]


def apply(functor: Category, arg: Category, direction: str) -> Optional[Category]:
    if isinstance(functor, Functor) and functor.slash == direction and functor.argument == arg:
        return functor.result
    return None


def compose(primary: Category, secondary: Category, direction: str) -> Optional[Category]:
    """Harmonic composition: ``X/Y Y/Z => X/Z`` and ``Y\\Z X\\Y => X\\Z``."""
    if not (isinstance(primary, Functor) and isinstance(secondary, Functor)):
        return None
    if primary.slash != direction or secondary.slash != direction:
        return None
    if primary.argument != secondary.result:
        return None
    return Functor(primary.result, direction, secondary.argument)


def is_modifier(cat: Category) -> bool:
    return isinstance(cat, Functor) and cat.result == cat.argument


def is_punctuation(cat: Category) -> bool:
    return isinstance(cat, Atom) and cat.feature is None and cat.name in PUNCTUATION


def is_conjunction(cat: Category) -> bool:
    return isinstance(cat, Atom) and cat.feature is None and (cat.name == CONJ or cat.name in PUNCTUATION)


def with_feature(cat: Atom, feature: Optional[str]) -> Atom:
    return Atom(cat.name, feature)


def combine(left: Category, right: Category) -> List[tuple]:
    """All ``(rule, result)`` pairs the binary rules allow for ``left right``."""
    found = []
    result = apply(left, right, FORWARD)
    if result is not None:
        found.append(('fa', result))
    result = apply(right, left, BACKWARD)
    if result is not None:
        found.append(('ba', result))
    result = compose(left, right, FORWARD)
    if result is not None:
        found.append(('fc', result))
    result = compose(right, left, BACKWARD)
    if result is not None:
        found.append(('bc', result))
    if is_conjunction(left) and isinstance(right, Atom) and right.feature is None:
        found.append(('conj', with_feature(right, CONJ)))
    if isinstance(left, Atom) and left.feature is None and right == with_feature(left, CONJ):
        found.append(('coord', left))
    if is_punctuation(right):
        found.append(('rpunct', left))
    if is_punctuation(left):
        found.append(('lpunct', right))
    return found


def derivation_rule(parent: Category, children: Sequence[Category]) -> Optional[str]:
    """Name the rule deriving ``parent`` from ``children``, or None if none does.

    Leaves are ``lex`` and unary nodes are ``unary`` (type-changing); binary
    nodes are one of ``fa``, ``ba``, ``fc``, ``bc``, ``conj``, ``coord``,
    ``lpunct`` or ``rpunct``.
    """
    if len(children) == 0:
        return 'lex'
    if len(children) == 1:
        return 'unary'
    if len(children) != 2:
        return None
    for rule, result in combine(children[0], children[1]):
        if result == parent:
            return rule
    return None
