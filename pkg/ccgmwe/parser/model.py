"""A generative CCG model conditioned on categories.

P(T, S) = P(root | TOP) * product of P(expansion | parent) over internal
nodes * product of P(LEX | c) P(token | c) over leaves. Tokens seen fewer than
``unknown_threshold`` times are scored with P(LEX | c) P(c | POS) instead.
"""
import csv
import logging
import math
from collections import Counter, defaultdict
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import pandas

from ..category import Category, parse_category, render
from ..errors import CcgMweError, FormatError
from ..treebank import MWE_JOINER, SentenceRecord, Tree

logger = logging.getLogger(__name__)

LEX = ()
LEX_MARK = '<LEX>'
ANY_TAG = '*'
MODEL_COLUMNS = ['table', 'condition', 'outcome', 'value']

Expansion = Tuple[Category, ...]


def smoothed(counts: Counter, k: float) -> Dict:
    """Add-k estimate over the outcomes observed in ``counts``."""
    total = sum(counts.values())
    denominator = total + k * len(counts)
    return {outcome: (n + k) / denominator for outcome, n in counts.items()}


def majority(counts: Counter) -> Optional[str]:
    if not counts:
        return None
    return min(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]


class ParserModel:
    def __init__(self, root, rules, lexicon, backoff, tag_counts, token_counts,
                 smoothing=0.1, unknown_threshold=2):
        self.root: Dict[Category, float] = root
        self.rules: Dict[Category, Dict[Expansion, float]] = rules
        self.lexicon: Dict[Category, Dict[str, float]] = lexicon
        self.backoff: Dict[str, Dict[Category, float]] = backoff
        self.tag_counts: Dict[str, Counter] = tag_counts
        self.token_counts: Counter = token_counts
        self.smoothing = smoothing
        self.unknown_threshold = unknown_threshold
        self._index()

    def _index(self):
        self.binary = defaultdict(list)
        self.unary = defaultdict(list)
        self.emissions = defaultdict(list)
        for parent, expansions in self.rules.items():
            for expansion, p in expansions.items():
                if len(expansion) == 2:
                    self.binary[expansion].append((parent, math.log(p)))
                elif len(expansion) == 1:
                    self.unary[expansion[0]].append((parent, math.log(p)))
        for cat, tokens in self.lexicon.items():
            for token, p in tokens.items():
                self.emissions[token].append((cat, math.log(p)))
        all_tags = Counter()
        for counts in self.tag_counts.values():
            all_tags.update(counts)
        self.majority_tag = majority(all_tags) or ANY_TAG

    @property
    def categories(self) -> List[Category]:
        cats = set(self.rules)
        for expansions in self.rules.values():
            for expansion in expansions:
                cats.update(expansion)
        return sorted(cats)

    def is_known(self, token: str) -> bool:
        return self.token_counts.get(token, 0) >= self.unknown_threshold

    def lex_logprob(self, cat: Category) -> Optional[float]:
        p = self.rules.get(cat, {}).get(LEX)
        return None if p is None else math.log(p)

    def leaf_scores(self, token: str, tag: str) -> List[Tuple[Category, float]]:
        """Lexical categories available for ``token`` with their log scores."""
        scores = []
        if self.is_known(token):
            for cat, lp in self.emissions.get(token, []):
                lex = self.lex_logprob(cat)
                if lex is not None:
                    scores.append((cat, lex + lp))
        else:
            table = self.backoff.get(tag) or self.backoff.get(ANY_TAG, {})
            for cat, p in table.items():
                lex = self.lex_logprob(cat)
                if lex is not None:
                    scores.append((cat, lex + math.log(p)))
        return sorted(scores, key=lambda cs: render(cs[0]))

    def leaf_logprob(self, cat: Category, token: str, tag: str) -> float:
        for c, lp in self.leaf_scores(token, tag):
            if c == cat:
                return lp
        return -math.inf

    def root_logprob(self, cat: Category) -> float:
        p = self.root.get(cat)
        return -math.inf if p is None else math.log(p)

    def rule_logprob(self, parent: Category, expansion: Expansion) -> float:
        p = self.rules.get(parent, {}).get(expansion)
        return -math.inf if p is None else math.log(p)

    def distributions(self):
        """Every conditional distribution as ``(table, condition, mapping)``."""
        yield 'root', 'TOP', self.root
        for parent, expansions in self.rules.items():
            yield 'rule', parent, expansions
        for cat, tokens in self.lexicon.items():
            yield 'lex', cat, tokens
        for tag, cats in self.backoff.items():
            yield 'backoff', tag, cats


def train(records: Iterable[SentenceRecord], smoothing: float = 0.1, unknown_threshold: int = 2) -> ParserModel:
    """Estimate a model from gold trees by smoothed relative frequency."""
    if smoothing < 0:
        raise CcgMweError("Smoothing must not be negative")
    root_counts = Counter()
    rule_counts = defaultdict(Counter)
    lex_counts = defaultdict(Counter)
    backoff_counts = defaultdict(Counter)
    tag_counts = defaultdict(Counter)
    token_counts = Counter()
    sentences = 0
    for record in records:
        if record.tree is None:
            continue
        sentences += 1
        root_counts[record.tree.category] += 1
        for node in record.tree.nodes():
            if node.is_leaf:
                rule_counts[node.category][LEX] += 1
                lex_counts[node.category][node.token] += 1
                token_counts[node.token] += 1
                backoff_counts[ANY_TAG][node.category] += 1
                if node.pos is not None:
                    backoff_counts[node.pos][node.category] += 1
                    tag_counts[node.token][node.pos] += 1
            else:
                rule_counts[node.category][tuple(c.category for c in node.children)] += 1
    if not sentences:
        raise CcgMweError("Cannot train on an empty treebank")
    logger.info("Trained on %d sentences: %d categories, %d token types",
                sentences, len(rule_counts), len(token_counts))
    return ParserModel(
        root=smoothed(root_counts, smoothing),
        rules={c: smoothed(n, smoothing) for c, n in rule_counts.items()},
        lexicon={c: smoothed(n, smoothing) for c, n in lex_counts.items()},
        backoff={t: smoothed(n, smoothing) for t, n in backoff_counts.items()},
        tag_counts=dict(tag_counts),
        token_counts=token_counts,
        smoothing=smoothing,
        unknown_threshold=unknown_threshold,
    )


def pos_tag(model: ParserModel, tokens: Sequence[str], joiner: str = MWE_JOINER) -> List[str]:
    """Most frequent training tag per token; ties go to the alphabetically first tag.

    An unseen joined MWE token is tagged like its rightmost unit.
    """
    tags = []
    for token in tokens:
        counts = model.tag_counts.get(token) or model.tag_counts.get(token.lower())
        if not counts and joiner in token.strip(joiner):
            last = token.rsplit(joiner, 1)[-1]
            counts = model.tag_counts.get(last) or model.tag_counts.get(last.lower())
        tags.append(majority(counts) if counts else model.majority_tag)
    return tags


def score_tree(model: ParserModel, tree: Tree, tags: Optional[Sequence[str]] = None) -> float:
    """Log P(T, S) of ``tree`` under ``model``; -inf if the model cannot produce it."""
    leaves = tree.leaves()
    if tags is None:
        tags = pos_tag(model, [leaf.token for leaf in leaves])
    total = model.root_logprob(tree.category)
    for node in tree.nodes():
        if node.is_leaf:
            total += model.leaf_logprob(node.category, node.token, tags[node.index])
        else:
            total += model.rule_logprob(node.category, tuple(c.category for c in node.children))
    return total


def _encode_expansion(expansion: Expansion) -> str:
    return LEX_MARK if expansion == LEX else ' '.join(render(c) for c in expansion)


def _decode_expansion(text: str) -> Expansion:
    return LEX if text == LEX_MARK else tuple(parse_category(c) for c in text.split(' '))


def save_model(model: ParserModel, path):
    rows = [('meta', 'smoothing', '', model.smoothing), ('meta', 'unknown_threshold', '', model.unknown_threshold)]
    rows += [('root', 'TOP', render(c), p) for c, p in model.root.items()]
    for parent, expansions in model.rules.items():
        rows += [('rule', render(parent), _encode_expansion(e), p) for e, p in expansions.items()]
    for cat, tokens in model.lexicon.items():
        rows += [('lex', render(cat), t, p) for t, p in tokens.items()]
    for tag, cats in model.backoff.items():
        rows += [('backoff', tag, render(c), p) for c, p in cats.items()]
    for token, tags in model.tag_counts.items():
        rows += [('tag', token, t, n) for t, n in tags.items()]
    rows += [('freq', token, '', n) for token, n in model.token_counts.items()]
    frame = pandas.DataFrame(rows, columns=MODEL_COLUMNS)
    frame.to_csv(path, sep='\t', index=False, quoting=csv.QUOTE_NONE, float_format='%.17g')
    logger.debug("Saved model with %d rows to %s", len(frame), path)


def load_model(path) -> ParserModel:
    try:
        frame = pandas.read_csv(path, sep='\t', dtype=str, keep_default_na=False, quoting=csv.QUOTE_NONE)
    except (pandas.errors.EmptyDataError, pandas.errors.ParserError) as e:
        raise FormatError(path, None, "not a model file: {}".format(e)) from e
    if list(frame.columns) != MODEL_COLUMNS:
        raise FormatError(path, 1, "expected columns {}".format(", ".join(MODEL_COLUMNS)))
    root, rules, lexicon, backoff = {}, defaultdict(dict), defaultdict(dict), defaultdict(dict)
    tag_counts, token_counts = defaultdict(Counter), Counter()
    meta = {}
    for row, (table, condition, outcome, value) in enumerate(frame.itertuples(index=False), start=2):
        try:
            number = float(value)
            if table == 'meta':
                meta[condition] = number
            elif table == 'root':
                root[parse_category(outcome)] = number
            elif table == 'rule':
                rules[parse_category(condition)][_decode_expansion(outcome)] = number
            elif table == 'lex':
                lexicon[parse_category(condition)][outcome] = number
            elif table == 'backoff':
                backoff[condition][parse_category(outcome)] = number
            elif table == 'tag':
                tag_counts[condition][outcome] = int(number)
            elif table == 'freq':
                token_counts[condition] = int(number)
            else:
                raise FormatError(path, row, "unknown table {!r}".format(table))
        except (ValueError, CcgMweError) as e:
            if isinstance(e, FormatError):
                raise
            raise FormatError(path, row, str(e)) from e
    return ParserModel(root, dict(rules), dict(lexicon), dict(backoff), dict(tag_counts), token_counts,
                       smoothing=meta.get('smoothing', 0.1),
                       unknown_threshold=int(meta.get('unknown_threshold', 2)))
