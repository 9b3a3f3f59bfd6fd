import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..category import Category, render
from ..treebank import Tree
from .model import ParserModel, pos_tag

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChartStats:
    cells: int = 0
    entries: int = 0
    unary_rounds: int = 0


@dataclass(frozen=True)
class ParseResult:
    tree: Optional[Tree]
    logprob: float
    stats: ChartStats = field(default_factory=ChartStats)

    @property
    def failed(self) -> bool:
        return self.tree is None


# a cell maps a category to (log score, backpointer); backpointers are
# ('lex',), ('unary', child) or ('binary', split, left, right)
Cell = Dict[Category, Tuple[float, tuple]]


def _close_unary(model: ParserModel, cell: Cell, limit: int) -> int:
    rounds = 0
    for rounds in range(1, limit + 1):
        changed = False
        for child in sorted(cell, key=render):
            score = cell[child][0]
            for parent, lp in model.unary.get(child, ()):
                candidate = score + lp
                if parent not in cell or candidate > cell[parent][0]:
                    cell[parent] = (candidate, ('unary', child))
                    changed = True
        if not changed:
            break
    return rounds


def parse(model: ParserModel, tokens: Sequence[str], tags: Optional[Sequence[str]] = None) -> ParseResult:
    """Viterbi CKY: the most probable derivation of ``tokens``, or a failed result."""
    if not tokens:
        raise ValueError("Cannot parse an empty sentence")
    n = len(tokens)
    if tags is None:
        tags = pos_tag(model, tokens)
    limit = max(1, len(model.categories))
    chart: Dict[Tuple[int, int], Cell] = {}
    unary_rounds = 0

    for i, token in enumerate(tokens):
        cell = {cat: (score, ('lex',)) for cat, score in model.leaf_scores(token, tags[i])}
        unary_rounds += _close_unary(model, cell, limit)
        chart[i, i + 1] = cell

    for width in range(2, n + 1):
        for start in range(0, n - width + 1):
            end = start + width
            cell: Cell = {}
            for split in range(start + 1, end):
                left_cell, right_cell = chart[start, split], chart[split, end]
                if not left_cell or not right_cell:
                    continue
                for left in sorted(left_cell, key=render):
                    left_score = left_cell[left][0]
                    for right in sorted(right_cell, key=render):
                        for parent, lp in model.binary.get((left, right), ()):
                            candidate = left_score + right_cell[right][0] + lp
                            if parent not in cell or candidate > cell[parent][0]:
                                cell[parent] = (candidate, ('binary', split, left, right))
            unary_rounds += _close_unary(model, cell, limit)
            chart[start, end] = cell

    stats = ChartStats(cells=len(chart), entries=sum(len(c) for c in chart.values()), unary_rounds=unary_rounds)
    best, best_score = None, -math.inf
    for cat in sorted(chart[0, n], key=render):
        score = chart[0, n][cat][0] + model.root_logprob(cat)
        if score > best_score:
            best, best_score = cat, score
    if best is None:
        logger.debug("No parse for: %s", ' '.join(tokens))
        return ParseResult(None, -math.inf, stats)
    return ParseResult(_build(chart, tokens, tags, 0, n, best), best_score, stats)


def _build(chart, tokens, tags, start, end, cat) -> Tree:
    pointer = chart[start, end][cat][1]
    if pointer[0] == 'lex':
        return Tree(cat, token=tokens[start], pos=tags[start], index=start)
    if pointer[0] == 'unary':
        return Tree(cat, (_build(chart, tokens, tags, start, end, pointer[1]),))
    _, split, left, right = pointer
    return Tree(cat, (_build(chart, tokens, tags, start, split, left), _build(chart, tokens, tags, split, end, right)))


def parse_all(model: ParserModel, sentences) -> List[Tuple[str, ParseResult]]:
    results = []
    for sentence_id, tokens in sentences:
        results.append((sentence_id, parse(model, tokens)))
    failed = sum(1 for _, r in results if r.failed)
    logger.info("Parsed %d sentences, %d without a parse", len(results), failed)
    return results
