"""A small generative CCG chart parser."""
from .chart import ChartStats, ParseResult, parse, parse_all
from .dependencies import count_combinations, extract_all, extract_dependencies
from .model import ParserModel, load_model, pos_tag, save_model, score_tree, train
