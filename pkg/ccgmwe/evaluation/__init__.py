from .combination import SCHEMES, combine_all, combine_models
from .scoring import (EdgeClass, EvalReport, classify_edge, edge_counts, f_measure, read_counts, score, unit_map,
                      unit_map_from_tokens, write_counts, write_report)
from .significance import SigResult, format_p, sig_test

__all__ = [
    'SCHEMES', 'combine_all', 'combine_models',
    'EdgeClass', 'EvalReport', 'classify_edge', 'edge_counts', 'f_measure', 'read_counts', 'score', 'unit_map',
    'unit_map_from_tokens', 'write_counts', 'write_report',
    'SigResult', 'format_p', 'sig_test',
]
