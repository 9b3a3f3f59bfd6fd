"""Shared test data: small trees, dependency graphs and the bundled data files."""
from pathlib import Path

import ccgmwe
from ccgmwe.category import parse_category
from ccgmwe.treebank import Dependency

DATA_DIR = Path(ccgmwe.__file__).parent / 'data'
TREEBANK = DATA_DIR / 'treebank.txt'
LEXICON = DATA_DIR / 'lexicon.tsv'
EXPERIMENT = DATA_DIR / 'experiment.env'

# "Mr. Vinken is chairman of Elsevier N.V. , the Dutch publishing group"
VINKEN_TREE = (
    r"(S (NP (N (N/N Mr.) (N Vinken))) (S\NP ((S\NP)/NP is) (NP (NP (N chairman)) (NP\NP ((NP\NP)/NP of) "
    r"(NP (NP (N (N/N Elsevier) (N N.V.))) (NP[conj] (, ,) (NP (NP/N the) (N (N/N Dutch) (N (N/N publishing) "
    r"(N group))))))))))"
)

# 1-based (argument, functor, functor category, slot, argument word, functor word)
VINKEN_DEPS = [
    (2, 1, 'N/N', 1, 'Vinken', 'Mr.'),
    (2, 3, r'(S\NP)/NP', 1, 'Vinken', 'is'),
    (4, 3, r'(S\NP)/NP', 2, 'chairman', 'is'),
    (4, 5, r'(NP\NP)/NP', 1, 'chairman', 'of'),
    (7, 5, r'(NP\NP)/NP', 2, 'N.V.', 'of'),
    (7, 6, 'N/N', 1, 'N.V.', 'Elsevier'),
    (12, 5, r'(NP\NP)/NP', 2, 'group', 'of'),
    (12, 9, 'NP/N', 1, 'group', 'the'),
    (12, 10, 'N/N', 1, 'group', 'Dutch'),
    (12, 11, 'N/N', 1, 'group', 'publishing'),
]

# the same sentence with mr.+vinken and elsevier+n.v. collapsed
VINKEN_COLLAPSED_DEPS = [
    (1, 2, r'(S\NP)/NP', 1, 'mr.+vinken', 'is'),
    (3, 2, r'(S\NP)/NP', 2, 'chairman', 'is'),
    (3, 4, r'(NP\NP)/NP', 1, 'chairman', 'of'),
    (5, 4, r'(NP\NP)/NP', 2, 'elsevier+n.v.', 'of'),
    (10, 4, r'(NP\NP)/NP', 2, 'group', 'of'),
    (10, 7, 'NP/N', 1, 'group', 'the'),
    (10, 8, 'N/N', 1, 'group', 'Dutch'),
    (10, 9, 'N/N', 1, 'group', 'publishing'),
]

BUREAU_TREE = r"(N (N/N Publishers) (N (N/N Information) (N Bureau)))"
BUREAU_COLLAPSED = r"(N publishers_information_bureau)"

ACCORDING_TREE = (
    r"((S\NP)\(S\NP) (((S\NP)\(S\NP))/PP according) (PP (PP/NP to) (NP (N (N/N publishers) "
    r"(N (N/N information) (N bureau))))))"
)

SPOON_SENTENCE = (
    "Mr. Spoon said the plan is not an attempt to shore up a decline in ad pages in the first nine months of "
    "1989 ; Newsweek 's ad pages totaled 1,620 , a drop of 3.2 % from last year , according to Publishers "
    "Information Bureau ."
).split()


def dependencies(rows):
    """Build Dependency objects from 1-based fixture rows."""
    return {Dependency(i - 1, j - 1, parse_category(cat), k, wi, wj) for i, j, cat, k, wi, wj in rows}

# an MWE that is not a constituent precedes one that is
STACKED_TREE = (r"(S (NP a) (S\NP (NP b) (S\NP (N c) (S\NP (N (N/N d) (N e)) "
                r"(S\NP ((S\NP)/NP f) (NP (NP/N g) (N h)))))))")
