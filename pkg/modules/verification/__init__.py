# modules/verification/__init__.py
from .generators import case_rng, random_operator, random_pair
from .campaign import CaseContext, SuiteReport, run_campaign, run_suite
from .lemmas import lemma_buzano, lemma_gen_cauchy, lemma_mixed_schwarz

__all__ = [
    "case_rng", "random_operator", "random_pair",
    "CaseContext", "SuiteReport", "run_campaign", "run_suite",
    "lemma_buzano", "lemma_gen_cauchy", "lemma_mixed_schwarz",
]
