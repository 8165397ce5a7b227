"""Executable property checks for nabla calculus and the variational lemmas."""

from nablavar.oracle.fundamental import check_fundamental_lemma
from nablavar.oracle.identities import (
    IDENTITY_CHECKS,
    check_identity_suite,
    identity_reports,
)
from nablavar.oracle.positivity import check_positivity
from nablavar.oracle.suite import default_suite_scales, run_suite
from nablavar.oracle.vanishing import check_vanishing_lemmas

__all__ = [
    "IDENTITY_CHECKS",
    "check_fundamental_lemma",
    "check_identity_suite",
    "check_positivity",
    "check_vanishing_lemmas",
    "default_suite_scales",
    "identity_reports",
    "run_suite",
]
