"""Exact outer bounds and topology checks for multi-unicast deterministic networks."""

from .bounds import (
    SearchLimits,
    classic_cutset,
    entropy_bound_terms,
    eval_pair_bound,
    gns_bound,
    search_pair_bound,
    verify_report,
)
from .exactalg import GF2, QQ, ExactMatrix, FieldSpec, SupportPattern, generic_rank, rank
from .netmodel import (
    CutChain,
    CutPair,
    KkkNetwork,
    LayeredNetwork,
    TinyJointDistribution,
    WirelineNetwork,
    concatenate,
    load_network,
)
from .reports import BoundReport

__version__ = "0.1.0"

__all__ = [
    "BoundReport", "CutChain", "CutPair", "ExactMatrix", "FieldSpec", "GF2", "KkkNetwork",
    "LayeredNetwork", "QQ", "SearchLimits", "SupportPattern", "TinyJointDistribution",
    "WirelineNetwork", "classic_cutset", "concatenate", "entropy_bound_terms", "eval_pair_bound",
    "generic_rank", "gns_bound", "load_network", "rank", "search_pair_bound", "verify_report",
]
