"""pirlab: a multi-server information-theoretic private information
retrieval laboratory.

The package is organized around a single generic engine
(:mod:`pirlab.engine`) that turns a family of orthogonal query arrays with
unit-vector span structure into a working retrieval protocol.  Seven
concrete constructions live under :mod:`pirlab.protocols`; their
combinatorial ingredients (matching vectors, decoding polynomials, parity
sets) come from :mod:`pirlab.mv`; :mod:`pirlab.verify` holds the exhaustive
correctness/privacy/accounting suites and :mod:`pirlab.sim` the in-process
and TCP execution environments.
"""

from .engine import Aux, Codec, CommCost, Scheme, answer, comm_cost, oa_strength_check, query_gen, reconstruct, span_check

__all__ = [
    "Aux",
    "Codec",
    "CommCost",
    "Scheme",
    "answer",
    "comm_cost",
    "oa_strength_check",
    "query_gen",
    "reconstruct",
    "span_check",
]
