"""Exact and numeric q,t-correlation functions over partitions.

The main entry points are re-exported here; the submodules hold the rest.
"""

from .correlators import (one_point_closed, trace_brute_hat, trace_brute_hat_numeric,
                          two_point_closed_general, two_point_closed_special)
from .exceptions import (ConvergenceError, DegenerateSpecializationError, DomainError, QtcorrError,
                         SingularParameterError)
from .fock import FockVector, VertexParams, ZetaSeries, zero_mode_trace_closed, vertex_product_closed, v0_trace
from .macdonald import SymFunc, macdonald_P, modified_H_tilde, verify_vo
from .partitions import b_hat_stat, b_stat, enumerate_partitions
from .qseries import VSeries, pochhammer_fin, pochhammer_inf

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError", "DegenerateSpecializationError", "DomainError", "FockVector", "QtcorrError",
    "SingularParameterError", "SymFunc", "VSeries", "VertexParams", "ZetaSeries", "b_hat_stat",
    "b_stat", "enumerate_partitions", "macdonald_P", "modified_H_tilde", "one_point_closed",
    "pochhammer_fin", "pochhammer_inf", "zero_mode_trace_closed", "vertex_product_closed", "trace_brute_hat",
    "trace_brute_hat_numeric", "two_point_closed_general", "two_point_closed_special", "v0_trace",
    "verify_vo",
]
