"""Exact counts of matrix pairs (A, B) over F_q with AB = zeta*BA."""

from .counting import CountReport, Partition, count_K, count_N, count_S, count_U, partitions
from .ff import FieldElement, FieldSpec, PolyFF, field_for_q, field_make, mult_order, pm_member, roots_of_order
from .linalg import MatrixFF, fitting_decompose, invariant_factors, is_similar, twisted_centralizer_dim
from .oracle import OracleJob, oracle_count, oracle_naive
from .qfunc import PolyQ, RatQ, SeriesX, count_eval, count_poly, series_for

__version__ = "0.1.0"
