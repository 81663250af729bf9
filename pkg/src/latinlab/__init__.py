"""Exact and numerical checks on latin squares, their transversals and the latin-square tensor."""

from .ranks import (PartitionTriple, close, count_measurable, crank, crank_pi2_formula, cx,
                    enumerate_triples, gamma, gamma0, lambda_indicator, lrank, trank)
from .degenerations import (DegenRecord, TripleSystem, VertexPartitionTriple, build_H1,
                            canonical_form, closure_of_merges, d_value, degeneration_report,
                            enumerate_degenerations, quotient_system, stability_margin,
                            vertex_closure)
from .errors import (BudgetExceeded, Infeasible, LatinLabError, NoConvergence, NotLatin,
                     Timeout)
from .fourier import (TupleFunction, UPoly, indicator_bijections, indicator_injective,
                      lambda_eval, majorant_check, p_project, pa1s, pa1s_kernel_formula,
                      q_project, sharp_flat_split, sign_check, sparseval, u_apply,
                      u_positivity_scan)
from .groups import GroupSpec, cayley_table, group_square, identify
from .partitions import (Partition, breaking_check, enumerate_partitions, exp_formula_check,
                         kernel, meet_join, sigma_weight)
from .sampling import jm_sample
from .spectral import (build_operator, compare_group_spectrum, predict_group_spectrum,
                       quasi_use_check, rho, trace6_by_configurations, trace_power)
from .square import (LatinSquare, cyclic_square, from_grid, read_square, transversal_asymptotic,
                     write_square)
from .transversals import count_transversals

__version__ = "0.1.0"

__all__ = [
    "breaking_check", "BudgetExceeded", "build_H1", "build_operator", "canonical_form",
    "cayley_table", "close", "closure_of_merges", "compare_group_spectrum", "count_measurable",
    "count_transversals", "crank", "crank_pi2_formula", "cx", "cyclic_square", "d_value",
    "degeneration_report", "DegenRecord", "enumerate_degenerations", "enumerate_partitions",
    "enumerate_triples", "exp_formula_check", "from_grid", "gamma", "gamma0", "group_square",
    "GroupSpec", "identify", "indicator_bijections", "indicator_injective", "Infeasible",
    "jm_sample", "kernel", "lambda_eval", "lambda_indicator", "LatinLabError", "LatinSquare",
    "lrank", "majorant_check", "meet_join", "NoConvergence", "NotLatin", "p_project", "pa1s",
    "pa1s_kernel_formula", "Partition", "PartitionTriple", "predict_group_spectrum", "q_project",
    "quasi_use_check", "quotient_system", "read_square", "rho", "sharp_flat_split", "sigma_weight",
    "sign_check", "sparseval", "stability_margin", "Timeout", "trace6_by_configurations",
    "trace_power", "trank", "transversal_asymptotic", "TripleSystem", "TupleFunction", "u_apply",
    "u_positivity_scan", "UPoly", "vertex_closure", "VertexPartitionTriple", "write_square",
]
