"""Solution families of the four similarity reductions.

Constructors live in :mod:`.travelling`, :mod:`.scaling`, :mod:`.logt` and
:mod:`.logx`; :mod:`.registry` names them and attaches their residual checks.
"""

from .core import (Case, CurveFn, CurveKind, FieldPair, ImplicitCurve, ParametricCurve,
                   ReductionSpec, constant_curve, lift)
from .logt import (AbelCase, SundmanSolution, lt_abel_parametric, lt_G, lt_P_erf, lt_P_sinh,
                   lt_Q_linear, lt_R_sinh, lt_sundman)
from .logx import AbelCanonical, c2zero_density_closed, lx_c2nonzero, lx_c2zero
from .registry import (FAMILIES, Check, FamilyInfo, Solution, build, build_from_spec, family,
                       family_index_table, make_spec)
from .scaling import (beta0_density_closed, bernoulli_density_closed, sc_P_beta0,
                      sc_P_gamma0, sc_P_q52, sc_Q_gamma0, sc_Q_q52, sc_Q_sigma_m1, sc_Y_q52)
from .travelling import (GtfBranch, PolynomialCase, Trig, tw_density_closed, tw_P_gtf,
                         tw_P_polynomial, tw_Q_gtf, tw_Q_q32)

__all__ = [
    "Case", "CurveFn", "CurveKind", "FieldPair", "ImplicitCurve", "ParametricCurve",
    "ReductionSpec", "constant_curve", "lift",
    "GtfBranch", "PolynomialCase", "Trig", "tw_P_gtf", "tw_Q_gtf", "tw_P_polynomial",
    "tw_Q_q32", "tw_density_closed",
    "sc_P_beta0", "sc_Q_sigma_m1", "sc_P_gamma0", "sc_Q_gamma0", "sc_P_q52", "sc_Q_q52",
    "sc_Y_q52", "beta0_density_closed", "bernoulli_density_closed",
    "lt_P_erf", "lt_P_sinh", "lt_R_sinh", "lt_G", "lt_Q_linear", "lt_sundman",
    "SundmanSolution", "AbelCase", "lt_abel_parametric",
    "lx_c2zero", "lx_c2nonzero", "c2zero_density_closed", "AbelCanonical",
    "FAMILIES", "Check", "FamilyInfo", "Solution", "build", "build_from_spec", "family",
    "family_index_table", "make_spec",
]
