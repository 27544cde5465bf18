"""Schur multiple zeta values: truncated series, 2-labeled poset integrals and duality."""

__version__ = "0.1.0"

from .diagram import (
    DiagonalTableau,
    GeneralTableau,
    SkewDiagram,
    eval_ssyt_series,
    load_tableau,
    sequence_to_tableau,
    tableau_to_sequence,
)
from .duality import (
    dual_lr,
    dual_tau,
    enumerate_relations,
    g_membership,
    in_G,
    in_T,
    in_Tprime,
    tau,
    tau_lr,
    tau_ud,
    theta,
    theta_inverse,
)
from .errors import (
    AdmissibilityError,
    CapExceeded,
    MembershipError,
    NotProperError,
    ParseError,
    SchurzError,
    ShapeError,
)
from .integral_eval import (
    eval_via_extensions,
    expand_linear_extensions,
    mc_integral,
    verify_lemma1,
    verify_relation2,
    word_to_mzv,
)
from .notation import LabeledSeq, SeqIndex, enumerate_H, format_sequence, in_H, is_admissible, parse_sequence
from .poset import TwoLabeledPoset, build_poset, linear_extensions, to_dot
from .series_eval import FLOAT, RATIONAL, EvalResult, eval_mzv, eval_schur_series, eval_schur_series_generalized
