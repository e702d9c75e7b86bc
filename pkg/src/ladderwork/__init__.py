"""Exact quadratic-transform ladders over prime fields."""

__version__ = "0.1.0"

from .field import PrimeFieldElement, fp, fp_inv, fp_pow
from .pseries import (
    LeadingForm,
    PrecisionError,
    TruncatedSeries,
    divides_prepared,
    gens,
    monomial_divide_exact,
    ord_and_leading_form,
    series_invert_unit,
    series_mul,
    solve_coordinate,
    substitute,
    weierstrass_prepare,
)
from .frames import (
    ChartMap,
    Frame,
    block_chart,
    compose_charts,
    detect_dominated_chart,
    monomial_chart,
    translation_chart,
)
from .ladder import (
    AlphaPolicy,
    LadderState,
    Transcript,
    choose_alpha,
    init_state,
    run_ladder,
    step_block_closed,
    step_block_direct,
)
from .obstruction import certify_nonmonomial, forced_phi, search_monomial, stage_pair
from .valwork import DyadicValue, value_group_report, value_of
