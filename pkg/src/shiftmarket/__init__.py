"""Market clearing over space-time node graphs with shiftable load.

The package clears an electricity market formulated as a linear program
over (node, period) coordinates: DC power flow on the physical network,
plus a layer of non-physical "virtual" links along which data-center
entities may shift load in space and time.  Locational marginal prices
are the duals of the nodal balance rows, extracted from a built-in
bounded-variable simplex that returns full optimality certificates.

Typical use:

    from shiftmarket import case_3bus, clear, price_stats

    sol = clear(case_3bus(4))
    sol.welfare                  # cleared social welfare
    sol.prices[("n2", 1)]        # LMP at bus n2, period 1
    price_stats(sol).sigma       # per-period price dispersion
"""

from .analysis import (
    PriceStats,
    congestion_report,
    gap_check,
    price_stats,
    svg_price_heatmap,
)
from .casefile import CaseError, CaseFormatError, CaseValidationError, parse_case, serialize_case
from .cases import (
    Binding,
    ScenarioTemplate,
    builtin_case,
    case_1bus_5t,
    case_3bus,
    case_ieee30,
    sweep,
    template_1bus_5t,
    template_3bus,
)
from .clearing import (
    ClearingError,
    ClearingSolution,
    ProfitReport,
    clear,
    profits,
    welfare_decomposition,
)
from .formulation import ConstraintMap, VariableMap, build, mode_of
from .lp import (
    CertificateReport,
    LinearProgram,
    LpSolution,
    NumericalError,
    SolveOptions,
    check_certificate,
    solve,
)
from .netmodel import (
    CaseSpec,
    Diagnostic,
    Entity,
    Generator,
    Line,
    Load,
    Node,
    SpaceTimeIndex,
    VirtualLink,
    per_period,
    validate,
)

__version__ = "0.1.0"
