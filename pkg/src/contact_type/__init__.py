"""Exact computation of q-types of ideals and real hypersurface germs."""

__version__ = "0.1.0"

from .config import RunConfig  # noqa: E402
from .curves import CurveJet, curve_search_lower_bound, order_ratio, pullback, tau_curve_ideal  # noqa: E402
from .decomp import (  # noqa: E402
    HoloDecomposition,
    NonSquareWeightError,
    UnitaryMatrix,
    check_q_positivity,
    extract_fg,
    ideal_U,
    polarize,
    sample_unitary,
    truncate_jet,
)
from .gaussian import GaussianRational  # noqa: E402
from .localalg import (  # noqa: E402
    Budget,
    BudgetExceeded,
    GenericSampler,
    IdealPresentation,
    LinearFormSet,
    colength,
    colength_with_forms,
    generic_colength,
    mora_standard_basis,
)
from .parse import ParseError, parse_poly, parse_real  # noqa: E402
from .poly import INF, Poly, RealPoly  # noqa: E402
from .puiseux import PuiseuxBranch, newton_puiseux  # noqa: E402
from .qtypes import (  # noqa: E402
    Case,
    TestVariety,
    UnsupportedConfiguration,
    delta1_ideal,
    delta_q_hypersurface,
    delta_q_ideal,
    dn_ideal,
    dq_hypersurface,
    dq_ideal,
    hypersurface_q_types,
    ideal_q_types,
    tau_ideal_variety,
    verify_theorems,
)
from .typevalue import TypeValue  # noqa: E402
