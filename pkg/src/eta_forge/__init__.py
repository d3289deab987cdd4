"""eta-forge: finite eta families, kernel integral identities,
critical-line zero machinery, proto-zero scanning, and an exact
Weyl-algebra kernel with operator binomial powers.

The public surface re-exports the main types and operations of each
submodule; the ``eta-forge`` console script exposes the same operations
with machine-readable output.
"""

from .errors import (
    ConvergenceError,
    DomainError,
    EtaForgeError,
    PoleError,
    RangeError,
    SingularPrefactorError,
    VerificationError,
)
from .finite_eta import (
    EtaValue,
    ExactRational,
    Family,
    FiniteEtaSpec,
    derivative,
    evaluate,
    evaluate_exact,
    trivial_zero_report,
)
from .hasse_global import (
    GlobalEvalResult,
    ZeroRecord,
    eta_global,
    functional_equation_residual,
    refine_zero,
    zeta_global,
)
from .kernel_integrals import (
    IdentityResidual,
    QuadratureResult,
    integrate_L,
    kernel_value,
    rhs_closed_form,
    verify_identity,
)
from .numerics import (
    ComplexPoint,
    PrecisionContext,
    RealValue,
    cexp,
    cgamma,
    cln,
    cpow,
    csin,
)
from .proto_zeros import (
    CloudComparison,
    PlanckInfo,
    ProtoZeroRecord,
    ScanConfig,
    compare_to_global,
    planck_resolution,
    proto_cloud,
    scan_line,
)
from .weyl_algebra import (
    GaussRat,
    LemmaReport,
    RestFrame,
    SPoly,
    UnitPhase,
    UPoly,
    WeylPoly,
    WeylWord,
    commutator,
    lemma_suite,
    mod_observer,
    mod_vacuum,
    normal_order,
    parse_weyl_poly,
    rest_frames,
    substitute_u,
)
from .weyl_powers import (
    CliffordSide,
    Generator,
    binom_coeff,
    binom_spoly,
    clifford_contains,
    equilibrium_identity_check,
    operator_power_truncated,
    pi_s,
)

__version__ = "0.1.0"
