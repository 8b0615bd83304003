"""High-precision evaluation of generalized and complete new mock theta functions.

The package evaluates q-Pochhammer symbols, basic hypergeometric series, the
six mock theta families in classical, generalized and complete (bilateral)
form, their bilateral transformation identities and continued fraction
representations, and checks those identities numerically.
"""
__version__ = "0.1.0"

from .errors import (AnnulusViolation, ConfigError, NonConvergence, PoleError, PreconditionError,  # noqa: E402
                     QMockError, SingularError, UsageError)
from .hyper import INF, PhiSpec, Psi2Spec, phi_eval, psi2_eval  # noqa: E402
from .mocktheta import (Family, FunctionId, ParameterPoint, Variant, eval_classical, eval_complete,  # noqa: E402
                        eval_generalized, evaluate)
from .qcore import (QBase, TruncationPolicy, precision, qpoch_finite, qpoch_infinite,  # noqa: E402
                    qpoch_reciprocal)
from .records import CATALOG, ResidualRecord, Trust, Verdict  # noqa: E402
from .results import SeriesResult, Status  # noqa: E402

__all__ = [
    "AnnulusViolation", "CATALOG", "ConfigError", "Family", "FunctionId", "INF", "NonConvergence",
    "ParameterPoint", "PhiSpec", "PoleError", "PreconditionError", "Psi2Spec", "QBase", "QMockError",
    "ResidualRecord", "SeriesResult", "SingularError", "Status", "TruncationPolicy", "Trust", "UsageError",
    "Variant", "Verdict", "eval_classical", "eval_complete", "eval_generalized", "evaluate", "phi_eval",
    "precision", "psi2_eval", "qpoch_finite", "qpoch_infinite", "qpoch_reciprocal",
]
