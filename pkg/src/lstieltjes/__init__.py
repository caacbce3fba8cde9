"""Arbitrary-precision L-series of periodic functions, generalized Stieltjes
constants, identity checks and integer relation probes."""

__version__ = "0.1.0"

from .errors import (
    ConvergenceError,
    DomainError,
    HypothesisError,
    LStieltjesError,
    PoleError,
    PrecisionInadequate,
)
from .precision import DEFAULT_CONTEXT, PrecisionContext, bernoulli
from .periodic import (
    PeriodicFunction,
    b1,
    fourier_transform,
    inverse_fourier,
    is_dirichlet_type,
    is_even,
    is_odd,
    make_fj,
)
from .characters import CharacterTable, dirichlet_characters
from .hurwitz import digamma, euler_gamma, hurwitz_zeta, hurwitz_zeta_deriv, log_gamma, riemann_zeta
from .stieltjes import StieltjesKey, StieltjesValue, stieltjes, stieltjes_direct, stieltjes_em
from .lseries import (
    LSeriesEvaluation,
    functional_equation_rhs,
    l1_odd_closed,
    l_deriv_via_stieltjes,
    l_eval,
    l_prime_0,
    l_prime_1_odd,
    l_value,
)
from .verify import IDENTITIES, IdentityReport, check_nonvanishing, d_kl, verify_all, verify_identity
from .relations import IntegerRelation, pslq, probe_conjecture
