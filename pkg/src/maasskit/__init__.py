"""maasskit: exact q-series, theta decompositions and asymptotics for
Kac-Wakimoto sl(m|n)^ characters.

The package is organized in layers:

* ``exact`` / ``qseries`` -- exact coefficient ring and truncated series;
* ``characters`` -- the two-variable character generating function, its
  specializations and the quasimodular Laurent coefficients;
* ``asymptotics`` -- higher Euler numbers, Mordell-type integrals and the
  explicit asymptotic expansion of the characters;
* ``complexeval`` -- arbitrary-precision evaluation of theta, eta,
  Appell-Lerch sums and their completions;
* ``decomposition`` -- the finite/polar splitting of the meromorphic
  Jacobi form behind the characters, with nonholomorphic completions;
* ``suites`` -- randomized transformation-law verification batteries;
* ``cli`` -- the ``maasskit`` command-line tool.
"""

from .exact import ExactScalar, PiPolynomial, MixedPiPowers
from .qseries import (
    QSeries,
    ZetaQSeries,
    NonUnitLeadingTerm,
    MismatchAtOrder,
    eta_qexp,
    eta_quotient,
    partition_qexp,
    coeff_extract,
    series_to_json,
    series_from_json,
)
from .characters import (
    CharacterParams,
    chF_expansion,
    tr_character,
    character_value,
    dtilde,
    dtilde_closed_form,
    e2_expansion,
    d_from_dtilde,
    phi_shift_consistency,
    theta_eps_series,
    theta_quotient_log_derivatives,
)
from .asymptotics import (
    higher_euler,
    higher_euler_quadrature,
    a_coeff,
    AsymptoticExpansion,
    asymptotic_eval,
    mordell_quadrature,
)
from .complexeval import (
    TauPoint,
    ModularMatrix,
    theta_num,
    eta_num,
    theta_ab_num,
    E_num,
    R_num,
    mu_num,
    mu_hat_num,
    f_M_num,
    R_Ml_num,
    f_hat_num,
    phi_num,
    psi_num,
    slash_num,
)
from .suites import transformation_suite, run_all_suites, suite_names

__version__ = "0.1.0"

__all__ = [
    "ExactScalar", "PiPolynomial", "MixedPiPowers",
    "QSeries", "ZetaQSeries", "NonUnitLeadingTerm", "MismatchAtOrder",
    "eta_qexp", "eta_quotient", "partition_qexp", "coeff_extract",
    "series_to_json", "series_from_json",
    "CharacterParams", "chF_expansion", "tr_character", "character_value",
    "dtilde", "dtilde_closed_form", "e2_expansion", "d_from_dtilde",
    "phi_shift_consistency", "theta_eps_series", "theta_quotient_log_derivatives",
    "higher_euler", "higher_euler_quadrature", "a_coeff",
    "AsymptoticExpansion", "asymptotic_eval", "mordell_quadrature",
    "TauPoint", "ModularMatrix",
    "theta_num", "eta_num", "theta_ab_num", "E_num", "R_num",
    "mu_num", "mu_hat_num", "f_M_num", "R_Ml_num", "f_hat_num",
    "phi_num", "psi_num", "slash_num",
    "transformation_suite", "run_all_suites", "suite_names",
    "__version__",
]
