"""cranklab: exact crank dissections over cyclotomic integers.

Builds the Andrews-Garvan crank generating function C(zeta_p, q), the
elements of its p-dissection, and generalized Dedekind eta products, all
in exact arithmetic; transforms them under congruence subgroups with
exact multiplier systems; and certifies eta-product identities for the
dissection elements through the valence formula.
"""

__version__ = "0.1.0"

from .cyclotomic import CycNum, Phase, half_power, sin_ratio
from .qseries import (EtaAtom, EtaProduct, QSeries, E_series, eta_series,
                      f_series, geta_series)
from .partitions import (CrankTable, M_class, M_comb, crank, crank_series,
                         enumerate_partitions, p_of)
from .dissection import (DissectionElement, K_combinatorial, K_modular, U_pm,
                         j_product, j_series, pi_r, s_p)
from .etatransform import (Cusp, Matrix2, SlashResult, decompose_scaled,
                           etaquot_ord_closed, jacobi, mu_multiplier, nu_eta,
                           nu_theta1, ord_at_cusp, slash_E, slash_f)
from .verifier import (IdentitySpec, IdentityTerm, ValenceCertificate, cusps,
                       fan_width, fit_coefficients, fit_identity,
                       gamma0_symmetry_check, index_gamma1, k_lower_bounds,
                       modularity_check, ord_table, prove_crank_theorem,
                       symmetry_check_K0, valence_certificate)

__all__ = [name for name in dir() if not name.startswith("_")]
