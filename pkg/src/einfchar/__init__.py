"""Mod-2 homology of free E-infinity ring spectra and a bookkeeping model of
characteristic cell constructions over tabulated stable stems."""
from .dual_steenrod import DualSteenrod, DualSteenrodIdentification, coproduct, dl_on_zeta
from .dyer_lashof import FreeDLAlgebra, adem_reduce, apply_operation, dual_steenrod_action, is_admissible
from .f2poly import F2Polynomial, Generator, Monomial, TensorPolynomial, multiply
from .free_homology import coaction_of_generator, rho_map, slice_dim, verify_epi
from .stems import UNKNOWN, StemsTable, load, toda_bracket
from .cofiber_les import cofiber_pi
from .char_builder import SurvivalOracle, build, compare_kernels, ideal_closure

__all__ = [
    "DualSteenrod", "DualSteenrodIdentification", "coproduct", "dl_on_zeta",
    "FreeDLAlgebra", "adem_reduce", "apply_operation", "dual_steenrod_action", "is_admissible",
    "F2Polynomial", "Generator", "Monomial", "TensorPolynomial", "multiply",
    "coaction_of_generator", "rho_map", "slice_dim", "verify_epi",
    "UNKNOWN", "StemsTable", "load", "toda_bracket", "cofiber_pi",
    "SurvivalOracle", "build", "compare_kernels", "ideal_closure",
]
