"""Pseudo-unitary state spaces for particle-antiparticle pairs.

The package models the indefinite-metric space C^4 with g = diag(1, 1, -1, -1),
its two sectors, pseudo-Hermitian observables, pair and composite states,
densities, projective measurements, the SU(2,2) realizations and frame
changes under the block-diagonal dynamical subgroup.
"""

__version__ = "0.1.0"

from .cartan import (CartanVector, Restriction, Sector, SectorVector, hilbert_inner,
                     indefinite_inner)
from .correlations import FrameTransform, Mode, invariance_report
from .density import DensityOperator, compose, density_of, entropy
from .errors import PairspaceError, ParseError
from .group import DynElement, GroupElement, Realization, dyn_element, verify_membership
from .observables import (ChargeConjugation, Observable, expectation, make_charge,
                          make_energy, make_polarization, make_spin)
from .states import PairState, make_pair_state

__all__ = [
    "CartanVector", "ChargeConjugation", "DensityOperator", "DynElement", "FrameTransform",
    "GroupElement", "Mode", "Observable", "PairState", "PairspaceError", "ParseError",
    "Realization", "Restriction", "Sector", "SectorVector", "compose", "density_of",
    "dyn_element", "entropy", "expectation", "hilbert_inner", "indefinite_inner",
    "invariance_report", "make_charge", "make_energy", "make_pair_state",
    "make_polarization", "make_spin", "verify_membership",
]
