"""Newton polyhedra and the monodromy invariants they determine.

Zeta functions of monodromies (local, at infinity, complete intersections,
meromorphic germs), equivariant Hodge tables of nondegenerate hypersurfaces,
Jordan block counts and spectra at infinity.
"""

from .equivariant_hodge import UNDETERMINED, EHodgeTable, WeightedPolytope, e_table
from .errors import InconsistencyError, PreconditionError
from .jordan_spectrum import (
    JordanTable,
    Spectrum,
    assemble_infinity,
    assemble_local,
    jordan_blocks,
    jordan_prime_path,
    jordan_top_sizes,
    spectrum_infinity,
)
from .lattice_geom import LatticePolytope, convex_hull, minkowski_sum, mixed_volume
from .newton import NewtonPolyhedron, Support, atypical_faces, gamma_infinity, gamma_plus, properly_contained
from .stapledon import equivariant_E, jordan_full, subdivision_from_newton, toric_g
from .zeta import (
    CharPoly,
    ZetaFunction,
    charpoly_and_multiplicity,
    milnor_data,
    milnor_number,
    zeta_infinity,
    zeta_infinity_ci,
    zeta_local,
    zeta_local_ci,
    zeta_mero,
)

__all__ = [
    "UNDETERMINED", "EHodgeTable", "WeightedPolytope", "e_table",
    "InconsistencyError", "PreconditionError",
    "JordanTable", "Spectrum", "assemble_infinity", "assemble_local", "jordan_blocks",
    "jordan_prime_path", "jordan_top_sizes", "spectrum_infinity",
    "LatticePolytope", "convex_hull", "minkowski_sum", "mixed_volume",
    "NewtonPolyhedron", "Support", "atypical_faces", "gamma_infinity", "gamma_plus", "properly_contained",
    "equivariant_E", "jordan_full", "subdivision_from_newton", "toric_g",
    "CharPoly", "ZetaFunction", "charpoly_and_multiplicity", "milnor_data", "milnor_number",
    "zeta_infinity", "zeta_infinity_ci", "zeta_local", "zeta_local_ci", "zeta_mero",
]
