"""Mode-bipartite entanglement of fixed-particle-number bosonic states."""

from .fock_space import FockBasis, ModeBipartition, SectorShape, basis, build_basis, sector_dims
from .numerics import DEFAULT_TOLERANCE, TolerancePolicy
from .states import (DensityMatrix, NumberSectorMixture, PolynomialSpec, PureState,
                     block_diagonal_project, embed_qutrit_block, from_fock_occupation,
                     from_local_polynomials, horodecki_qutrit_state, mix, perturb_offdiagonal,
                     pure_to_density, random_density)
from .partial_transpose import extended_partial_transpose, realign_block
from .negativity import (NegativityMethod, NegativityReport, negativity_general, negativity_oracle,
                         negativity_two_mode, weighted_negativity)
from .criteria import (ClassificationVerdict, Verdict, classify, decide_one_vs_rest,
                       diagonal_minor_class_check, is_ppt, schmidt_decompose)
from .dynamics import (DephasingParams, dephase_closed_form, integrate_oracle, lindblad_rhs,
                       negativity_trajectory, v_eigenvalue)

__version__ = "0.1.0"
