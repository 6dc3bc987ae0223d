"""Pointwise classification of local and transmission boundary conditions for Dirac-type operators."""
from .boundary import (
    BoundaryCondition,
    BoundaryFrame,
    adjoint_bc,
    b_form,
    chiral_decompose,
    from_chiral_unitary,
    is_self_adjoint,
    is_symmetric,
)
from .catalog import FamilySpec, build_family, closed_form, expected_verdicts
from .clifford import build_rep, chirality, clifford_mult, verify_rep
from .linalg import Subspace, UnitaryMap, eigenspace, extract_unitary, graph_of, intersect, skew_eigenspace
from .regularity import (
    MobiusParams,
    SLVerdict,
    Witness,
    classify_d2n2,
    classify_d2n4,
    classify_d3n2_global,
    classify_d3n4,
    classify_d4n4,
    classify_d5n4_global,
    mobius_criterion,
    mobius_root_oracle,
    principal_symbol,
    sl_check_chiral,
    sl_check_sampled,
)
from .transmission import (
    DeltaShellParams,
    TransmissionPair,
    delta_shell_pair,
    delta_shell_regular,
    trans_self_adjoint,
    trans_sl_check,
    trans_symmetric,
)
from .witness import witness_build, witness_norms, witness_report

__version__ = "0.1.0"
