"""LR stabilizer codes on finite groups: construction, degeneracy, spectra and tower scans."""

__version__ = "0.1.0"

from .code import (  # noqa: E402
    DegeneracyReport,
    LRCode,
    QuditLRCode,
    build_code,
    build_qudit_code,
    check_commutation,
    check_parity_identity,
    degeneracy,
    degeneracy_by_double_cosets,
    qudit_degeneracy,
)
from .errors import CapExceededError, InvariantError, LRCodesError, SpecError  # noqa: E402
from .groups import (  # noqa: E402
    AbelianGroup,
    DihedralGroup,
    FiniteGroup,
    GroupSubset,
    TableGroup,
    double_cosets,
    make_group,
    normal_subgroups,
    subset,
)
from .quotients import make_family, quotient, verify_homomorphism  # noqa: E402
from .spectrum import apply_error, min_excitation_energy, spectrum, syndrome_space  # noqa: E402
from .tower import (  # noqa: E402
    ScanOptions,
    ScanRow,
    TowerSpec,
    enumerate_sublattices,
    project_subsets,
    tower_scan,
    verify_chain,
)

__all__ = [
    "AbelianGroup",
    "CapExceededError",
    "DegeneracyReport",
    "DihedralGroup",
    "FiniteGroup",
    "GroupSubset",
    "InvariantError",
    "LRCode",
    "LRCodesError",
    "QuditLRCode",
    "ScanOptions",
    "ScanRow",
    "SpecError",
    "TableGroup",
    "TowerSpec",
    "apply_error",
    "build_code",
    "build_qudit_code",
    "check_commutation",
    "check_parity_identity",
    "degeneracy",
    "degeneracy_by_double_cosets",
    "double_cosets",
    "enumerate_sublattices",
    "make_family",
    "make_group",
    "min_excitation_energy",
    "normal_subgroups",
    "project_subsets",
    "quotient",
    "spectrum",
    "subset",
    "syndrome_space",
    "tower_scan",
    "verify_chain",
    "verify_homomorphism",
]
