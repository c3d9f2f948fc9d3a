"""Numerics for Lorentz and Schatten ideals of compact operators.

Submodules
----------
sequences
    Monotone sequences, partial sums and symbolic power-log families.
spectra
    Characteristic numbers via one-sided Jacobi, matrix CSV I/O.
snorms
    Lorentz indices, norms, quasi-norms, sn-functions, multiplier seminorms.
ideals
    Membership, inclusion, the factorization order and factorization witnesses.
topology_lab
    Separation, ordering, approximability and bounded-net experiments.
dixmier
    Dixmier-trace estimates on the measurable slice.
cli
    The ``opideal`` command.
"""

from .sequences import (
    ExplicitFamily,
    FamilySum,
    MonotoneSequence,
    PartialSums,
    PowerLogFamily,
    SequenceFormatError,
    materialize,
    partial_sums,
)
from .snorms import INF, InadmissibleIndexError, LorentzIndex, lorentz_norm, lorentz_quasinorm, schatten_norm
from .spectra import JacobiConvergenceError, characteristic_numbers
from .ideals import PreconditionError, factorize, includes, member, preceq
from .dixmier import dixmier_estimate

__version__ = "0.1.0"

__all__ = [
    "ExplicitFamily",
    "FamilySum",
    "INF",
    "InadmissibleIndexError",
    "JacobiConvergenceError",
    "LorentzIndex",
    "MonotoneSequence",
    "PartialSums",
    "PowerLogFamily",
    "PreconditionError",
    "SequenceFormatError",
    "characteristic_numbers",
    "dixmier_estimate",
    "factorize",
    "includes",
    "lorentz_norm",
    "lorentz_quasinorm",
    "materialize",
    "member",
    "partial_sums",
    "preceq",
    "schatten_norm",
]
