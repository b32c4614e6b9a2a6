"""Counting functions, aberrations, and Hilbert bases of orthogonal-array cones.

A fraction of a full factorial design is a multiset of its points.  This
package computes the complex coefficients of a fraction's counting function,
its aberrations and generalized word-length pattern, builds the integer cone
whose lattice points are the orthogonal arrays of a given strength, computes
that cone's Hilbert basis, and enumerates/classifies all OAs of a given run
size as unions of basis elements.
"""

from .design import DesignSpace, parse_design
from .counting import (
    CountingVector,
    CoefficientTable,
    MarginalTable,
    coefficients_from_counts,
    counts_from_coefficients,
    marginal_counts,
    strength,
    is_oa,
    is_oa_by_marginals,
)
from .aberration import (
    Gwlp,
    AberrationTable,
    GmaOrder,
    aberration_table,
    aberration_via_outer_product,
    gwlp,
    gwlp_from_coefficients,
    gma_compare,
    total_aberration,
    last_term_formula,
    last_term_lower_bound,
    aggregated_lower_bound,
)
from .union import (
    FractionSummary,
    summarize,
    union_counts,
    union_gwlp,
    cross_covariance,
    replicate,
)
from .cone import ConstraintMatrix, constraint_matrix, is_member, write_matrix
from .hilbert import (
    HilbertBasis,
    hilbert_basis,
    verify_minimality,
    decompose,
    read_basis,
    write_basis,
)
from .catalog import OaCatalog, ClassificationReport, enumerate_size, classify, gma_best
from .errors import (
    OaconeError,
    DesignMismatchError,
    EmptyFractionError,
    NotACountingFunctionError,
    StrengthPreconditionError,
    NotAMemberError,
    FileFormatError,
    BudgetExceededError,
)

__version__ = "0.1.0"
