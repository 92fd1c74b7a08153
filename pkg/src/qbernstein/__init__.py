"""Exact free-probability combinatorics and a proof kernel for quantum
orthogonal transformations of free random vectors."""

__version__ = "0.1.0"

from .cumulants import (  # noqa: E402
    DistributionSpec,
    FreeFamilySpec,
    clt_scaled_spec,
    cumulants_from_moments,
    is_semicircular,
    joint_free_moment,
    moments_from_cumulants,
)
from .freealg import FreePolynomial, Generator, eval_matrix, monomial_reduce, parse_poly, poly_adjoint, poly_mul  # noqa: E402
from .kernel import Certificate, CertTerm, PosTerm, Session, preset_session  # noqa: E402
from .ncpart import NCPartition, SetPartition, enumerate_nc, is_noncrossing, kernel_partition, mobius_to_top, refines  # noqa: E402
from .presentations import Presentation, preset_presentation  # noqa: E402
