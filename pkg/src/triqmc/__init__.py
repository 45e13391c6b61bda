"""Quasi-Monte Carlo integration over triangles with digital sequences over F2.

Points come from a digital sequence whose elements are addresses in a
recursive 4-way partition of the triangle.  The package also measures the
quality of the underlying nets and checks the Walsh coefficient decay that
controls the integration error.
"""

from .bitcore import BitMatrix, IndexMatrix, dyadic_expansion, matvec, xor_row
from .digital import (
    GeneratorPair,
    NetSpec,
    basu_owen_pair,
    generator_from_option,
    net_addresses,
    pascal_pair,
    sequence_element,
    triangle_points,
    user_pair,
)
from .errors import CapacityError, DomainError, PrecisionError, ToleranceNotMet
from .harness import (
    BUILTINS,
    ConvergenceRow,
    Polynomial,
    TestFunction,
    builtin,
    convergence_study,
    fit_rate,
    qmc_integrate,
)
from .partition import UNIT_TRIANGLE, Triangle, phi_point, point_xor_row, subregion, subtriangle
from .quadrature import monomial_integral, oracle_integrate
from .quality import dual_net, min_weights, quality_table
from .walsh import discretize, verify_decay_bound, walsh_coefficient, walsh_transform

__version__ = "0.1.0"

__all__ = [
    "BitMatrix",
    "IndexMatrix",
    "dyadic_expansion",
    "matvec",
    "xor_row",
    "GeneratorPair",
    "NetSpec",
    "basu_owen_pair",
    "pascal_pair",
    "user_pair",
    "generator_from_option",
    "sequence_element",
    "net_addresses",
    "triangle_points",
    "CapacityError",
    "DomainError",
    "PrecisionError",
    "ToleranceNotMet",
    "BUILTINS",
    "ConvergenceRow",
    "Polynomial",
    "TestFunction",
    "builtin",
    "convergence_study",
    "fit_rate",
    "qmc_integrate",
    "UNIT_TRIANGLE",
    "Triangle",
    "phi_point",
    "point_xor_row",
    "subregion",
    "subtriangle",
    "monomial_integral",
    "oracle_integrate",
    "dual_net",
    "min_weights",
    "quality_table",
    "discretize",
    "verify_decay_bound",
    "walsh_coefficient",
    "walsh_transform",
]
