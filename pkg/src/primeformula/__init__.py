"""Linear formula for integers free of the first r primes, with oracle checks."""

from .classification import ClaimAudit, ClassReport, bertrand_audit, classify_window, omega
from .enumeration import (
    ResidueSet,
    Window,
    canonical_residues,
    generate_window,
    prime_window,
    primes_by_formula,
)
from .errors import (
    InvalidArgument,
    InvalidBasis,
    InvalidHTuple,
    NotCoprimeError,
    ResourceLimitError,
)
from .integers import GeneralSolution, bezout_unit, ext_gcd, solve_linear
from .oracle import FactorMultiset, factorize, hr_scan, in_H, next_prime, sieve
from .wheel import (
    BezoutLadder,
    EliminationTrace,
    PrimeBasis,
    ResidueClass,
    WheelFormula,
    bezout_ladder,
    coefficients_congruent,
    evaluate,
    residue_signature,
    synthesize_crt,
    synthesize_elimination,
)

__version__ = "0.1.0"
