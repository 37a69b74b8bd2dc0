"""GL-equivariant commutative algebra over fields of characteristic p.

Modules:
    combinatorics  p-adic digits, Lucas binomials, partitions and p-magnitudes
    glideals       GL-stable monomial ideals via digit vectors
    evaluation     module families and their evaluations at k^n
    homology       Tor engines, Betti tables, flatness, line covers
    schur          Hasse-Schur slices, the shift functor, Delta / K / Gamma
    dist           divided-power operators and GL_n-submodule closures
    harness        corpora, oracles, golden records and verification suites
    cli            command-line front end
"""

from .combinatorics import PrimeContext, lucas_binom, pmag, p_restricted_decomposition
from .glideals import (
    DigitVector,
    DomainError,
    GLIdeal,
    ParseError,
    SearchExhausted,
    gl_radical,
    ideal_contains,
    ideal_member,
    is_gl_prime,
    non_primality_witness,
    parse_ideal,
)
from .evaluation import CutoffError, free_family, ideal_family, quotient_family, residue_field, ring_family
from .homology import BettiTable, InvariantViolation, detect_lines, koszul_tor, minimal_resolution, periodic_tor
from .schur import delta, gamma, hasse_schur, kq, shift_until_flat, sm_shift
from .descriptors import parse_family

__version__ = "0.1.0"
