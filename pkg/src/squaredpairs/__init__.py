"""Exponential Diophantine equation p**x - q**y = n**2 over consecutive primes p > q."""

__version__ = "0.1.0"

from .arith import MagnitudeError, is_perfect_square, isqrt  # noqa: E402
from .certificate import (  # noqa: E402
    DescentProof,
    Inconclusive,
    ResidueCertificate,
    build_certificate,
    compose_certificates,
    prove_trivial_descent,
    search_modulus,
)
from .primes import PrimePair, consecutive_pairs, is_prime  # noqa: E402
from .quadring import QuadInt  # noqa: E402
from .search import Bounds, Solution, SolutionSet, Verdict, classify_pair, solve_pair  # noqa: E402

__all__ = [
    "Bounds",
    "DescentProof",
    "Inconclusive",
    "MagnitudeError",
    "PrimePair",
    "QuadInt",
    "ResidueCertificate",
    "Solution",
    "SolutionSet",
    "Verdict",
    "build_certificate",
    "classify_pair",
    "compose_certificates",
    "consecutive_pairs",
    "is_perfect_square",
    "is_prime",
    "isqrt",
    "prove_trivial_descent",
    "search_modulus",
    "solve_pair",
]
