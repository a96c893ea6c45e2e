"""Independent reference implementations used as ground truth in tests."""

from .brute import AxiomFailure, BruteJacobian, PointArithmetic, brute_elements, brute_jacobian
from .crosscheck import ToyConstraint, jacobian_crosscheck, random_instance, sieve_crosscheck
from .enumerate import ModelSample, TooLarge, brute_A, monte_carlo_miss_rate
from .qcantor import RationalJacobian

__all__ = [
    "AxiomFailure",
    "BruteJacobian",
    "ModelSample",
    "PointArithmetic",
    "RationalJacobian",
    "TooLarge",
    "ToyConstraint",
    "brute_A",
    "brute_elements",
    "brute_jacobian",
    "jacobian_crosscheck",
    "monte_carlo_miss_rate",
    "random_instance",
    "sieve_crosscheck",
]
