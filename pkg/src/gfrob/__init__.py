"""Finite groupoids, their linear representations, and Frobenius morphisms over exact fields."""
from .exactlin import QQ, Field, Matrix, Subspace, kernel_basis, quotient_map, rref, solve_linear
from .errors import GfrobError, InvalidInput, NotApplicable
from .groupoid import FiniteGroupoid, build_groupoid, construct_example_groupoid, cyclic_group, symmetric_group
from .morphisms import GroupoidMorphism, build_morphism, kernel, quotient
from .representations import Representation, build_rep, restrict
from .functors import coinduce, induce
from .frobenius import frobenius_system, module_condition, orbit_criterion, verify_frobenius_system

__version__ = "0.1.0"

__all__ = [
    "QQ", "Field", "Matrix", "Subspace", "kernel_basis", "quotient_map", "rref", "solve_linear",
    "GfrobError", "InvalidInput", "NotApplicable",
    "FiniteGroupoid", "build_groupoid", "construct_example_groupoid", "cyclic_group", "symmetric_group",
    "GroupoidMorphism", "build_morphism", "kernel", "quotient",
    "Representation", "build_rep", "restrict",
    "coinduce", "induce",
    "frobenius_system", "module_condition", "orbit_criterion", "verify_frobenius_system",
]
