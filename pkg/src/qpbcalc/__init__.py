"""Exact symbolic engine for quantum principal bundles.

Hopf-Galois extensions with complete differential calculi: translation-map
identities, graded Hopf structure, braidings, connections, curvature and
gauge actions, verified exactly on finite windows for the shipped instances
(noncommutative 2-torus, quantum Hopf fibration, a Hopf algebra over the
ground field, and a smash-product demo).
"""

from .scalars import Frac, Scalar
from .ncalg import (
    AlgebraPresentation,
    AlgElem,
    BadPresentationError,
    DomainError,
    GeneratorSpec,
    MismatchError,
    MonomialWindow,
)
from .linsolve import LinearSolution, NoSolutionError, in_span, nullspace, solve_linear
from .dga import (
    CalculusPresentation,
    FormElem,
    alg_form,
    cartan_maurer,
    cartan_maurer_equation_check,
    derive_d_forms,
    derive_d_gens,
    derive_wedge_rules,
    dga_axiom_check,
    differential,
    enumerate_forms,
    prolong_relations,
    wedge,
)
from .tensors import TensorElem, tensor_mul
from .rulemap import BasisRuleMap, RuleClosureError, apply
from .hopf import (
    ComoduleAlgebra,
    HopfGaloisInstance,
    HopfStructure,
    convolution,
    convolution_unit,
    u1_hopf,
)

__version__ = "0.1.0"
