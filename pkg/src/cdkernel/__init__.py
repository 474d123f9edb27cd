"""Jets, curvature and contractivity tests for powers of reproducing kernels."""

from .errors import (BranchError, CDKernelError, DomainError, ParseError, SingularityError,
                     StepError, SymmetryError, UnsupportedOrderError)
from .jetcurv import curvature, jet_gram, local_tuple, wallach_index
from .kernelzoo import DomainSpec, KernelSpec, parse_kernel

__all__ = ["BranchError", "CDKernelError", "DomainError", "ParseError", "SingularityError",
           "StepError", "SymmetryError", "UnsupportedOrderError", "curvature", "jet_gram",
           "local_tuple", "wallach_index", "DomainSpec", "KernelSpec", "parse_kernel"]
