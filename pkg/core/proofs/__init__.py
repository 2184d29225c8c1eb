"""Proof terms, their checker, export formats and the LCF kernel."""

from .checker import CheckReport, check
from .formats import ProofDocument, read_proof_terms, write_proof_terms
from .lcf import LcfKernel, Thm
from .nodes import ProofFactory, ProofNode
from .resolution import ResolutionProof, export_resolution, read_resolution, replay, write_resolution

__all__ = [
    "CheckReport",
    "LcfKernel",
    "ProofDocument",
    "ProofFactory",
    "ProofNode",
    "ResolutionProof",
    "Thm",
    "check",
    "export_resolution",
    "read_proof_terms",
    "read_resolution",
    "replay",
    "write_proof_terms",
    "write_resolution",
]
