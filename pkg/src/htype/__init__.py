"""Admissible Clifford modules, pseudo H-type Lie algebras and their automorphisms."""

from .clifford import CliffordElement, PinElement, Signature

__all__ = ["CliffordElement", "PinElement", "Signature"]
__version__ = "0.1.0"
