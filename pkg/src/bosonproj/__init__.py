"""Numerical checks for a spin-1 boson bound in a Coulomb field: the spinor
coordinate chain, oscillator/Coulomb duality, closed-form spectra and the
fifteen-generator algebra on truncated Fock space."""

__version__ = "0.1.0"
