"""Residues of quaternion symbols over rational function fields and a replayable
unramified-class certificate for a quadric surface bundle over the plane."""

__version__ = "0.1.0"
