"""Two delta-interacting atoms in a harmonic trap."""
__version__ = "0.1.0"
