"""Random combinatorial models from limit-object parameters and the
verification of their cumulant-method fluctuation theory at desk scale."""

__version__ = "0.1.0"
