"""piecel: L-functions, periods, and Deligne-quotient recognition for
motivic pieces of superelliptic curves y^m = f(x) with cyclic symmetry."""

__version__ = "0.1.0"
