"""
wofzfourier - Faddeeva function by Fourier expansion

Double-precision w(z) from a truncated Fourier expansion of exp(-t^2), an
extended-precision reference oracle for verifying it, and Voigt line
profiles built on top.
"""

__version__ = "0.1.0"
