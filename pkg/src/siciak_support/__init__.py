"""Weighted homogeneous extremal functions in C^n and their uses.

Modules
-------
poly       homogeneous polynomials in the monomial basis
norms      closed-form cross norm of the Euclidean norm
simplex    dense revised simplex used by the extremal solver
extremal   LP evaluation of Psi_{E,gamma}, capacity, Baran's formula
entire     order, type and indicator of one-variable entire functions
extension  entire extension from Taylor data on complex lines
fields     synthetic radial test fields
radon      Radon transform, support intervals, Fourier-Laplace data
localize   convex support bounds from partial Radon data
cli        command-line driver
"""

__version__ = "0.1.0"
