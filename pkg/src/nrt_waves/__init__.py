"""Exact solutions of the nonlinear Schrodinger system with q-deformed nonlinearity.

Subpackages and modules
-----------------------
specialfn
    Hypergeometric, incomplete gamma, error, Bessel and Weierstrass kernels.
gtf
    Generalized trigonometric functions ``sin_pq``, ``cos_pq``, ``tan_pq``.
solutions
    Reduced solution families and their registry.
density
    Probability density ``Re(Psi Phi) / N`` and figure presets.
verify
    Finite-difference residual engine.
cli
    ``nrt-waves`` command line.
"""

__version__ = "0.1.0"
