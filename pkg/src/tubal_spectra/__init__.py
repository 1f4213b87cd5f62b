"""Tubal tensor algebra: the tubal-scalar ring, T-product calculus,
T-eigendecomposition, PSD certification, TSVD, and brute-force oracles.

The package root stays import-light on purpose: the command-line entry
point must pin BLAS/FFT threading (``TUBAL_SPECTRA_THREADS``) before numpy
is first imported.  Import the submodules directly::

    from tubal_spectra import tubal, tensor3, transform, tproduct
    from tubal_spectra import spectral, tsvd, oracle
"""

__version__ = "0.1.0"

__all__ = ["tubal", "tensor3", "transform", "tproduct", "spectral", "tsvd",
           "oracle", "cli", "errors"]
