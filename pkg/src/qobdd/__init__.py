"""Quantum OBDDs from linear characteristic polynomials over Z_m.

Modules: ``zmod_poly`` (polynomials and DNF conversion), ``good_sets``
(parameter sets for fingerprinting), ``qbp`` (program simulation),
``fingerprint`` (program synthesis and closed forms), ``zoo`` (example
functions), ``projections``, ``bounds`` (width lower bounds) and ``cli``.
"""

__version__ = "0.1.0"
