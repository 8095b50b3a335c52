"""Certified spectral computations for group algebras and their completions.

Submodules:
    groups    -- computable group models, word metric, ball enumeration
    algebra   -- sparse CG arithmetic, norms, matrix algebras over CG
    spectra   -- certified l1/reduced-norm radius estimators and verdicts
    weights   -- subexponential weights and norm-control checks
    holocalc  -- regions, contours, matrix holomorphic functional calculus
    ktheory   -- eigenvalue-counting spectral K-invariants over C
    ranks     -- closed-form stable ranks and K-stabilization thresholds
    cli       -- command-line interface
"""

__version__ = "0.1.0"
