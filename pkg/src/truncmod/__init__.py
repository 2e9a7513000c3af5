"""truncmod: exact commutative algebra over Q[x..][t]/(t^n).

Polynomial arithmetic, Groebner and syzygy machinery, finitely presented
modules with their t-power filtrations, torsion and duals, regular
sequences, the embedded double point of a smooth surface, and graded
dimension counting.
"""

__version__ = "0.1.0"
