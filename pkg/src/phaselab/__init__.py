"""Forward scattering and phaseless-data identities for 2D Helmholtz problems.

Subpackages and modules
-----------------------
specialfun
    Bessel/Hankel functions of orders 0 and 1.
geometry
    Obstacle curves, admissible measurement arcs, rough-surface profiles,
    layout validation.
solver
    CFIE Nystrom solver for sound-soft obstacles and a panel solver for
    sound-soft locally rough surfaces.
oracles
    Series solutions for disks and the flat half-plane.
phaseless
    Phaseless triples, cross terms, branch resolution and discrepancy.
cli
    Configuration-driven runner and verification suite.
"""

__version__ = "0.1.0"
