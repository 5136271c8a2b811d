"""
witt-strata - Exact valuations, Newton polygons and prime-ideal strata

Gauss valuations on coefficient-valuation profiles, Newton polygons and
their Legendre transforms, the strata p_lambda, and the separating
elements f_a, all in exact rational arithmetic with certified intervals
where irrational quantities appear.
"""

__version__ = "1.0.0"
__author__ = "witt-strata Contributors"
