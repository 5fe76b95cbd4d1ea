"""Starlab: a desk-scale laboratory for irregularities of distribution.

Exact discrepancy norms for point sets, exact hyperbolic Haar sums, Riesz product certificates, and sign searches for the Small Ball inequality.

:Module: starlab
"""
__version__ = "0.1.0"
