"""Finite sites: pretopologies on finite categories, internal groupoids
and bundles, and the modified sheaf condition, all as decision procedures.
"""

__version__ = "0.1.0"
