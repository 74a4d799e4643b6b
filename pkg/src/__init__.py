"""
VoCIC - local intersection cohomology of the components of varieties of complexes.
"""

__version__ = "0.1.0"
