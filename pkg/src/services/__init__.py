"""
Services package: Laurent arithmetic, quiver representations, Hall algebra,
canonical basis and intersection cohomology.
"""
