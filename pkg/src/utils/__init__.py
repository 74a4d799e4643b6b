"""
Utilities package: text grammars and result rendering.
"""
