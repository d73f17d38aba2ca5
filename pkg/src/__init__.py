"""
carleman-lab - numerical verification of Carleman estimates and backward uniqueness for parabolic operators
"""

__version__ = "0.1.0"
