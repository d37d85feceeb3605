"""Exact intersection calculus and lct certificate checking for the secondary Burniat surface (K^2 = 5)"""

__version__ = "1.0.0"
