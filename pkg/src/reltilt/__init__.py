"""Relative cluster tilting: tau-tilting over End(T)^op and T[1]-cluster tilting in triangulated categories, computed exactly over F_p."""

__version__ = "0.1.0"
