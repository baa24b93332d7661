"""
QGT Lab - Quantitative group testing experiments.

Score-based Subset Select, exact recovery over a field, and checks of the
analytic bounds behind the measurement threshold.
"""

__version__ = "0.1.0"
