"""
Visualization package for the SC-PAQ pipeline.
"""

from .charts import plot_curves, plot_rate_curves

__all__ = ["plot_curves", "plot_rate_curves"]
