"""Exact floor-plan counts of nodal curves and surfaces."""

__version__ = "0.1.0"
