"""Minimal dense neural-network kernels with exact analytic gradients."""
