"""Numerical services: quadrature, kernels, identities, transforms and profiles."""
