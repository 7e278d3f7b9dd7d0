"""Weighted composition operators uC_phi on the Bloch and Dirichlet spaces."""
