"""Unitarity and modularity census of quantum-group ribbon categories."""
