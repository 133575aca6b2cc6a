"""Utility modules for the three-qubit state toolkit."""
# This file makes 'utils' a Python package.
