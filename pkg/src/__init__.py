"""
Rotor map toolkit
This file makes src a Python package.
"""
