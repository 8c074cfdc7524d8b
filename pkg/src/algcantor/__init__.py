"""Certified finite-depth constructions around algebraically independent Cantor sets."""
