"""Sectionally pseudocomplemented lattices and posets on finite models."""
