"""Partially homomorphic encryption toolkit with a key-blind ciphertext vault."""

__version__ = "0.1.0"
