"""Compiled kernels; see ``optiwalk.kernels`` for the selection logic."""
