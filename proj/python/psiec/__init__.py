"""Polar wavelets for differential forms on R^2 and R^3."""

from ._core import (
    Windows,
    atom_types,
    cavity_reference,
    circulation,
    exterior_derivative,
    ft_basis,
    random_field,
    roundtrip,
    sample_atom,
)

__all__ = [
    "Windows",
    "atom_types",
    "cavity_reference",
    "circulation",
    "exterior_derivative",
    "ft_basis",
    "random_field",
    "roundtrip",
    "sample_atom",
]
