"""Exceptions shared across the package."""

from __future__ import annotations


class JchiError(Exception):
    """Base class for all package errors."""


class GraphValidationError(JchiError):
    """A graph violates a structural invariant; the message names it."""


class BudgetExceeded(JchiError):
    """An enumeration would exceed the configured resource budget."""


class DegeneratePolarization(JchiError):
    """A polarization attains equality in a stability inequality.

    ``witness`` is the offending vertex subset (a frozenset of vertex
    indices).
    """

    def __init__(self, message: str, witness: frozenset[int]):
        super().__init__(message)
        self.witness = witness
