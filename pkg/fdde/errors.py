#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Exceptions raised by fdde.

Every exception also derives from the builtin a caller would naturally catch,
so `except ValueError` keeps working for domain problems.
"""

from typing import Optional


class FddeError(Exception):
    """Base class for all fdde errors."""


class DomainError(FddeError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class CapabilityError(FddeError, ArithmeticError):
    """A valid argument lies outside the supported numerical envelope."""


class UsageError(FddeError, TypeError):
    """An operation was called with the wrong variant of a problem or config."""


class ConfigError(FddeError, ValueError):
    """An experiment configuration failed validation."""


class SolverError(FddeError, RuntimeError):
    """A numerical solve failed at a given step."""

    step: Optional[int]
    t: Optional[float]

    def __init__(
        self, message: str, step: Optional[int] = None, t: Optional[float] = None
    ) -> None:
        self.step = step
        self.t = t
        if step is not None:
            message = f"step {step} (t={t}): {message}"
        super().__init__(message)
