#!/usr/bin/env python
# encoding: utf-8
"""
Exception types raised by radpressure. Each derives from a builtin so callers that only know
about ValueError, ArithmeticError or RuntimeError still catch them.
"""


class DomainError(ValueError):
    pass


class ContractViolationError(ValueError):
    pass


class DimensionGuardError(ValueError):
    pass


class ConfigError(ValueError):
    pass


class AccuracyError(ArithmeticError):
    pass


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, diagnostics: dict = None):
        super().__init__(message)
        self.diagnostics = diagnostics if diagnostics is not None else {}


class AmbiguousBranchError(RuntimeError):
    def __init__(self, message: str, candidates: list = None):
        super().__init__(message)
        self.candidates = candidates if candidates is not None else []


class AuditFailure(AssertionError):
    pass
