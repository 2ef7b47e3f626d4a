"""Structured precondition failures shared by the verifier modules."""

from __future__ import annotations


class PreconditionError(ValueError):
    """A named precondition clause failed, with an optional witness."""

    def __init__(self, clause: str, witness=None):
        self.clause = clause
        self.witness = witness
        msg = f"precondition violated: {clause}"
        if witness is not None:
            msg += f" (witness: {witness})"
        super().__init__(msg)
