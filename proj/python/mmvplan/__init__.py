"""Vaccination campaign planning on top of the native _mmvplan module."""

from _mmvplan import (
    InputError,
    ModelError,
    generate,
    priority_weight,
    solve,
    sweep,
    temp_share_lower_bound,
    validate,
)

__all__ = [
    "InputError",
    "ModelError",
    "generate",
    "priority_weight",
    "solve",
    "sweep",
    "temp_share_lower_bound",
    "validate",
]
