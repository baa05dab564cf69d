"""Skeletal ribbon fusion categories: data model, validation, S-data, builtins, files."""

from .builtins import builtin_category, builtin_names, cyclic, fibonacci, ising, pointed, su2_level
from .data import (
    FusionData,
    SMatrixData,
    Violation,
    charge_conjugation,
    compute_smatrix,
    is_modular,
    validate_fusion_data,
    verlinde_consistency,
)
from .io import category_from_json, category_to_json, load_category, save_category
from .pointed import PointedData, abelian_cocycle

__all__ = [
    "FusionData", "PointedData", "SMatrixData", "Violation",
    "abelian_cocycle", "builtin_category", "builtin_names", "category_from_json", "category_to_json",
    "charge_conjugation", "compute_smatrix", "cyclic", "fibonacci", "ising", "is_modular",
    "load_category", "pointed", "save_category", "su2_level", "validate_fusion_data", "verlinde_consistency",
]
