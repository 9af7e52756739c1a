"""符号块矩阵：描述、加法与乘法的无分情形构造、物化"""

from src.blockmat.addition import build_sum, build_vector_sum, refinement_regions, universe
from src.blockmat.evaluate import evaluate
from src.blockmat.multiplication import ProductBlockTerm, build_product, product_term
from src.blockmat.refinement import RefinementPiece, chain_refinement
from src.blockmat.spec import (
    BlockSpec,
    DenseMatrix,
    TablePayload,
    ValidationReport,
    dense_of,
    regions_of,
    validate_spec,
)

__all__ = [
    "BlockSpec",
    "DenseMatrix",
    "ProductBlockTerm",
    "RefinementPiece",
    "TablePayload",
    "ValidationReport",
    "build_product",
    "build_sum",
    "build_vector_sum",
    "chain_refinement",
    "dense_of",
    "evaluate",
    "product_term",
    "refinement_regions",
    "regions_of",
    "universe",
    "validate_spec",
]
