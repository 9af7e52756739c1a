"""把混合函数表达式物化为稠密矩阵"""

from loguru import logger

from src.algebra.hybridfn import HybridFunctionExpr, reduce_plus
from src.algebra.sizes import ParamEnv
from src.blockmat.spec import DenseMatrix


def evaluate(expr: HybridFunctionExpr, env: ParamEnv) -> DenseMatrix:
    """逐点 +-归约，得到绑定尺寸下的稠密矩阵

    Raises:
        ValueError: 表达式没有记录形状，或尺寸为负
        UndefinedTermForced / DivisionByZero: 由归约传播
    """
    if expr.shape is None or len(expr.shape) != 2:
        raise ValueError("只能物化带有二维形状的表达式")
    rows, cols = (s.evaluate(env) for s in expr.shape)
    if rows < 0 or cols < 0:
        raise ValueError(f"绑定后尺寸为负: {rows}x{cols}")

    matrix = DenseMatrix.zeros(rows, cols)
    for x in range(rows):
        for y in range(cols):
            matrix.entries[x, y] = reduce_plus(expr, env, (x, y))
    logger.debug(f"物化完成: {rows}x{cols}, {len(expr)} 层, env={env}")
    return matrix
