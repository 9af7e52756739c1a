"""hybridblock: 基于混合集的符号块矩阵无分情形运算"""

__version__ = "0.1.0"
