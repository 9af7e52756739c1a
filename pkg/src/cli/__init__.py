"""命令行：实例文件、稠密对照、参数扫描与随机测试"""

from src.cli.app import ExitCode, app

__all__ = ["ExitCode", "app"]
