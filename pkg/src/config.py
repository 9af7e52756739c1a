"""系统配置管理模块

支持从环境变量和 .env 文件加载配置，包含随机测试与对照检查两组子配置。
"""

from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class OutputFormat(str, Enum):
    """命令行输出格式"""
    JSON = "json"
    TEXT = "text"


class FuzzSettings(BaseSettings):
    """随机实例测试配置"""
    count: int = Field(default=200, ge=0, description="生成的实例个数")
    seed: int = Field(default=42, description="随机种子")
    max_dim: int = Field(default=6, ge=0, description="每个轴的最大尺寸")
    max_blocks: int = Field(default=4, ge=1, description="每个轴的最大块数")
    payload_bound: int = Field(default=9, ge=0, description="块元素取值于 [-bound, bound]")

    model_config = SettingsConfigDict(env_prefix="FUZZ_")


class CheckSettings(BaseSettings):
    """对照检查配置"""
    tolerance: str = Field(default="0", description="浮点块元素的容差（有理数文本）")
    output_format: OutputFormat = Field(default=OutputFormat.JSON, description="默认输出格式")

    model_config = SettingsConfigDict(env_prefix="CHECK_")


class Settings(BaseSettings):
    """全局配置"""

    # 子配置
    fuzz: FuzzSettings = Field(default_factory=FuzzSettings)
    check: CheckSettings = Field(default_factory=CheckSettings)

    # 系统配置
    # 默认 WARNING：标准输出只留给结果，便于与 golden 文件逐字节比较
    log_level: str = Field(default="WARNING", description="日志级别")
    log_file: Optional[Path] = Field(default=None, description="DEBUG 日志文件（按天轮转）")

    # 数据目录
    data_dir: Path = Field(default=Path("data"), description="实例文件目录")

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_nested_delimiter="__",
        extra="ignore",
    )

    @property
    def instances_dir(self) -> Path:
        return self.data_dir / "instances"


# 全局配置单例
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """获取全局配置单例"""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reload_settings() -> Settings:
    """重新加载配置"""
    global _settings
    _settings = Settings()
    return _settings
