"""
Configuration management for DeepMap.
"""

from pathlib import Path
from typing import Any, Dict, Optional, Union

from dotenv import dotenv_values
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .errors import MissingInputError
from .types import FeatureKind, ModelConfig, TrainConfig


class Config(BaseSettings):
    """Main configuration class for DeepMap runs."""

    model_config = SettingsConfigDict(
        env_prefix="DEEPMAP_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging
    log_level: str = Field(default="INFO")
    log_format: str = Field(default="text")

    # Execution
    threads: int = Field(default=1)
    seed: int = Field(default=0)

    # Vertex feature maps
    kind: FeatureKind = Field(default=FeatureKind.WL_SUBTREE)
    wl_iterations: int = Field(default=2)  # h
    graphlet_size: int = Field(default=5)  # k
    graphlet_samples: int = Field(default=20)  # q

    # Alignment
    field_size: int = Field(default=5)  # r
    centrality_tol: float = Field(default=1e-6)
    centrality_max_iter: int = Field(default=1000)

    # Network
    conv_channels: str = Field(default="32,16,8")
    dense_units: int = Field(default=128)
    dropout_rate: float = Field(default=0.5)

    # Training
    learning_rate: float = Field(default=0.01)
    decay_factor: float = Field(default=0.5)
    patience: int = Field(default=5)
    batch_size: int = Field(default=32)
    epochs: int = Field(default=100)
    rmsprop_rho: float = Field(default=0.9)
    rmsprop_eps: float = Field(default=1e-8)

    # Kernel baseline classifier
    l2_strength: float = Field(default=1e-3)
    logreg_epochs: int = Field(default=500)
    logreg_lr: float = Field(default=0.5)

    # Evaluation
    folds: int = Field(default=10)

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Log level must be one of {valid_levels}")
        return v.upper()

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v: str) -> str:
        """Validate log format."""
        valid_formats = ["json", "text"]
        if v not in valid_formats:
            raise ValueError(f"Log format must be one of {valid_formats}")
        return v

    @field_validator("threads")
    @classmethod
    def validate_threads(cls, v: int) -> int:
        if v < 1 or v > 256:
            raise ValueError("Threads must be between 1 and 256")
        return v

    @field_validator("wl_iterations")
    @classmethod
    def validate_wl_iterations(cls, v: int) -> int:
        if v < 0:
            raise ValueError("WL iterations must be non-negative")
        return v

    @field_validator("graphlet_size")
    @classmethod
    def validate_graphlet_size(cls, v: int) -> int:
        if v not in (3, 4, 5):
            raise ValueError("Graphlet size must be one of [3, 4, 5]")
        return v

    @field_validator("graphlet_samples", "dense_units", "patience", "batch_size", "epochs", "logreg_epochs")
    @classmethod
    def validate_positive_count(cls, v: int) -> int:
        if v < 1:
            raise ValueError("Counts must be at least 1")
        return v

    @field_validator("field_size")
    @classmethod
    def validate_field_size(cls, v: int) -> int:
        if v < 1:
            raise ValueError("Field size must be at least 1")
        return v

    @field_validator("centrality_tol", "learning_rate", "rmsprop_eps", "logreg_lr")
    @classmethod
    def validate_positive_real(cls, v: float) -> float:
        if v <= 0:
            raise ValueError("Tolerances and learning rates must be positive")
        return v

    @field_validator("dropout_rate")
    @classmethod
    def validate_dropout(cls, v: float) -> float:
        if not 0 <= v < 1:
            raise ValueError("Dropout rate must be in [0, 1)")
        return v

    @field_validator("decay_factor", "rmsprop_rho")
    @classmethod
    def validate_fraction(cls, v: float) -> float:
        if not 0 < v < 1:
            raise ValueError("Decay factor and rho must be in (0, 1)")
        return v

    @field_validator("l2_strength")
    @classmethod
    def validate_l2(cls, v: float) -> float:
        if v < 0:
            raise ValueError("L2 strength must be non-negative")
        return v

    @field_validator("folds")
    @classmethod
    def validate_folds(cls, v: int) -> int:
        if v < 2:
            raise ValueError("Folds must be at least 2")
        return v

    @field_validator("conv_channels")
    @classmethod
    def validate_conv_channels(cls, v: str) -> str:
        parts = [p.strip() for p in v.split(",") if p.strip()]
        if len(parts) != 3 or not all(p.isdigit() and int(p) >= 1 for p in parts):
            raise ValueError("Conv channels must be three positive integers")
        return ",".join(parts)

    def feature_params(self) -> Dict[str, Any]:
        """Kind-specific parameters of the configured feature map."""
        if self.kind == FeatureKind.WL_SUBTREE:
            return {"h": self.wl_iterations}
        if self.kind == FeatureKind.GRAPHLET:
            return {"k": self.graphlet_size, "q": self.graphlet_samples, "seed": self.seed}
        return {}

    def train_config(self) -> TrainConfig:
        """Optimizer and schedule settings for the network."""
        return TrainConfig(
            learning_rate=self.learning_rate,
            decay_factor=self.decay_factor,
            patience=self.patience,
            batch_size=self.batch_size,
            max_epochs=self.epochs,
            rmsprop_rho=self.rmsprop_rho,
            rmsprop_eps=self.rmsprop_eps,
            seed=self.seed,
        )

    def model_config_for(self, input_dim: int, sequence_len: int, class_count: int) -> ModelConfig:
        """Network shape for a given feature dimension, sequence length and class count."""
        channels = tuple(int(c) for c in self.conv_channels.split(","))
        return ModelConfig(
            input_dim=input_dim,
            field_size=self.field_size,
            sequence_len=sequence_len,
            class_count=class_count,
            conv_channels=channels,
            dense_units=self.dense_units,
            dropout_rate=self.dropout_rate,
        )

    def to_env_lines(self) -> str:
        """Flat key=value rendering, readable back by load_config."""
        lines = []
        for name, value in self.model_dump().items():
            if isinstance(value, FeatureKind):
                value = value.value
            lines.append(f"{name}={value}")
        return "\n".join(lines) + "\n"


def load_config(config_file: Optional[Union[str, Path]] = None, overrides: Optional[Dict[str, Any]] = None) -> Config:
    """
    Build the effective configuration.

    Precedence: overrides (command-line flags) > config file > environment > defaults.

    Args:
        config_file: Optional flat key=value file
        overrides: Values from flags; None entries are ignored

    Returns:
        Validated configuration
    """
    values: Dict[str, Any] = {}
    if config_file is not None:
        path = Path(config_file)
        if not path.is_file():
            raise MissingInputError(str(path))
        values.update({k.lower(): v for k, v in dotenv_values(path).items() if v is not None})
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    return Config(**values)


def write_effective_config(config: Config, output_dir: Union[str, Path]) -> Path:
    """Write the effective config into an output directory for provenance."""
    path = Path(output_dir) / "config.env"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(config.to_env_lines(), encoding="utf-8")
    return path
