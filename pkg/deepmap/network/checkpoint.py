"""
Binary model checkpoints.

Layout, little-endian: magic b"DMAP", uint32 version, int64 input_dim,
field_size, sequence_len, class_count, conv channels (3), dense_units,
float64 dropout_rate, then every parameter tensor as float64 in
declaration order.
"""

import struct
from pathlib import Path
from typing import Union

import numpy as np

from ..errors import DatasetFormatError, MissingInputError
from ..types import ModelConfig
from .model import PARAM_NAMES, Model, parameter_shapes

PathLike = Union[str, Path]

MAGIC = b"DMAP"
VERSION = 1
HEADER = struct.Struct("<4sI8qd")
PARAM_DTYPE = np.dtype("<f8")


def save_checkpoint(path: PathLike, model: Model) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    config = model.config
    header = HEADER.pack(
        MAGIC,
        VERSION,
        config.input_dim,
        config.field_size,
        config.sequence_len,
        config.class_count,
        *config.conv_channels,
        config.dense_units,
        config.dropout_rate,
    )
    with open(path, "wb") as handle:
        handle.write(header)
        for name in PARAM_NAMES:
            handle.write(np.ascontiguousarray(model.params[name], dtype=PARAM_DTYPE).tobytes())
    return path


def load_checkpoint(path: PathLike, seed: int = 0) -> Model:
    """Read a checkpoint; seed initializes the dropout stream."""
    path = Path(path)
    if not path.is_file():
        raise MissingInputError(str(path))
    raw = path.read_bytes()
    if len(raw) < HEADER.size:
        raise DatasetFormatError("Checkpoint is truncated", str(path))
    magic, version, input_dim, field_size, sequence_len, class_count, c1, c2, c3, dense_units, dropout_rate = (
        HEADER.unpack_from(raw)
    )
    if magic != MAGIC:
        raise DatasetFormatError("Not a DeepMap checkpoint", str(path))
    if version != VERSION:
        raise DatasetFormatError(f"Unsupported checkpoint version {version}", str(path))
    config = ModelConfig(
        input_dim=input_dim,
        field_size=field_size,
        sequence_len=sequence_len,
        class_count=class_count,
        conv_channels=(c1, c2, c3),
        dense_units=dense_units,
        dropout_rate=dropout_rate,
    )

    shapes = parameter_shapes(config)
    expected = HEADER.size + sum(int(np.prod(s)) for s in shapes.values()) * PARAM_DTYPE.itemsize
    if len(raw) != expected:
        raise DatasetFormatError(f"Checkpoint has {len(raw)} bytes, expected {expected}", str(path))
    params = {}
    offset = HEADER.size
    for name in PARAM_NAMES:
        count = int(np.prod(shapes[name]))
        params[name] = np.frombuffer(raw, dtype=PARAM_DTYPE, count=count, offset=offset).astype(np.float64).reshape(shapes[name])
        offset += count * PARAM_DTYPE.itemsize
    return Model(config=config, params=params, rng=np.random.default_rng(seed))
