"""LACV1 model checkpoints.

Little-endian layout:
    b"LACV1" | u8 group code | u32 header length | UTF-8 JSON architecture
    | u64 parameter count | float64 parameters in declaration order
"""
import json
import struct
from pathlib import Path

import numpy as np

from config.train_config import ArchitectureConfig
from gconv.model import LieConvModel, build_model
from interfaces.errors import ConsistencyError, FormatError, LengthError
from interfaces.lie_group import GroupId

MAGIC = b"LACV1"
GROUP_CODES = {GroupId.SO2: 0, GroupId.SE2: 1, GroupId.T2: 2}


def encode_checkpoint(model: LieConvModel) -> bytes:
    header = json.dumps(model.arch.model_dump(mode="json"), sort_keys=True).encode("utf-8")
    params = model.parameter_vector()
    return b"".join([
        MAGIC,
        struct.pack("<BI", GROUP_CODES[model.arch.group], len(header)),
        header,
        struct.pack("<Q", params.size),
        params.astype("<f8").tobytes(),
    ])


def decode_checkpoint(data: bytes) -> LieConvModel:
    if len(data) < len(MAGIC) or data[:len(MAGIC)] != MAGIC:
        raise FormatError("not an LACV1 checkpoint")
    offset = len(MAGIC)
    if len(data) < offset + 5:
        raise LengthError("checkpoint header is truncated")
    group_code, header_len = struct.unpack_from("<BI", data, offset)
    offset += 5
    if len(data) < offset + header_len + 8:
        raise LengthError("checkpoint architecture block is truncated")
    arch = ArchitectureConfig.model_validate_json(data[offset:offset + header_len].decode("utf-8"))
    offset += header_len
    if GROUP_CODES[arch.group] != group_code:
        raise ConsistencyError(f"group code {group_code} disagrees with header group {arch.group.value}")
    (count,) = struct.unpack_from("<Q", data, offset)
    offset += 8
    if len(data) < offset + 8 * count:
        raise LengthError(f"checkpoint declares {count} parameters but is truncated")
    params = np.frombuffer(data, dtype="<f8", count=count, offset=offset).astype(np.float64)

    model = build_model(arch)
    if count != model.parameter_count:
        raise ConsistencyError(f"checkpoint has {count} parameters, architecture needs {model.parameter_count}")
    model.load_parameter_vector(params)
    return model


def save_checkpoint(model: LieConvModel, path):
    Path(path).write_bytes(encode_checkpoint(model))


def load_checkpoint(path) -> LieConvModel:
    return decode_checkpoint(Path(path).read_bytes())
