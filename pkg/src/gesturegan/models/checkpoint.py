"""Versioned checkpoint archives for both model families.

A checkpoint is a zip holding meta.json (format version, family tag,
config, config hash, training marker, class label) and params.npz (every
network parameter as a named float64 array). Loading rebuilds the model
from the stored config, verifies the version tag and the config hash,
and restores parameters exactly.
"""

import dataclasses
import hashlib
import io
import json
import zipfile
from pathlib import Path

import numpy as np
import torch

from ..errors import CheckpointError
from . import doppelganger, timegan

FORMAT_VERSION = 1


def config_hash(cfg) -> str:
    payload = json.dumps(dataclasses.asdict(cfg), sort_keys=True, default=list)
    return hashlib.sha256(payload.encode()).hexdigest()


def _family_of(model) -> str:
    if isinstance(model, timegan.TimeganModel):
        return "timegan"
    if isinstance(model, doppelganger.DganModel):
        return "dgan"
    raise TypeError(f"not a known model type: {type(model).__name__}")


def _marker(model) -> str:
    if isinstance(model, timegan.TimeganModel):
        return model.phase
    return "trained" if model.trained else "untrained"


def save_checkpoint(model, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    family = _family_of(model)

    arrays = {}
    for net_name, net in model.networks().items():
        for p_name, tensor in net.state_dict().items():
            arrays[f"{net_name}/{p_name}"] = tensor.detach().double().numpy()

    meta = {
        "format_version": FORMAT_VERSION,
        "family": family,
        "config": dataclasses.asdict(model.config),
        "config_hash": config_hash(model.config),
        "marker": _marker(model),
        "class_label": model.class_label,
    }

    buf = io.BytesIO()
    np.savez(buf, **arrays)
    with zipfile.ZipFile(path, "w", compression=zipfile.ZIP_DEFLATED) as zf:
        zf.writestr("meta.json", json.dumps(meta, indent=2, sort_keys=True))
        zf.writestr("params.npz", buf.getvalue())
    return path


def _rebuild(meta: dict):
    cfg_dict = dict(meta["config"])
    if meta["family"] == "timegan":
        cfg = timegan.TimeganConfig(**cfg_dict)
        return cfg, timegan.build(cfg)
    if meta["family"] == "dgan":
        cfg_dict["betas"] = tuple(cfg_dict["betas"])
        cfg_dict["attribute_cols"] = tuple(cfg_dict["attribute_cols"])
        cfg = doppelganger.DganConfig(**cfg_dict)
        return cfg, doppelganger.build(cfg)
    raise CheckpointError(f"unknown model family {meta['family']!r}")


def load_checkpoint(path: str | Path):
    path = Path(path)
    if not path.exists():
        raise CheckpointError(f"no checkpoint at {path}")
    try:
        with zipfile.ZipFile(path) as zf:
            meta = json.loads(zf.read("meta.json"))
            npz = np.load(io.BytesIO(zf.read("params.npz")))
            arrays = {k: npz[k] for k in npz.files}
    except (zipfile.BadZipFile, KeyError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"{path} is not a readable checkpoint: {exc}") from exc

    version = meta.get("format_version")
    if version != FORMAT_VERSION:
        raise CheckpointError(
            f"{path}: format version {version!r} not supported (expected {FORMAT_VERSION})"
        )
    cfg, model = _rebuild(meta)
    if config_hash(cfg) != meta["config_hash"]:
        raise CheckpointError(f"{path}: config hash mismatch; file may be corrupted")

    for net_name, net in model.networks().items():
        state = net.state_dict()
        for p_name in state:
            key = f"{net_name}/{p_name}"
            if key not in arrays:
                raise CheckpointError(f"{path}: missing parameter {key}")
            saved = arrays[key]
            if tuple(saved.shape) != tuple(state[p_name].shape):
                raise CheckpointError(
                    f"{path}: parameter {key} has shape {saved.shape}, "
                    f"expected {tuple(state[p_name].shape)}"
                )
            state[p_name] = torch.from_numpy(saved).to(state[p_name].dtype)
        net.load_state_dict(state)

    marker = meta["marker"]
    if isinstance(model, timegan.TimeganModel):
        if marker not in timegan.PHASES:
            raise CheckpointError(f"{path}: unknown phase marker {marker!r}")
        model.phase = marker
    else:
        model.trained = marker == "trained"
    model.class_label = meta["class_label"]
    return model
