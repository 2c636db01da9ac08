"""Versioned model files shared by the ELM and kernel-ELM classifiers.

Models are stored as self-describing JSON.  Floating-point values are
emitted in Python's shortest round-trip decimal form (at most 17
significant digits), so a save/load cycle reproduces every coefficient
bit-exactly.  Files are written atomically (temp file + rename).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .data import NormStats
from .elm import Activation, ElmModel, HiddenLayer
from .errors import ConfigError, ParseError
from .kelm import KelmModel
from .kernels import KernelSpec
from .reporting import write_text_atomic

__all__ = ["FORMAT_VERSION", "save_model", "load_model"]

FORMAT_VERSION = 1


def _spec_to_dict(spec: KernelSpec) -> dict:
    return {
        "family": spec.family.value,
        "a": spec.a,
        "sigma": spec.sigma,
        "degree": spec.degree,
        "c_translate": spec.c_translate,
    }


def _spec_from_dict(d: dict) -> KernelSpec:
    return KernelSpec(
        family=d["family"],
        a=float(d["a"]),
        sigma=float(d["sigma"]),
        degree=int(d["degree"]),
        c_translate=float(d["c_translate"]),
    )


def save_model(model, path) -> None:
    """Serialize a KelmModel or ElmModel to a versioned JSON file."""
    if isinstance(model, KelmModel):
        doc = {
            "format_version": FORMAT_VERSION,
            "algo": "kelm",
            "kernel": _spec_to_dict(model.spec),
            "C": model.C,
            "D": int(model.x_train.shape[1]),
            "N": int(model.x_train.shape[0]),
            "M": int(model.coef.shape[1]),
            "label_map": list(model.label_map),
            "norm_stats": {
                "min": model.norm_stats.minimum.tolist(),
                "max": model.norm_stats.maximum.tolist(),
            },
            "x_train": model.x_train.tolist(),
            "coef": model.coef.tolist(),
            "solve_residual": model.solve_residual,
        }
    elif isinstance(model, ElmModel):
        doc = {
            "format_version": FORMAT_VERSION,
            "algo": "elm",
            "activation": model.layer.activation.value,
            "C": model.C,
            "D": int(model.layer.W.shape[0]),
            "L": int(model.layer.W.shape[1]),
            "M": int(model.beta.shape[1]),
            "label_map": list(model.label_map),
            "norm_stats": {
                "min": model.norm_stats.minimum.tolist(),
                "max": model.norm_stats.maximum.tolist(),
            },
            "W": model.layer.W.tolist(),
            "b": model.layer.b.tolist(),
            "beta": model.beta.tolist(),
            "train_residual": model.train_residual,
        }
    else:
        raise ConfigError(f"cannot serialize object of type {type(model).__name__}")
    write_text_atomic(path, json.dumps(doc) + "\n")


def load_model(path):
    """Load a model file; returns a KelmModel or ElmModel."""
    path = Path(path)
    if not path.exists():
        raise ParseError(f"no such model file: {path}")
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: not a valid model file ({exc})") from exc
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ParseError(f"{path}: unsupported format_version {version!r} (expected {FORMAT_VERSION})")

    stats = NormStats(
        minimum=np.asarray(doc["norm_stats"]["min"], dtype=float),
        maximum=np.asarray(doc["norm_stats"]["max"], dtype=float),
    )
    algo = doc.get("algo")
    if algo == "kelm":
        return KelmModel(
            x_train=np.asarray(doc["x_train"], dtype=float),
            coef=np.asarray(doc["coef"], dtype=float),
            spec=_spec_from_dict(doc["kernel"]),
            C=float(doc["C"]),
            label_map=[str(v) for v in doc["label_map"]],
            norm_stats=stats,
            solve_residual=float(doc.get("solve_residual", 0.0)),
        )
    if algo == "elm":
        layer = HiddenLayer(
            W=np.asarray(doc["W"], dtype=float),
            b=np.asarray(doc["b"], dtype=float),
            activation=Activation(doc["activation"]),
        )
        return ElmModel(
            layer=layer,
            beta=np.asarray(doc["beta"], dtype=float),
            C=float(doc["C"]),
            label_map=[str(v) for v in doc["label_map"]],
            norm_stats=stats,
            train_residual=float(doc.get("train_residual", 0.0)),
        )
    raise ParseError(f"{path}: unknown algo {algo!r}")
