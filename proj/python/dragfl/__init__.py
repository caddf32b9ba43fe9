# Copyright 2026 The dragfl Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for the dragfl federated-learning simulator."""

import json as _json

from . import _core
from ._core import (
    ConfigError,
    DimensionError,
    Error,
    byzantine_manipulate,
    closed_form_reference,
    cosine,
    degree_of_divergence,
    drag_manipulate,
    inner,
    norm,
    update_reference,
)

__all__ = [
    "ConfigError",
    "DimensionError",
    "Error",
    "byzantine_manipulate",
    "closed_form_reference",
    "cosine",
    "degree_of_divergence",
    "drag_manipulate",
    "inner",
    "metrics_csv",
    "normalize_config",
    "norm",
    "run_experiment",
    "update_reference",
]


def normalize_config(config):
    """Validate a config dict and return it with defaults filled in."""
    return _json.loads(_core.normalize_config(_json.dumps(config)))


def run_experiment(config, threads=1):
    """Run an experiment; returns one dict per completed round."""
    return _core.run_experiment(_json.dumps(config), threads)


def metrics_csv(config, threads=1):
    """Run an experiment and return its metrics CSV text."""
    return _core.metrics_csv(_json.dumps(config), threads)
