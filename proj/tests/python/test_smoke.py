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

import math

import pytest

import dragfl


def small_config(**overrides):
    cfg = {
        "M": 4,
        "S": 3,
        "U": 2,
        "B": 8,
        "T_max": 5,
        "model": {"kind": "logistic", "input_dim": 5, "num_classes": 3},
        "data": {"per_class": 20, "test_per_class": 10},
        "seed": 3,
    }
    cfg.update(overrides)
    return cfg


def test_vector_ops():
    assert dragfl.inner([1.0, 2.0], [3.0, 4.0]) == 11.0
    assert dragfl.norm([3.0, 4.0]) == 5.0
    assert dragfl.cosine([1.0, 0.0], [0.0, 2.0]) == 0.0
    with pytest.raises(dragfl.DimensionError):
        dragfl.inner([1.0], [1.0, 2.0])


def test_divergence_and_manipulation():
    s = dragfl.degree_of_divergence([1.0, 0.0], [0.0, 1.0], 0.5)
    assert s["lambda"] == pytest.approx(0.5)
    assert not s["degenerate"]

    v, degenerate = dragfl.drag_manipulate([1.0, 0.0], [0.0, 1.0], 0.5)
    assert v == pytest.approx([0.5, 0.5])
    assert not degenerate

    v, _ = dragfl.byzantine_manipulate([2.0, 0.0], [0.0, 1.0], 0.5)
    assert v == pytest.approx([0.5, 0.5])

    # A fully reversed update is flipped back onto the reference.
    r = [0.3, -1.2, 2.0]
    lam = dragfl.degree_of_divergence([-x for x in r], r, 0.5)["lambda"]
    v, _ = dragfl.byzantine_manipulate([-x for x in r], r, lam)
    assert v == pytest.approx(r, abs=1e-12)


def test_reference_recursion_matches_closed_form():
    g0 = [[1.0, 2.0], [3.0, 0.0]]
    deltas = [[0.5, -1.0], [2.0, 1.0], [-1.0, 0.25]]
    alpha = 0.6
    r = [(a + b) / 2 for a, b in zip(*g0)]
    for d in deltas:
        r = dragfl.update_reference(r, d, alpha)
    closed = dragfl.closed_form_reference(g0, deltas, alpha, len(deltas))
    assert r == pytest.approx(closed, rel=1e-12)


def test_normalize_config_fills_defaults():
    cfg = dragfl.normalize_config({"M": 5, "S": 2})
    assert cfg["M"] == 5
    assert cfg["aggregator"] == "drag"
    assert cfg["drag"]["c"] == 0.25
    with pytest.raises(dragfl.ConfigError):
        dragfl.normalize_config({"M": 2, "S": 3})
    with pytest.raises(dragfl.ConfigError):
        dragfl.normalize_config({"bogus": 1})


def test_run_experiment_records():
    records = dragfl.run_experiment(small_config())
    assert [r["round"] for r in records] == list(range(5))
    for r in records:
        assert 0.0 <= r["test_accuracy"] <= 1.0
        assert math.isfinite(r["train_loss"])
        assert 0.0 <= r["max_lambda"] <= 0.5
        assert len(r["participants"]) == 3

    fedavg = dragfl.run_experiment(small_config(aggregator="fedavg"))
    assert all(r["mean_lambda"] is None for r in fedavg)


def test_metrics_csv_is_deterministic():
    cfg = small_config(attack={"num_attackers": 1, "seed": 2},
                       aggregator="drag_byzantine", n_root=10)
    a = dragfl.metrics_csv(cfg)
    b = dragfl.metrics_csv(cfg, threads=3)
    assert a == b
    assert a.splitlines()[0] == (
        "round,train_loss,test_accuracy,grad_norm_sq,mean_lambda,max_lambda,num_attackers")
    assert len(a.splitlines()) == 6
