"""Equivariant MLPs with tied weights: evaluation, gradients, training,
and the symmetrized construction with a regular hidden layer.

Free parameters live per orbit of each layer's sharing pattern; dense
matrices are materialized on the fly, and tied gradients accumulate the
dense gradient over each orbit's cells.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .actions import GroupAction, coset_space, kernel
from .errors import (
    EqvError,
    GroupMismatch,
    ShapeMismatch,
    TargetNotEquivariant,
    UnfaithfulInput,
)
from .groups import FiniteGroup
from .sharing import SharingPattern, make_pattern

NONLINEARITIES = {
    "identity": (lambda z: z, lambda z: np.ones_like(z)),
    "relu": (lambda z: np.maximum(z, 0.0), lambda z: (z > 0).astype(float)),
    "tanh": (np.tanh, lambda z: 1.0 - np.tanh(z) ** 2),
    "sigmoid": (
        lambda z: 1.0 / (1.0 + np.exp(-z)),
        lambda z: (s := 1.0 / (1.0 + np.exp(-z))) * (1.0 - s),
    ),
}


@dataclass(frozen=True)
class LayerSpec:
    action: GroupAction
    channels: int
    nonlinearity: str = "tanh"

    def __post_init__(self):
        if self.nonlinearity not in NONLINEARITIES:
            raise ValueError(f"unknown nonlinearity {self.nonlinearity!r}")


def _scatter_matrix(ids: np.ndarray, num: int) -> np.ndarray:
    flat = ids.ravel()
    s = np.zeros((flat.size, num))
    s[np.arange(flat.size), flat] = 1.0
    return s


class EquivariantMLP:
    """Stack of tied-weight affine layers; the nonlinearity of each hidden
    spec is applied after its layer, the final layer stays linear."""

    def __init__(
        self,
        specs: list[LayerSpec],
        patterns: list[SharingPattern],
        weights: list[np.ndarray],
        biases: list[np.ndarray],
    ):
        if len(specs) < 2 or len(patterns) != len(specs) - 1:
            raise ShapeMismatch("need one pattern between consecutive layer specs")
        group = specs[0].action.group
        for spec in specs[1:]:
            if spec.action.group != group:
                raise GroupMismatch("all layers must share one group")
        self.specs = list(specs)
        self.patterns = list(patterns)
        self.weights = [np.asarray(w, dtype=float) for w in weights]
        self.biases = [np.asarray(b, dtype=float) for b in biases]
        self._w_scatter = []
        self._b_scatter = []
        for l, pattern in enumerate(self.patterns):
            c_out, c_in = specs[l + 1].channels, specs[l].channels
            if self.weights[l].shape != (c_out, c_in, pattern.num_orbits):
                raise ShapeMismatch(
                    f"layer {l} weights must have shape "
                    f"{(c_out, c_in, pattern.num_orbits)}, "
                    f"got {self.weights[l].shape}"
                )
            if self.biases[l].shape != (c_out, pattern.num_bias_orbits):
                raise ShapeMismatch(
                    f"layer {l} biases must have shape "
                    f"{(c_out, pattern.num_bias_orbits)}, "
                    f"got {self.biases[l].shape}"
                )
            self._w_scatter.append(
                _scatter_matrix(pattern.orbit_of, pattern.num_orbits)
            )
            self._b_scatter.append(
                _scatter_matrix(pattern.bias_orbit_of, pattern.num_bias_orbits)
            )

    @property
    def group(self) -> FiniteGroup:
        return self.specs[0].action.group

    @property
    def num_layers(self) -> int:
        return len(self.patterns)

    @property
    def num_free_parameters(self) -> int:
        return sum(w.size for w in self.weights) + sum(b.size for b in self.biases)

    @classmethod
    def build(cls, specs: list[LayerSpec], seed: int = 0) -> "EquivariantMLP":
        """Derive patterns between consecutive layers and initialize free
        parameters uniformly on +-1/sqrt(dense fan-in)."""
        rng = np.random.default_rng(seed)
        patterns = [
            make_pattern(specs[l + 1].action, specs[l].action)
            for l in range(len(specs) - 1)
        ]
        weights, biases = [], []
        for l, pattern in enumerate(patterns):
            c_out, c_in = specs[l + 1].channels, specs[l].channels
            bound = 1.0 / np.sqrt(c_in * specs[l].action.point_count)
            weights.append(
                rng.uniform(-bound, bound, (c_out, c_in, pattern.num_orbits))
            )
            biases.append(
                rng.uniform(-bound, bound, (c_out, pattern.num_bias_orbits))
            )
        return cls(specs, patterns, weights, biases)

    def dense_layer(self, l: int) -> tuple[np.ndarray, np.ndarray]:
        """Dense (C_out, C_in, n_out, n_in) weights and (C_out, n_out) bias."""
        pattern = self.patterns[l]
        return (
            self.weights[l][:, :, pattern.orbit_of],
            self.biases[l][:, pattern.bias_orbit_of],
        )

    def _as_batch(self, x) -> tuple[np.ndarray, bool]:
        x = np.asarray(x, dtype=float)
        single = x.ndim == 2
        if single:
            x = x[None]
        expected = (self.specs[0].channels, self.specs[0].action.point_count)
        if x.ndim != 3 or x.shape[1:] != expected:
            raise ShapeMismatch(
                f"input must have shape (batch,) + {expected}, got {x.shape}"
            )
        return x, single

    def forward(self, x) -> np.ndarray:
        xb, single = self._as_batch(x)
        out = self._forward_cached(xb)[0][-1]
        return out[0] if single else out

    def _forward_cached(self, xb: np.ndarray):
        activations = [xb]
        preacts = []
        h = xb
        last = self.num_layers - 1
        for l in range(self.num_layers):
            w_dense, b_dense = self.dense_layer(l)
            z = np.einsum("abij,nbj->nai", w_dense, h) + b_dense
            preacts.append(z)
            h = z if l == last else NONLINEARITIES[self.specs[l + 1].nonlinearity][0](z)
            activations.append(h)
        return activations, preacts

    def loss_and_gradients(self, x, targets):
        """Mean-squared-error loss and gradients for every free parameter.

        Each tied parameter's gradient is the sum of the dense-matrix
        gradient over its orbit's cells.
        """
        xb, _ = self._as_batch(x)
        targets = np.asarray(targets, dtype=float)
        activations, preacts = self._forward_cached(xb)
        out = activations[-1]
        if targets.shape != out.shape:
            raise ShapeMismatch(
                f"targets shape {targets.shape} does not match output {out.shape}"
            )
        diff = out - targets
        loss = float(np.mean(diff**2))
        grad = 2.0 * diff / diff.size
        grad_w = [None] * self.num_layers
        grad_b = [None] * self.num_layers
        last = self.num_layers - 1
        for l in range(last, -1, -1):
            if l != last:
                dsigma = NONLINEARITIES[self.specs[l + 1].nonlinearity][1]
                grad = grad * dsigma(preacts[l])
            w_dense, _ = self.dense_layer(l)
            h_in = activations[l]
            dw_dense = np.einsum("nai,nbj->abij", grad, h_in)
            c_out, c_in = dw_dense.shape[:2]
            grad_w[l] = dw_dense.reshape(c_out, c_in, -1) @ self._w_scatter[l]
            grad_b[l] = grad.sum(axis=0) @ self._b_scatter[l]
            if l > 0:
                grad = np.einsum("abij,nai->nbj", w_dense, grad)
        return loss, grad_w, grad_b

    def to_checkpoint(self, group_ref: str = "") -> dict:
        layers = []
        for spec in self.specs:
            action = spec.action
            layers.append(
                {
                    "channels": spec.channels,
                    "nonlinearity": spec.nonlinearity,
                    "point_count": action.point_count,
                    "generator_images": [
                        list(img) for img in action.generator_images()
                    ],
                }
            )
        return {
            "group": group_ref,
            "layers": layers,
            "weights": [w.tolist() for w in self.weights],
            "biases": [b.tolist() for b in self.biases],
        }

    @classmethod
    def from_checkpoint(cls, group: FiniteGroup, data: dict) -> "EquivariantMLP":
        specs = [
            LayerSpec(
                GroupAction.from_generator_images(
                    group,
                    layer["point_count"],
                    [tuple(img) for img in layer["generator_images"]],
                ),
                layer["channels"],
                layer["nonlinearity"],
            )
            for layer in data["layers"]
        ]
        patterns = [
            make_pattern(specs[l + 1].action, specs[l].action)
            for l in range(len(specs) - 1)
        ]
        weights = [np.asarray(w, dtype=float) for w in data["weights"]]
        biases = [np.asarray(b, dtype=float) for b in data["biases"]]
        return cls(specs, patterns, weights, biases)


def gradients(net: EquivariantMLP, batch, targets):
    """Tied-weight gradients of the MSE loss; matches central differences."""
    _, grad_w, grad_b = net.loss_and_gradients(batch, targets)
    return grad_w, grad_b


def build_regular_net(
    group: FiniteGroup,
    in_action: GroupAction,
    out_action: GroupAction,
    channels: int,
    nonlinearity: str = "tanh",
    seed: int = 0,
) -> EquivariantMLP:
    """Two-layer net whose hidden layer carries the regular action, the
    sufficient layout for universal equivariant approximation."""
    if in_action.group != group or out_action.group != group:
        raise GroupMismatch("actions must belong to the given group")
    if kernel(in_action).order != 1:
        raise UnfaithfulInput("input action must be faithful")
    hidden = coset_space(group, group.trivial_subgroup())
    specs = [
        LayerSpec(in_action, 1, "identity"),
        LayerSpec(hidden, channels, nonlinearity),
        LayerSpec(out_action, 1, "identity"),
    ]
    return EquivariantMLP.build(specs, seed=seed)


def _free_values(pattern: SharingPattern, dense: np.ndarray) -> np.ndarray:
    """Free value per orbit from a dense matrix that must be exactly
    orbit-constant."""
    flat_ids = pattern.orbit_of.ravel()
    flat = dense.ravel()
    _, first = np.unique(flat_ids, return_index=True)
    values = flat[first]
    if not np.array_equal(values[pattern.orbit_of], dense):
        raise EqvError("matrix is not constant on the pattern's orbits")
    return values


def symmetrize(
    w_list,
    group: FiniteGroup,
    in_action: GroupAction,
    out_action: GroupAction,
    nonlinearity: str = "tanh",
) -> EquivariantMLP:
    """Group-average an unconstrained one-hidden-layer MLP into a tied-weight
    net with a regular hidden layer.

    ``w_list`` holds per-channel triples (w, w', b): input weights, output
    weights, scalar bias.  Hidden row r is w pulled back along group element
    r; output column r pushes w' forward along its inverse, with the 1/|G|
    averaging factor absorbed into the second layer.  The result's forward
    equals the direct group-averaged MLP.
    """
    if in_action.group != group or out_action.group != group:
        raise GroupMismatch("actions must belong to the given group")
    if kernel(in_action).order != 1:
        raise UnfaithfulInput("input action must be faithful")
    hidden = coset_space(group, group.trivial_subgroup())
    order = group.order
    n_in, n_out = in_action.point_count, out_action.point_count
    channels = len(w_list)
    specs = [
        LayerSpec(in_action, 1, "identity"),
        LayerSpec(hidden, channels, nonlinearity),
        LayerSpec(out_action, 1, "identity"),
    ]
    p1 = make_pattern(hidden, in_action)
    p2 = make_pattern(out_action, hidden)
    w1 = np.empty((channels, 1, p1.num_orbits))
    b1 = np.empty((channels, p1.num_bias_orbits))
    w2 = np.empty((1, channels, p2.num_orbits))
    b2 = np.zeros((1, p2.num_bias_orbits))
    for c, (w, w_prime, bias) in enumerate(w_list):
        w = np.asarray(w, dtype=float)
        w_prime = np.asarray(w_prime, dtype=float)
        if w.shape != (n_in,) or w_prime.shape != (n_out,):
            raise ShapeMismatch(
                f"channel {c}: need shapes ({n_in},) and ({n_out},), "
                f"got {w.shape} and {w_prime.shape}"
            )
        dense1 = np.empty((order, n_in))
        dense2 = np.empty((n_out, order))
        for r in range(order):
            dense1[r] = w[np.asarray(in_action.images[r])]
            dense2[:, r] = w_prime[np.asarray(out_action.images[r])] / order
        w1[c, 0] = _free_values(p1, dense1)
        b1[c] = float(bias)
        w2[0, c] = _free_values(p2, dense2)
    return EquivariantMLP(specs, [p1, p2], [w1, w2], [b1, b2])


@dataclass(frozen=True)
class TrainConfig:
    seed: int = 0
    lr: float = 0.05
    epochs: int = 1000
    batch_size: int = 512
    bounds: tuple[float, float] = (-1.0, 1.0)
    momentum: float = 0.0
    train_samples: int = 512
    holdout_size: int = 1024


@dataclass(frozen=True)
class TrainReport:
    final_mse: float
    final_train_mse: float
    loss_curve: list[float] = field(repr=False)


@dataclass(frozen=True)
class Target:
    name: str
    out_action: GroupAction
    fn: object  # (batch, n_in) array -> (batch, n_out) array


def _square_next(group: FiniteGroup, in_action: GroupAction) -> Target:
    n = in_action.point_count

    def fn(x):
        return x**2 + x[:, [(i + 1) % n for i in range(n)]]

    return Target("square_next", in_action, fn)


def _sum_sq(group: FiniteGroup, in_action: GroupAction) -> Target:
    def fn(x):
        return (x**2).sum(axis=1, keepdims=True)

    return Target("sum_sq", GroupAction.trivial(group, 1), fn)


def _frozen_net(group: FiniteGroup, in_action: GroupAction) -> Target:
    frozen = build_regular_net(group, in_action, in_action, channels=2, seed=1234)

    def fn(x):
        return frozen.forward(x[:, None, :])[:, 0, :]

    return Target("frozen_net", in_action, fn)


BUILTIN_TARGETS = {
    "square_next": _square_next,
    "sum_sq": _sum_sq,
    "frozen_net": _frozen_net,
}


def make_target(name: str, group: FiniteGroup, in_action: GroupAction) -> Target:
    if name not in BUILTIN_TARGETS:
        raise ValueError(
            f"unknown target {name!r}; available: {sorted(BUILTIN_TARGETS)}"
        )
    return BUILTIN_TARGETS[name](group, in_action)


def _coordinate_bounds(bounds, n: int) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(bounds, dtype=float)
    if arr.shape == (2,):
        return np.full(n, arr[0]), np.full(n, arr[1])
    if arr.shape == (n, 2):
        return arr[:, 0], arr[:, 1]
    raise ShapeMismatch(
        f"bounds must be (low, high) or {n} per-coordinate pairs"
    )


def _check_target_equivariant(
    target: Target, in_action: GroupAction, rng: np.random.Generator, tol: float = 1e-8
) -> None:
    group = in_action.group
    x = rng.uniform(-1.0, 1.0, (16, in_action.point_count))
    y = target.fn(x)
    for g in group.generator_indices:
        ginv = group.inv(g)
        gx = x[:, np.asarray(in_action.images[ginv])]
        lhs = target.fn(gx)
        rhs = y[:, np.asarray(target.out_action.images[ginv])]
        if np.abs(lhs - rhs).max() > tol:
            raise TargetNotEquivariant(
                f"target {target.name!r} fails commutation at generator {g}"
            )


def train(net: EquivariantMLP, target, cfg: TrainConfig) -> TrainReport:
    """Deterministic (momentum) SGD on a fixed training set from the box
    domain; one epoch is one pass in minibatches of ``batch_size``.

    Held-out MSE is computed on fresh samples drawn from a shifted seed.
    The target may be a Target or the name of a built-in one.
    """
    in_action = net.specs[0].action
    out_action = net.specs[-1].action
    if isinstance(target, str):
        target = make_target(target, net.group, in_action)
    if target.out_action.point_count != out_action.point_count:
        raise ShapeMismatch(
            f"target output size {target.out_action.point_count} does not "
            f"match net output size {out_action.point_count}"
        )
    if net.specs[0].channels != 1 or net.specs[-1].channels != 1:
        raise ShapeMismatch("built-in targets train single-channel nets")
    _check_target_equivariant(
        target, in_action, np.random.default_rng(cfg.seed + 999)
    )
    n_in = in_action.point_count
    low, high = _coordinate_bounds(cfg.bounds, n_in)
    rng = np.random.default_rng(cfg.seed)
    x_train = rng.uniform(low, high, (cfg.train_samples, n_in))
    y_train = target.fn(x_train)
    full_batch = cfg.batch_size >= cfg.train_samples
    vel_w = [np.zeros_like(w) for w in net.weights]
    vel_b = [np.zeros_like(b) for b in net.biases]
    curve = []
    for _ in range(cfg.epochs):
        if full_batch:
            starts = [(x_train, y_train)]
        else:
            order = rng.permutation(cfg.train_samples)
            starts = [
                (x_train[order[s:s + cfg.batch_size]],
                 y_train[order[s:s + cfg.batch_size]])
                for s in range(0, cfg.train_samples, cfg.batch_size)
            ]
        epoch_losses = []
        for x, y in starts:
            loss, grad_w, grad_b = net.loss_and_gradients(
                x[:, None, :], y[:, None, :]
            )
            for l in range(net.num_layers):
                vel_w[l] = cfg.momentum * vel_w[l] - cfg.lr * grad_w[l]
                vel_b[l] = cfg.momentum * vel_b[l] - cfg.lr * grad_b[l]
                net.weights[l] += vel_w[l]
                net.biases[l] += vel_b[l]
            epoch_losses.append(loss)
        curve.append(float(np.mean(epoch_losses)))
    rng_holdout = np.random.default_rng(cfg.seed + 1)
    xh = rng_holdout.uniform(low, high, (cfg.holdout_size, n_in))
    yh = target.fn(xh)
    pred = net.forward(xh[:, None, :])
    final_mse = float(np.mean((pred - yh[:, None, :]) ** 2))
    return TrainReport(
        final_mse=final_mse,
        final_train_mse=curve[-1] if curve else float("nan"),
        loss_curve=curve,
    )
