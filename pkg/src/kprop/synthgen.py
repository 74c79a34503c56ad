"""Synthetic datasets shaped like intermingled sparse chains.

Every class lives in the same ball of radius ``dispersion``, so classes
overlap in extent; within a class, points form chain-shaped random walks
whose step length controls how tight the chains are. Each walk carries a
drift direction, so at small steps a chain is a nearly straight stroke
through the ball: consecutive points are each other's nearest neighbors and
a handful of them pin down the stroke's direction, even though the class as
a whole spans the same region as every other class. Large steps bounce off
the ball boundary every move and degrade the walk into scatter, driving
nearest-neighbor purity down toward chance. The boundary fold (radial
reflection) is what keeps the step length meaningful relative to the shared
extent instead of letting long walks drift away from the populated region.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .geometry import estimate_pnn

#: Fraction of each step spent on the chain's fixed drift direction; the
#: remainder is isotropic Gaussian wander. High enough that short chains are
#: recognizably stroke-shaped, low enough that they are not exact lines.
_DRIFT_FRACTION = 0.9


@dataclass(frozen=True)
class SynthConfig:
    classes: int
    points_per_class: int
    dim: int
    step: float  # expected Euclidean length of one walk step
    dispersion: float  # radius of the shared ball all classes occupy
    chains_per_class: int = 4
    seed: int = 0

    def __post_init__(self):
        if self.classes < 1 or self.points_per_class < 1 or self.chains_per_class < 1:
            raise ConfigError("classes, points_per_class and chains_per_class must be >= 1")
        if self.dim < 2:
            raise ConfigError(f"dim must be >= 2, got {self.dim}")
        if not (self.step > 0 and np.isfinite(self.step)):
            raise ConfigError(f"step must be positive and finite, got {self.step}")
        if not (self.dispersion > 0 and np.isfinite(self.dispersion)):
            raise ConfigError(f"dispersion must be positive and finite, got {self.dispersion}")
        if self.chains_per_class > self.points_per_class:
            raise ConfigError("cannot have more chains than points per class")


@dataclass(frozen=True)
class SynthDataset:
    features: np.ndarray
    labels: np.ndarray
    achieved_pnn: float


def _uniform_in_ball(rng, radius: float, dim: int) -> np.ndarray:
    direction = rng.standard_normal(dim)
    norm = np.linalg.norm(direction)
    while norm == 0.0:  # essentially impossible, but keep the draw valid
        direction = rng.standard_normal(dim)
        norm = np.linalg.norm(direction)
    return direction / norm * radius * rng.random() ** (1.0 / dim)


#: Base weight of the isotropic part when drawing a drift direction; the
#: rest points at the ball center. Inward-biased drifts make slow chains
#: cross the populated region in long strokes instead of skimming the
#: boundary where most of a high-dimensional ball's volume sits.
_DRIFT_SPREAD = 0.35


def _inward_drift(rng, step: float, beta: float, pos: np.ndarray, radius: float) -> np.ndarray:
    """Drift for the next stroke: inward when slow, isotropic when fast.

    The isotropic weight grows with (step/radius)^2 so that walks whose
    steps rival the ball size scatter chaotically rather than locking onto
    a back-and-forth axis through the center.
    """
    spread = _DRIFT_SPREAD * (1.0 + (2.0 * step / radius) ** 2)
    g = rng.standard_normal(pos.shape[0])
    g /= np.linalg.norm(g)
    rho = np.linalg.norm(pos)
    if rho < 1e-9 * radius:
        direction = g
    else:
        direction = -pos / rho + spread * g
        direction /= np.linalg.norm(direction)
    return direction * (step * beta)


def _fold_into_ball(point: np.ndarray, radius: float) -> np.ndarray:
    """Reflect a point back into the ball by folding its radial coordinate."""
    rho = float(np.linalg.norm(point))
    if rho <= radius or rho == 0.0:
        return point
    m = rho % (2.0 * radius)
    if m > radius:
        m = 2.0 * radius - m
    return point * (m / rho)


def _chain_lengths(total: int, chains: int) -> list:
    base, extra = divmod(total, chains)
    return [base + (1 if i < extra else 0) for i in range(chains)]


def generate_sparse_graph_dataset(cfg: SynthConfig) -> SynthDataset:
    """Generate the chain-graph dataset and measure its achieved purity.

    Each class gets ``chains_per_class`` anchors uniform in the shared ball;
    a chain is a folded Gaussian random walk from its anchor with expected
    step length ``cfg.step`` and a fixed per-chain drift direction. The
    returned ``achieved_pnn`` is always measured on the generated points
    (one pass over all classes), never inferred from the parameters.
    """
    beta = _DRIFT_FRACTION
    wander = cfg.step * np.sqrt((1.0 - beta * beta) / cfg.dim)  # per-coordinate
    rows = []
    labels = []
    for c in range(cfg.classes):
        rng = np.random.default_rng((cfg.seed, c))
        for length in _chain_lengths(cfg.points_per_class, cfg.chains_per_class):
            if length == 0:
                continue
            pos = _uniform_in_ball(rng, cfg.dispersion, cfg.dim)
            drift = _inward_drift(rng, cfg.step, beta, pos, cfg.dispersion)
            rows.append(pos)
            for _ in range(length - 1):
                moved = pos + drift + rng.normal(0.0, wander, size=cfg.dim)
                if np.linalg.norm(moved) > cfg.dispersion:
                    # boundary hit: fold back in and start a new stroke
                    moved = _fold_into_ball(moved, cfg.dispersion)
                    drift = _inward_drift(rng, cfg.step, beta, moved, cfg.dispersion)
                pos = moved
                rows.append(pos)
        labels.extend([c] * cfg.points_per_class)

    features = np.vstack(rows)
    labels = np.asarray(labels, dtype=np.int64)
    if features.shape[0] >= 2:
        pnn = estimate_pnn(
            features, labels, classes_per_trial=cfg.classes, trials=1, seed=cfg.seed
        ).mean
    else:
        pnn = 1.0  # a lone point has no neighbor to disagree with
    return SynthDataset(features=features, labels=labels, achieved_pnn=pnn)
