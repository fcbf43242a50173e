"""Two-community SBM / DCSBM samplers and closed-form population spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict, fields, replace

import numpy as np

from .graph import Graph, from_edges

DENSE_MAX_N = 1000


class InfeasibleConfig(ValueError):
    pass


@dataclass(frozen=True)
class SimConfig:
    """Generator parameters.

    ``theta_low`` is drawn with probability ``gamma`` and ``theta_high``
    otherwise. The first ``n1`` nodes form community +1.
    """

    n: int = 300
    n1: int = 150
    w: tuple[float, float] = (1.0, 1.0)
    r: float = 0.3
    lam: float = 15.0
    gamma: float = 0.0
    theta_low: float = 0.2
    theta_high: float = 1.0
    seed: int = 0
    # full P0 override (used by the extraction preset); None means [[w1, r], [r, w2]]
    p0: tuple[tuple[float, float], tuple[float, float]] | None = None

    def __post_init__(self):
        if not 0 <= self.n1 <= self.n:
            raise ValueError("need 0 <= n1 <= n")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must be in [0, 1]")
        if self.lam <= 0:
            raise ValueError("lambda must be positive")
        if self.r < 0:
            raise ValueError("r must be non-negative")

    @property
    def n2(self) -> int:
        return self.n - self.n1

    @property
    def base_matrix(self) -> np.ndarray:
        if self.p0 is not None:
            return np.array(self.p0, dtype=float)
        w1, w2 = self.w
        return np.array([[w1, self.r], [self.r, w2]], dtype=float)

    @property
    def theta_mean(self) -> float:
        return self.gamma * self.theta_low + (1 - self.gamma) * self.theta_high

    def with_(self, **kw) -> "SimConfig":
        return replace(self, **kw)


def extraction_preset(lam: float = 15.0, seed: int = 0) -> SimConfig:
    """A tight 60-node community inside a 240-node uniform background."""
    return SimConfig(n=300, n1=60, w=(0.4, 0.1), r=0.1, lam=lam, gamma=0.0, seed=seed,
                     p0=((0.4, 0.1), (0.1, 0.1)))


PRESETS = {"extraction": extraction_preset}


def edge_prob_matrix(cfg: SimConfig) -> np.ndarray:
    """Rescale P0 so the expected average degree is ``lam``."""
    P0 = cfg.base_matrix
    pi = np.array([cfg.n1, cfg.n2], dtype=float) / cfg.n
    P = cfg.lam * P0 / ((cfg.n - 1) * (pi @ P0 @ pi) * cfg.theta_mean ** 2)
    if np.any(P * max(cfg.theta_high, cfg.theta_low) ** 2 > 1):
        raise InfeasibleConfig(f"infeasible degree target: edge probability {P.max():.3f} exceeds 1")
    return P


def _pairs_within(k, size):
    """Decode flat indices into strict upper-triangle pairs of a size x size block."""
    # row i owns indices [i*size - i*(i+1)/2, ...) of length size-1-i
    k = np.asarray(k, dtype=np.int64)
    s = float(size)
    i = np.floor(((2 * s - 1) - np.sqrt((2 * s - 1) ** 2 - 8 * k)) / 2).astype(np.int64)
    row_start = i * size - i * (i + 1) // 2
    # guard against floating error at row boundaries
    over = k < row_start
    i[over] -= 1
    row_start = i * size - i * (i + 1) // 2
    nxt = (i + 1) * size - (i + 1) * (i + 2) // 2
    under = k >= nxt
    i[under] += 1
    row_start = i * size - i * (i + 1) // 2
    j = k - row_start + i + 1
    return i, j


def _sample_block(rng, idx_a, idx_b, p, same):
    """Bernoulli(p) edges between two node groups (or within one)."""
    na, nb = idx_a.size, idx_b.size
    total = na * (na - 1) // 2 if same else na * nb
    if total == 0 or p <= 0:
        return np.empty((0, 2), dtype=np.int64)
    k = rng.binomial(total, min(p, 1.0))
    flat = np.sort(rng.choice(total, size=k, replace=False))
    if same:
        i, j = _pairs_within(flat, na)
        return np.column_stack([idx_a[i], idx_a[j]])
    return np.column_stack([idx_a[flat // nb], idx_b[flat % nb]])


def sample_dcsbm(cfg: SimConfig, rng=None):
    """Draw (graph, true labels, theta). Deterministic in ``cfg.seed`` unless
    an explicit generator is passed."""
    P = edge_prob_matrix(cfg)
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    n, n1 = cfg.n, cfg.n1
    labels = np.where(np.arange(n) < n1, 1, -1).astype(np.int64)
    theta = np.where(rng.random(n) < cfg.gamma, cfg.theta_low, cfg.theta_high)
    # nodes sharing (community, theta) share every edge probability
    groups = []
    for comm, sl in ((0, slice(0, n1)), (1, slice(n1, n))):
        ids = np.arange(n)[sl]
        for tv in np.unique(theta[sl]):
            groups.append((comm, tv, ids[theta[sl] == tv]))
    parts = []
    for a in range(len(groups)):
        for b in range(a, len(groups)):
            ca, ta, ia = groups[a]
            cb, tb, ib = groups[b]
            parts.append(_sample_block(rng, ia, ib, ta * tb * P[ca, cb], a == b))
    edges = np.concatenate(parts) if parts else np.empty((0, 2), dtype=np.int64)
    return from_edges(n, edges), labels, theta


@dataclass
class PopulationSpectrum:
    """Nonzero eigenpairs of the block-constant expected adjacency.

    ``levels[i]`` holds the (community 1, community 2) entries of ``u_i``;
    ``ratios[i]`` is their quotient (inf when the second level is 0).
    """

    rho: np.ndarray
    vectors: np.ndarray
    levels: np.ndarray
    ratios: np.ndarray

    @property
    def rho1(self):
        return float(self.rho[0])

    @property
    def rho2(self):
        return float(self.rho[1])

    @property
    def u1(self):
        return self.vectors[0]

    @property
    def u2(self):
        return self.vectors[1]


def population_spectrum(pi1: float, pi2: float, r: float, omega: float, lam: float,
                        n: int) -> PopulationSpectrum:
    """Eigenpairs of the n x n matrix with blocks (lam/n) * [[1, r], [r, omega]].

    Community 1 occupies the first ``round(n * pi1)`` coordinates.
    """
    a = pi1 + pi2 * omega
    # (pi1 + pi2 omega)^2 - 4 pi1 pi2 (omega - r^2), written without cancellation
    disc = (pi1 - pi2 * omega) ** 2 + 4 * pi1 * pi2 * r * r
    if omega < 0 or r < 0 or not math.isclose(pi1 + pi2, 1.0):
        raise ValueError("invalid block parameters (negative discriminant or pi not summing to 1)")
    s = math.sqrt(disc)
    n1 = int(round(n * pi1))
    n2 = n - n1
    rho = np.array([lam / 2 * (a + s), lam / 2 * (a - s)])
    # Piecewise-constant eigenvectors reduce to the symmetric 2 x 2 problem
    # [[pi1, r sqrt(pi1 pi2)], [r sqrt(pi1 pi2), omega pi2]] on y = sqrt(pi) * levels.
    # For each eigenvalue take whichever of (c, mu - a), (mu - d, c) is longer;
    # this equals the closed-form level ratio but stays stable as r -> 0.
    a_, d_ = pi1, omega * pi2
    c_ = r * math.sqrt(pi1 * pi2)
    mu = rho[0] / lam
    y1 = max([np.array([c_, mu - a_]), np.array([mu - d_, c_])], key=np.linalg.norm)
    if np.linalg.norm(y1) < 1e-14 * max(1.0, abs(mu)):
        # repeated eigenvalue with no coupling: community indicators
        y1 = np.array([1.0, 0.0])
    # the second eigenvector of a symmetric 2 x 2 matrix is perpendicular
    ys = (y1, np.array([-y1[1], y1[0]]))
    levels = np.zeros((2, 2))
    for idx, y in enumerate(ys):
        lv = y / np.sqrt([pi1, pi2])
        norm = math.sqrt(n1 * lv[0] ** 2 + n2 * lv[1] ** 2)
        levels[idx] = lv / norm
    vectors = np.vstack([np.concatenate([np.full(n1, lv[0]), np.full(n2, lv[1])])
                         for lv in levels])
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ratios = levels[:, 0] / levels[:, 1]
    return PopulationSpectrum(rho, vectors, levels, ratios)


def block_expectation(pi1: float, r: float, omega: float, lam: float, n: int) -> np.ndarray:
    """Dense (lam/n) * [[1, r], [r, omega]] block matrix, diagonal included."""
    if n > DENSE_MAX_N:
        raise ValueError(f"dense construction refused for n > {DENSE_MAX_N}")
    n1 = int(round(n * pi1))
    c = np.arange(n) >= n1
    B = np.array([[1.0, r], [r, omega]]) * lam / n
    return B[np.ix_(c.astype(int), c.astype(int))]


def expected_adjacency(cfg: SimConfig) -> np.ndarray:
    """E[A] for a gamma = 0 config, with zero diagonal."""
    if cfg.n > DENSE_MAX_N:
        raise ValueError(f"dense construction refused for n > {DENSE_MAX_N}")
    if cfg.gamma != 0:
        raise ValueError("expected_adjacency needs gamma = 0")
    P = edge_prob_matrix(cfg)
    c = (np.arange(cfg.n) >= cfg.n1).astype(int)
    E = P[np.ix_(c, c)].copy()
    np.fill_diagonal(E, 0.0)
    return E


# --- flat key=value configuration files ---------------------------------

_ALIASES = {"lambda": "lam"}


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines (``#`` comments) into SimConfig kwargs.

    ``w`` takes two comma-separated numbers; ``r`` and ``lambda`` may hold a
    comma-separated grid, returned as a list.
    """
    out = {}
    valid = {f.name for f in fields(SimConfig)} | {"n2", "preset"}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = _ALIASES.get(key, key)
        if key not in valid:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        out[key] = val
    return coerce_config(out)


def coerce_config(raw: dict) -> dict:
    cfg = {}
    for key, val in raw.items():
        if val is None:
            continue
        if key == "preset":
            cfg[key] = str(val)
        elif key in ("n", "n1", "n2", "seed"):
            cfg[key] = int(val)
        elif key == "w":
            parts = [float(x) for x in str(val).split(",")] if isinstance(val, str) else list(val)
            if len(parts) != 2:
                raise ValueError("w needs two values")
            cfg[key] = tuple(parts)
        elif key in ("r", "lam"):
            if isinstance(val, str):
                vals = [float(x) for x in val.split(",") if x.strip()]
            elif isinstance(val, (list, tuple)):
                vals = [float(x) for x in val]
            else:
                vals = [float(val)]
            cfg[key] = vals if len(vals) > 1 else vals[0]
        else:
            cfg[key] = float(val)
    return cfg


def config_to_dict(cfg: SimConfig) -> dict:
    d = asdict(cfg)
    d["n2"] = cfg.n2
    return d
