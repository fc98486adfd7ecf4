"""Three-parameter socialism-to-capitalism transition model.

Normalized per-capita GDP is the sum of a decaying socialist portion and a
capitalist portion that fills up at rate ``alpha_c`` while growing
internally at rate ``alpha``::

    ms(t) = ms0 * exp(-alpha_s * t)
    mc(t) = (1 - mc0) * (1 - exp(-alpha_c * t)) * exp(alpha * t)
    M(t)  = ms(t) + mc(t)

Population shares use the same exponentials without the internal-growth
factor; whatever is in neither system forms the third reservoir.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import IO, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError, ValidationError


@dataclass(frozen=True)
class TransitionParams:
    alpha_s: float  # socialist decay rate, 1/yr
    alpha_c: float  # capitalist build-up rate, 1/yr
    alpha: float  # internal capitalist growth, 1/yr
    start_year: int = 0
    ms0: float = 1.0
    mc0: float = 0.0

    def __post_init__(self):
        if not (self.alpha_c > 0 and self.alpha_s >= self.alpha_c):
            raise DomainError(
                f"need alpha_s >= alpha_c > 0, got alpha_s={self.alpha_s}, alpha_c={self.alpha_c}"
            )
        if not math.isfinite(self.alpha):
            raise DomainError("alpha must be finite")
        if not (0 <= self.ms0 <= 1 and 0 <= self.mc0 <= 1 and self.ms0 + self.mc0 <= 1):
            raise DomainError(f"initial shares ms0={self.ms0}, mc0={self.mc0} must lie in [0,1] and sum to <= 1")

    @property
    def ratio(self) -> float:
        return self.alpha_s / self.alpha_c

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, record: dict) -> "TransitionParams":
        return cls(
            alpha_s=float(record["alpha_s"]),
            alpha_c=float(record["alpha_c"]),
            alpha=float(record["alpha"]),
            start_year=int(record.get("start_year", 0)),
            ms0=float(record.get("ms0", 1.0)),
            mc0=float(record.get("mc0", 0.0)),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "TransitionParams":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class ReservoirShares:
    socialist: float
    capitalist: float
    neither: float


@dataclass(frozen=True)
class MicroRates:
    """Annual per-person probabilities of leaving S (``p``) and entering C (``q``).

    ``p`` and ``q`` are independent; their sum is unconstrained.
    """

    p: float
    q: float

    def __post_init__(self):
        for name in ("p", "q"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise DomainError(f"{name} must lie in (0, 1), got {v}")

    @classmethod
    def from_alphas(cls, alpha_s: float, alpha_c: float) -> "MicroRates":
        """Step probabilities whose survival curves match the continuous rates at integer years."""
        return cls(p=-math.expm1(-alpha_s), q=-math.expm1(-alpha_c))


def _check_t(t):
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or np.any(np.isnan(t_arr)):
        raise DomainError(f"time must be non-negative, got {t}")
    return t_arr


def evaluate_transition(params: TransitionParams, t):
    """Return ``(ms, mc, total)`` at ``t`` years after the start (scalar or array)."""
    t_arr = _check_t(t)
    ms = params.ms0 * np.exp(-params.alpha_s * t_arr)
    mc = (1.0 - params.mc0) * (1.0 - np.exp(-params.alpha_c * t_arr)) * np.exp(params.alpha * t_arr)
    total = ms + mc
    if t_arr.ndim == 0:
        return float(ms), float(mc), float(total)
    return ms, mc, total


def total_level(params: TransitionParams, t) -> np.ndarray | float:
    return evaluate_transition(params, t)[2]


def population_shares(params: TransitionParams, t: float) -> ReservoirShares:
    t = float(_check_t(t))
    socialist = params.ms0 * math.exp(-params.alpha_s * t)
    capitalist = (1.0 - params.mc0) * (1.0 - math.exp(-params.alpha_c * t))
    neither = 1.0 - socialist - capitalist
    # rounding can leave -1e-17 when alpha_s == alpha_c
    return ReservoirShares(socialist, capitalist, max(neither, 0.0))


def find_trough(params: TransitionParams, horizon: float, scan_step: float = 0.01) -> tuple[float, float]:
    """Locate the minimum of M(t) on ``[0, horizon]``.

    A dense scan brackets the minimum, then a bounded scalar minimisation
    polishes it.  When the scan minimum sits at ``t=0`` the curve never dips
    below its starting level and ``(0.0, M(0))`` is returned.
    """
    if not horizon > 0:
        raise DomainError("horizon must be positive")
    if not 0 < scan_step <= 0.01:
        raise DomainError("scan_step must be in (0, 0.01]")
    n = int(math.ceil(horizon / scan_step)) + 1
    t = np.linspace(0.0, horizon, n)
    levels = total_level(params, t)
    i = int(np.argmin(levels))
    if i == 0:
        return 0.0, float(levels[0])
    lo, hi = t[i - 1], t[min(i + 1, n - 1)]
    best_t, best_level = float(t[i]), float(levels[i])
    if hi > lo:
        res = minimize_scalar(
            lambda x: total_level(params, x), bounds=(lo, hi), method="bounded",
            options={"xatol": 1e-10},
        )
        if res.fun < best_level:
            best_t, best_level = float(res.x), float(res.fun)
    return best_t, best_level


def trough_vs_ratio(
    alpha_c: float,
    alpha: float,
    ratios: Sequence[float],
    horizon: float = 100.0,
) -> list[tuple[float, float]]:
    """Trough depth as the decay/build-up ratio ``alpha_s / alpha_c`` grows."""
    out = []
    for r in ratios:
        if r < 1:
            raise DomainError(f"ratio must be >= 1, got {r}")
        params = TransitionParams(alpha_s=r * alpha_c, alpha_c=alpha_c, alpha=alpha)
        out.append((float(r), find_trough(params, horizon)[1]))
    return out


@dataclass(frozen=True, eq=False)
class MonteCarloShares:
    years: np.ndarray
    socialist: np.ndarray
    capitalist: np.ndarray
    agents: int


def _simulate_partition(p: float, q: float, agents: int, years: int, seed_seq: np.random.SeedSequence):
    rng = np.random.default_rng(seed_seq)
    in_s = np.ones(agents, dtype=bool)
    in_c = np.zeros(agents, dtype=bool)
    s_counts = np.empty(years + 1, dtype=np.int64)
    c_counts = np.empty(years + 1, dtype=np.int64)
    s_counts[0], c_counts[0] = agents, 0
    for year in range(1, years + 1):
        # both draws for every agent each year keep the stream layout fixed
        leave = rng.random(agents) < p
        enter = rng.random(agents) < q
        in_s &= ~leave
        in_c |= enter
        s_counts[year] = in_s.sum()
        c_counts[year] = in_c.sum()
    return s_counts, c_counts


def mc_simulate(
    rates: MicroRates,
    agents: int,
    years: int,
    seed: int,
    workers: int = 1,
) -> MonteCarloShares:
    """Simulate per-agent exit from S and entry into C as annual Bernoulli trials.

    Agents are split into ``workers`` partitions, each with its own stream
    spawned from ``seed``.  Output is bit-identical for identical
    ``(seed, agents, years, workers)``.
    """
    if agents < 1:
        raise ValidationError("agents must be >= 1")
    if years < 0:
        raise ValidationError("years must be >= 0")
    if workers < 1:
        raise ValidationError("workers must be >= 1")
    sizes = [len(chunk) for chunk in np.array_split(np.arange(agents), workers)]
    streams = np.random.SeedSequence(seed).spawn(workers)
    jobs = [(rates.p, rates.q, n, years, ss) for n, ss in zip(sizes, streams) if n > 0]
    if workers == 1:
        results = [_simulate_partition(*job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda job: _simulate_partition(*job), jobs))
    s_counts = sum(r[0] for r in results)
    c_counts = sum(r[1] for r in results)
    return MonteCarloShares(
        years=np.arange(years + 1),
        socialist=s_counts / agents,
        capitalist=c_counts / agents,
        agents=agents,
    )


def analytic_marginals(rates: MicroRates, years: int) -> tuple[np.ndarray, np.ndarray]:
    t = np.arange(years + 1)
    return (1.0 - rates.p) ** t, 1.0 - (1.0 - rates.q) ** t


def model_curve(params: TransitionParams, t: Sequence[float]) -> np.ndarray:
    """Rows of ``(t, ms, mc, total)``."""
    t = np.asarray(t, dtype=float)
    ms, mc, total = evaluate_transition(params, t)
    return np.column_stack([t, ms, mc, total])


def write_model_curve(params: TransitionParams, t: Sequence[float], dest: str | Path | IO[str]) -> None:
    rows = model_curve(params, t)
    lines = ["t,ms,mc,total"] + [",".join(repr(float(v)) for v in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text)
    else:
        dest.write(text)


def write_mc_shares(result: MonteCarloShares, dest: str | Path | IO[str]) -> None:
    lines = ["year,socialist,capitalist"] + [
        f"{int(y)},{float(s)!r},{float(c)!r}"
        for y, s, c in zip(result.years, result.socialist, result.capitalist)
    ]
    text = "\n".join(lines) + "\n"
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text)
    else:
        dest.write(text)
