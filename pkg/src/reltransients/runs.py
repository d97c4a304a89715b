"""Evaluate a solver on a uniform time grid at fixed x."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .analysis import TimeSeries
from .kernel import DEFAULT_POLICY, SeriesPolicy
from .nonrel import REST_PHASE_CONVENTION, psi_schrodinger_step
from .shutter import ShutterSetup, dirac_shutter, psi_kg_shutter
from .source import psi_source
from .units import PhysicalSetup

SOLVERS = ("source", "kg_shutter", "dirac_shutter", "schrodinger")


@dataclass(frozen=True)
class RunConfig:
    solver: str
    E: float
    V: float = 0.0
    x: float = 10.0
    t_start: float = 0.0
    t_end: float = 100.0
    n_samples: int = 2048
    policy: SeriesPolicy = field(default_factory=SeriesPolicy)
    format: str = "csv"

    def __post_init__(self):
        if self.solver not in SOLVERS:
            raise ValueError(f"unknown solver {self.solver!r}; choose from {', '.join(SOLVERS)}")
        if not self.t_end > self.t_start >= 0:
            raise ValueError("need t_end > t_start >= 0")
        if self.n_samples < 16:
            raise ValueError("n_samples must be >= 16")
        if self.x < 0:
            raise ValueError("x must be >= 0")
        if self.solver in ("kg_shutter", "dirac_shutter") and self.V != 0:
            raise ValueError("shutter solvers are free-particle only (V = 0)")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")

    @property
    def t_grid(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_samples)

    def to_dict(self) -> dict:
        d = asdict(self)
        pol = d.pop("policy")
        pol["force"] = None if self.policy.force is None else self.policy.force.value
        d["policy"] = pol
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        pol = dict(d.pop("policy", None) or {})
        pol.pop("force", None)
        return cls(policy=replace(DEFAULT_POLICY, **pol), **d)


def _evaluate_chunk(args):
    solver, E, V, x, ts, policy = args
    psi = np.zeros(len(ts), dtype=complex)
    psi2 = np.zeros(len(ts), dtype=complex)
    rho = np.zeros(len(ts))
    if solver == "source":
        setup = PhysicalSetup(E, V)
        for i, t in enumerate(ts):
            w = psi_source(x, t, setup, policy) if t > 0 else None
            if w is not None:
                psi[i], rho[i] = w.psi, w.rho
    elif solver == "kg_shutter":
        setup = ShutterSetup(E)
        for i, t in enumerate(ts):
            if t > 0:
                w = psi_kg_shutter(x, t, setup, policy)
                psi[i], rho[i] = w.psi, w.rho
    elif solver == "dirac_shutter":
        setup = ShutterSetup(E)
        for i, t in enumerate(ts):
            if t > 0:
                d = dirac_shutter(x, t, setup, policy)
                psi[i], psi2[i], rho[i] = d.psi1, d.psi2, d.rho_D
    else:
        setup = PhysicalSetup(E, V)
        for i, t in enumerate(ts):
            psi[i] = psi_schrodinger_step(x, t, setup)
            rho[i] = abs(psi[i]) ** 2
    return psi, psi2, rho


def evolve(config: RunConfig, workers: int = 1) -> TimeSeries:
    """Sample ``config.solver`` on its grid; chunks run in parallel when workers > 1."""
    ts = config.t_grid
    chunks = np.array_split(ts, max(1, workers) * 4) if workers > 1 else [ts]
    jobs = [(config.solver, config.E, config.V, config.x, c, config.policy) for c in chunks if len(c)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_evaluate_chunk, jobs))
    else:
        parts = [_evaluate_chunk(j) for j in jobs]
    psi = np.concatenate([p[0] for p in parts])
    psi2 = np.concatenate([p[1] for p in parts])
    rho = np.concatenate([p[2] for p in parts])
    tag = {"config": config.to_dict()}
    if config.solver == "schrodinger":
        tag["rest_phase"] = REST_PHASE_CONVENTION
    return TimeSeries.from_grid(
        config.x, ts, rho, psi=psi, psi2=psi2 if config.solver == "dirac_shutter" else None, setup_tag=tag
    )
