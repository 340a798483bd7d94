"""Selection-grid sweeps of the benchmark model: the data behind the
amplification-region and Pr(f)-normalized Fisher-information figures.

Values come from the closed forms of :mod:`psfisher.analytic`; the grid
engine cross-validates them in the test suite. Rows are ordered
theta-major, selection-minor, and every emitted row is audited against
the no-go bound Pr(f) * I_ps <= I_int.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .analytic import ic_closed, pr_f_closed, qfi_int_closed, qfi_ps_closed
from .errors import ConfigError
from .states import Selection

CSV_COLUMNS = ("theta", "t1", "t2", "ds", "pr_f", "qfi_ps", "qfi_int",
               "prf_qfi_ps", "ic_plus", "ic_minus")
PR_SENTINEL = 1e-12


@dataclass(frozen=True)
class SweepConfig:
    sigma: float = 1.0
    theta_over_sigma_max: float = 5.0
    theta_points: int = 201
    n_t1: int = 16
    n_t2: int = 16
    n_ds: int = 8
    t1_values: Optional[Sequence[float]] = None
    t2_values: Optional[Sequence[float]] = None
    ds_values: Optional[Sequence[float]] = None
    seed: int = 0

    def validate(self) -> "SweepConfig":
        if self.sigma <= 0:
            raise ConfigError(f"sigma must be positive, got {self.sigma}")
        if self.theta_points < 2:
            raise ConfigError(f"theta_points must be >= 2, got {self.theta_points}")
        if self.theta_over_sigma_max < 0:
            raise ConfigError("theta_over_sigma_max must be nonnegative, "
                              f"got {self.theta_over_sigma_max}")
        for name in ("n_t1", "n_t2", "n_ds"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        return self


def _axis(n: int, span: float, explicit) -> np.ndarray:
    if explicit is not None:
        return np.asarray(list(explicit), dtype=float)
    # Offset grid: avoids the exactly orthogonal selections at cell edges.
    return (np.arange(n) + 0.5) * span / n


def selection_grid(config: SweepConfig):
    """Selections over the (t1, t2, s1 - s2) box; s2 is fixed at 0."""
    t1s = _axis(config.n_t1, np.pi, config.t1_values)
    t2s = _axis(config.n_t2, np.pi, config.t2_values)
    dss = _axis(config.n_ds, 2.0 * np.pi, config.ds_values)
    return [Selection(t1=float(t1), s1=float(ds), t2=float(t2), s2=0.0)
            for t1 in t1s for t2 in t2s for ds in dss]


@dataclass
class SweepResult:
    config: SweepConfig
    thetas: np.ndarray
    selections: list
    pr_f: np.ndarray          # (n_sel, n_theta)
    qfi_ps: np.ndarray        # (n_sel, n_theta), NaN where Pr(f) < sentinel
    qfi_int: float
    ic_plus: np.ndarray       # (n_theta,)
    ic_minus: np.ndarray      # (n_theta,)
    skipped: int = 0
    violations: list = field(default_factory=list)

    @property
    def prf_qfi_ps(self) -> np.ndarray:
        return self.pr_f * self.qfi_ps

    def iter_rows(self):
        """FisherReport rows, theta-major then selection-minor."""
        for j, theta in enumerate(self.thetas):
            for k, sel in enumerate(self.selections):
                yield {
                    "theta": float(theta),
                    "t1": sel.t1,
                    "t2": sel.t2,
                    "ds": sel.s1,
                    "pr_f": float(self.pr_f[k, j]),
                    "qfi_ps": None if np.isnan(self.qfi_ps[k, j])
                    else float(self.qfi_ps[k, j]),
                    "qfi_int": self.qfi_int,
                    "prf_qfi_ps": None if np.isnan(self.qfi_ps[k, j])
                    else float(self.pr_f[k, j] * self.qfi_ps[k, j]),
                    "ic_plus": float(self.ic_plus[j]),
                    "ic_minus": float(self.ic_minus[j]),
                }


def run_sweep(config: SweepConfig) -> SweepResult:
    config.validate()
    sigma = config.sigma
    thetas = np.linspace(0.0, config.theta_over_sigma_max * sigma, config.theta_points)
    selections = selection_grid(config)
    pr = np.empty((len(selections), thetas.size))
    qfi = np.empty_like(pr)
    skipped = 0
    for k, sel in enumerate(selections):
        pr[k] = pr_f_closed(sel, sigma, thetas)
        ok = pr[k] >= PR_SENTINEL
        row = np.full(thetas.size, np.nan)
        if np.any(ok):
            row[ok] = np.maximum(qfi_ps_closed(sel, sigma, thetas[ok]), 0.0)
        skipped += int(np.count_nonzero(~ok))
        qfi[k] = row
    qfi_int = qfi_int_closed(sigma)
    result = SweepResult(
        config=config, thetas=thetas, selections=selections, pr_f=pr,
        qfi_ps=qfi, qfi_int=qfi_int,
        ic_plus=np.asarray(ic_closed(sigma, thetas, +1.0)),
        ic_minus=np.asarray(ic_closed(sigma, thetas, -1.0)),
        skipped=skipped)
    bound = qfi_int * (1.0 + 1e-9) + 1e-12
    lhs = result.prf_qfi_ps
    bad = np.argwhere(np.nan_to_num(lhs, nan=0.0) > bound)
    result.violations = [(int(k), int(j), float(lhs[k, j])) for k, j in bad]
    return result


def _cell(v) -> str:
    if v is None:
        return ""
    return format(v, ".17g")


def write_csv(result: SweepResult, path) -> int:
    """Write the sweep table; returns the number of rows written."""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for row in result.iter_rows():
            fh.write(",".join(_cell(row[c]) for c in CSV_COLUMNS) + "\n")
            count += 1
    return count
