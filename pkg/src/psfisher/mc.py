"""Finite-sample Monte Carlo harness: inverse-CDF sampling from tabulated
densities, maximum-likelihood fitting of theta, and the comparison of the
postselected strategy against a concrete whole-state reference strategy.

The reference ("joint") strategy measures the probe position together
with the system in the {|f>, |f_perp>} basis; its classical Fisher
information is computed explicitly and may sit below the whole-state QFI
at some theta. All randomness is counter-seeded per repetition, so
results are independent of execution order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .analytic import qfi_int_closed
from .errors import ConfigError, DegenerateModelError, InputError
from .qubit_gaussian import QubitGaussianModel
from .states import Selection

MLE_GRID_POINTS = 256
MLE_TOL = 1e-8
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class TrialBudget:
    """Trial accounting: n prepared copies, n_ps postselection successes
    (binomial per run), n_int = n for the whole-state strategy."""

    n: int
    n_ps: int

    @property
    def n_int(self) -> int:
        return self.n


@dataclass
class EstimationRun:
    strategy: str
    theta_true: float
    samples: np.ndarray
    theta_hat: float = np.nan

    @property
    def squared_error(self) -> float:
        return (self.theta_hat - self.theta_true) ** 2


@dataclass(frozen=True)
class ComparisonConfig:
    sigma: float
    theta_true: float
    selection: Selection
    n: int
    search: tuple = None  # defaults to (0, 8 sigma)

    def search_interval(self):
        return self.search if self.search is not None else (0.0, 8.0 * self.sigma)


def _validate_pdf(x, pdf, tol=1e-6):
    x = np.asarray(x, dtype=float)
    pdf = np.asarray(pdf, dtype=float)
    if x.shape != pdf.shape or x.ndim != 1 or x.size < 2:
        raise InputError("x and pdf must be matching 1-d arrays")
    if not np.all(np.isfinite(pdf)) or np.any(pdf < -tol):
        raise InputError("pdf must be finite and nonnegative")
    total = float(np.trapezoid(pdf, x))
    if abs(total - 1.0) > tol:
        raise InputError(f"pdf integrates to {total!r}, not 1 within {tol:.1e}")
    return x, pdf


def _tabulated_cdf(x, pdf):
    steps = 0.5 * (pdf[1:] + pdf[:-1]) * np.diff(x)
    cdf = np.concatenate([[0.0], np.cumsum(steps)])
    return cdf / cdf[-1]


def _draw(rng, x, cdf, count):
    return np.interp(rng.random(count), cdf, x)


def sample_outcomes(x, pdf, count: int, seed) -> np.ndarray:
    """Inverse-CDF samples from a tabulated density; deterministic per seed."""
    if count < 0:
        raise InputError(f"count must be nonnegative, got {count}")
    x, pdf = _validate_pdf(x, pdf)
    if count == 0:
        return np.empty(0, dtype=float)
    cdf = _tabulated_cdf(x, pdf)
    return _draw(np.random.default_rng(seed), x, cdf, count)


def _golden_max(fun, a, b, tol):
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fun(c), fun(d)
    while (b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


def maximize_loglik(loglik, search, grid_points: int = MLE_GRID_POINTS,
                    tol: float = MLE_TOL) -> float:
    """Coarse grid scan followed by golden-section refinement."""
    lo, hi = search
    thetas = np.linspace(lo, hi, grid_points)
    with np.errstate(divide="ignore", invalid="ignore"):
        ll = np.array([loglik(t) for t in thetas])
    ll = np.where(np.isfinite(ll), ll, -np.inf)
    if not np.any(ll > -np.inf):
        raise DegenerateModelError("log-likelihood is -inf over the search interval")
    k = int(np.argmax(ll))
    a = thetas[max(k - 1, 0)]
    b = thetas[min(k + 1, grid_points - 1)]
    return float(_golden_max(lambda t: loglik(t), a, b, tol))


def mle_fit(samples, model, search, grid_points: int = MLE_GRID_POINTS,
            tol: float = MLE_TOL) -> float:
    """Maximum-likelihood theta for i.i.d. samples.

    model(theta, xs) must return density values at the sample points xs.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise InputError("samples must be nonempty")

    def loglik(theta):
        f = np.asarray(model(theta, samples), dtype=float)
        if np.any(f <= 0.0) or not np.all(np.isfinite(f)):
            return -np.inf
        return float(np.sum(np.log(f)))

    return maximize_loglik(loglik, search, grid_points=grid_points, tol=tol)


# -- strategy machinery ------------------------------------------------


def _measurement_fisher(density_of_theta, x, theta, h=1e-4):
    """Classical Fisher information of a (possibly unnormalized) tabulated
    density family by central finite differences in theta."""
    f0 = density_of_theta(theta)
    dp = (density_of_theta(theta + h) - density_of_theta(theta - h)) / (2.0 * h)
    supported = f0 >= 1e-300
    integrand = np.zeros_like(f0)
    integrand[supported] = dp[supported] ** 2 / f0[supported]
    return float(np.trapezoid(integrand, x))


class _QubitGaussianExperiment:
    """Shared tabulation for both strategies of one comparison config."""

    def __init__(self, config: ComparisonConfig):
        self.config = config
        sel = config.selection
        self.model = QubitGaussianModel(sel, config.sigma)
        perp_sel = Selection(sel.t1, sel.s1, sel.t2 + np.pi / 2.0, sel.s2)
        self.model_perp = QubitGaussianModel(perp_sel, config.sigma)
        lo, hi = config.search_interval()
        span = max(abs(lo), abs(hi)) + 8.0 * config.sigma
        self.x = np.linspace(-span, span, 6001)
        self.pr_true = float(self.model.pr_f_exact(config.theta_true))

    def conditional_density(self, model, theta, xs):
        pr = model.pr_f_exact(theta)
        if pr <= 1e-300:
            return np.zeros_like(np.asarray(xs, dtype=float))
        return model.unnormalized_position_density(theta, xs) / pr

    def postselected_fisher(self) -> float:
        th = self.config.theta_true
        return _measurement_fisher(
            lambda t: self.conditional_density(self.model, t, self.x), self.x, th)

    def joint_fisher(self) -> float:
        th = self.config.theta_true
        total = 0.0
        for m in (self.model, self.model_perp):
            total += _measurement_fisher(
                lambda t: m.unnormalized_position_density(t, self.x), self.x, th)
        return total


def _rep_rng(seed, strategy_index, rep):
    return np.random.default_rng(np.random.SeedSequence((seed, strategy_index, rep)))


def run_comparison(config: ComparisonConfig, reps: int, seed: int) -> dict:
    """Monte Carlo comparison of the two strategies.

    Per strategy: mean squared error of the MLE over reps repetitions, the
    asymptotic bound 1/(E[n] * I) for both the measurement's classical
    Fisher information and the quantum Fisher information, and their
    ratios. Repetitions with zero postselection successes are recorded as
    failures, not dropped silently.
    """
    if reps < 1:
        raise ConfigError(f"reps must be >= 1, got {reps}")
    if config.n < 1:
        raise ConfigError(f"n must be >= 1, got {config.n}")
    exp = _QubitGaussianExperiment(config)
    lo, hi = config.search_interval()
    th = config.theta_true
    if not (lo <= th <= hi):
        raise ConfigError(f"theta_true {th!r} outside search interval ({lo}, {hi})")
    n = config.n
    qfi_ps = float(exp.model.qfi_ps(th))
    qfi_int = qfi_int_closed(config.sigma)
    fisher_ps_meas = exp.postselected_fisher()
    fisher_joint_meas = exp.joint_fisher()

    cdf_ps = _tabulated_cdf(exp.x, exp.conditional_density(exp.model, th, exp.x))
    pr_perp = 1.0 - exp.pr_true
    cdf_perp = None
    if pr_perp > 1e-12:
        cdf_perp = _tabulated_cdf(exp.x, exp.conditional_density(exp.model_perp, th, exp.x))

    # -- postselected strategy ---------------------------------------
    ps_sq, ps_nps, ps_failures = [], [], 0
    for rep in range(reps):
        rng = _rep_rng(seed, 0, rep)
        n_ps = int(rng.binomial(n, exp.pr_true))
        ps_nps.append(n_ps)
        if n_ps == 0:
            ps_failures += 1
            continue
        xs = _draw(rng, exp.x, cdf_ps, n_ps)
        theta_hat = mle_fit(
            xs, lambda t, s: exp.conditional_density(exp.model, t, s), (lo, hi))
        ps_sq.append((theta_hat - th) ** 2)

    # -- joint (whole-state reference) strategy -----------------------
    joint_sq = []
    for rep in range(reps):
        rng = _rep_rng(seed, 1, rep)
        k = int(rng.binomial(n, exp.pr_true)) if pr_perp > 1e-12 else n
        xs_f = _draw(rng, exp.x, cdf_ps, k) if k else np.empty(0)
        xs_p = (_draw(rng, exp.x, cdf_perp, n - k)
                if (n - k) and cdf_perp is not None else np.empty(0))

        def loglik(t):
            total = 0.0
            for m, xs in ((exp.model, xs_f), (exp.model_perp, xs_p)):
                if xs.size == 0:
                    continue
                g = m.unnormalized_position_density(t, xs)
                if np.any(g <= 0.0):
                    return -np.inf
                total += float(np.sum(np.log(g)))
            return total

        theta_hat = maximize_loglik(loglik, (lo, hi))
        joint_sq.append((theta_hat - th) ** 2)

    e_nps = exp.pr_true * n
    strategies = {
        "postselected-position": {
            "n": n,
            "expected_successes": e_nps,
            "mean_successes": float(np.mean(ps_nps)),
            "reps": reps,
            "failures": ps_failures,
            "mse": float(np.mean(ps_sq)) if ps_sq else float("nan"),
            "fisher_measurement": fisher_ps_meas,
            "fisher_quantum": qfi_ps,
            "bound": 1.0 / (e_nps * fisher_ps_meas),
            "bound_quantum": 1.0 / (e_nps * qfi_ps) if qfi_ps > 0 else float("inf"),
        },
        "joint-position-ideal": {
            "n": n,
            "expected_successes": float(n),
            "mean_successes": float(n),
            "reps": reps,
            "failures": 0,
            "mse": float(np.mean(joint_sq)),
            "fisher_measurement": fisher_joint_meas,
            "fisher_quantum": qfi_int,
            "bound": 1.0 / (n * fisher_joint_meas),
            "bound_quantum": 1.0 / (n * qfi_int),
        },
    }
    for rec in strategies.values():
        rec["ratio"] = rec["mse"] / rec["bound"]
    return {
        "sigma": config.sigma,
        "theta_true": th,
        "selection": {"t1": config.selection.t1, "s1": config.selection.s1,
                      "t2": config.selection.t2, "s2": config.selection.s2},
        "n": n,
        "reps": reps,
        "seed": seed,
        "pr_f": exp.pr_true,
        "search": [lo, hi],
        "strategies": strategies,
    }


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def format_summary(summary: dict) -> str:
    """Deterministic structured-text rendering of a comparison summary."""
    lines = ["# monte-carlo strategy comparison"]
    for key in ("sigma", "theta_true", "n", "reps", "seed", "pr_f"):
        lines.append(f"{key} = {_fmt(summary[key])}")
    sel = summary["selection"]
    lines.append("selection = " + " ".join(f"{k}={_fmt(sel[k])}"
                                           for k in ("t1", "s1", "t2", "s2")))
    lines.append("search = " + " ".join(_fmt(v) for v in summary["search"]))
    for name in sorted(summary["strategies"]):
        rec = summary["strategies"][name]
        lines.append(f"[{name}]")
        for key in ("n", "expected_successes", "mean_successes", "reps", "failures",
                    "mse", "fisher_measurement", "fisher_quantum", "bound",
                    "bound_quantum", "ratio"):
            lines.append(f"{key} = {_fmt(rec[key])}")
    return "\n".join(lines) + "\n"
