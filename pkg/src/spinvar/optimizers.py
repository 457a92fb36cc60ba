"""Classical outer loops: SPSA, QNSPSA, and deterministic gradient descent.

All three minimize a black-box objective exposing

    evaluate(theta) -> float            (counted; the only energy source)
    fidelity_probe(a, b) -> float       (QNSPSA only; also counted)
    shift_multipliers() -> list | None  (per-slot multipliers when every
                                         slot feeds exactly one Pauli
                                         rotation, else None)
    eval_count                          (monotone evaluation counter)

and return an OptimizerTrace whose best-so-far column is non-increasing.
SPSA follows the standard power-law gain schedules a_k = a/(k+1+A)^alpha,
c_k = c/(k+1)^gamma with Spall's exponents.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np


class OptimizationError(RuntimeError):
    """Aborted run; .trace carries the iterations completed so far."""

    def __init__(self, message: str, trace: "OptimizerTrace | None" = None):
        super().__init__(message)
        self.trace = trace


class UnsupportedShiftError(ValueError):
    """A parameter slot does not admit the two-point shift rule."""


class FunctionObjective:
    """Adapter turning a plain callable into an optimizer objective."""

    def __init__(self, fn, fidelity=None):
        self._fn = fn
        self._fidelity = fidelity
        self.eval_count = 0

    def evaluate(self, theta: np.ndarray) -> float:
        self.eval_count += 1
        return float(self._fn(np.asarray(theta, dtype=float)))

    def fidelity_probe(self, a: np.ndarray, b: np.ndarray) -> float:
        if self._fidelity is None:
            raise AttributeError("objective has no fidelity probe")
        self.eval_count += 1
        return float(self._fidelity(np.asarray(a, float), np.asarray(b, float)))

    def shift_multipliers(self):
        return None


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    evaluations: int
    value: float
    best: float


@dataclass
class OptimizerTrace:
    records: list[TraceRecord] = field(default_factory=list)
    final_theta: np.ndarray | None = None
    best_theta: np.ndarray | None = None
    final_value: float = math.nan
    best_value: float = math.inf
    n_evaluations: int = 0
    wall_time: float = 0.0
    metadata: dict = field(default_factory=dict)


class _BestTracker:
    """Routes every energy evaluation through best-so-far bookkeeping."""

    def __init__(self, objective):
        self.objective = objective
        self.best_value = math.inf
        self.best_theta: np.ndarray | None = None

    def __call__(self, theta: np.ndarray) -> float:
        value = self.objective.evaluate(theta)
        if value < self.best_value:
            self.best_value = value
            self.best_theta = np.array(theta, dtype=float)
        return value

    def finalize(self, trace: OptimizerTrace, final_theta: np.ndarray, final_value: float):
        trace.final_theta = np.array(final_theta, dtype=float)
        trace.final_value = final_value
        trace.best_value = self.best_value
        trace.best_theta = self.best_theta
        trace.n_evaluations = self.objective.eval_count


def _check_finite(value: float, what: str, trace: OptimizerTrace):
    if not math.isfinite(value):
        raise OptimizationError(f"non-finite {what} ({value}) aborted the run", trace)


@dataclass(frozen=True)
class SpsaConfig:
    a: float | None = None          # None: calibrate from probe pairs
    c: float = 0.1
    A: float | None = None          # None: 0.05 * iterations
    alpha: float = 0.602
    gamma: float = 0.101
    calibration_pairs: int = 5
    target_step: float = 0.1

    def __post_init__(self):
        if self.a is not None and self.a <= 0:
            raise ValueError("gain a must be positive")
        if self.c <= 0:
            raise ValueError("gain c must be positive")


def spsa_minimize(
    objective,
    theta0: np.ndarray,
    iterations: int,
    cfg: SpsaConfig = SpsaConfig(),
    rng: np.random.Generator | None = None,
) -> OptimizerTrace:
    """Two-evaluation simultaneous-perturbation descent.

    When cfg.a is unset, the gain is calibrated so the first update has
    magnitude about cfg.target_step; the probe evaluations are counted
    and recorded in trace.metadata.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if rng is None:
        raise ValueError("spsa needs an rng")
    start = time.perf_counter()
    theta = np.array(theta0, dtype=float)
    dim = theta.size
    big_a = cfg.A if cfg.A is not None else 0.05 * iterations
    trace = OptimizerTrace()
    ev = _BestTracker(objective)

    a_gain = cfg.a
    if a_gain is None:
        magnitudes = []
        for _ in range(cfg.calibration_pairs):
            delta = rng.integers(0, 2, size=dim) * 2.0 - 1.0
            df = ev(theta + cfg.c * delta) - ev(theta - cfg.c * delta)
            _check_finite(df, "calibration objective difference", trace)
            magnitudes.append(abs(df) / (2 * cfg.c))
        mean_mag = float(np.mean(magnitudes))
        if mean_mag < 1e-12:
            a_gain = cfg.target_step * (big_a + 1) ** cfg.alpha
        else:
            a_gain = cfg.target_step * (big_a + 1) ** cfg.alpha / mean_mag
        trace.metadata["calibrated_a"] = a_gain
        trace.metadata["calibration_evaluations"] = 2 * cfg.calibration_pairs

    for k in range(iterations):
        a_k = a_gain / (k + 1 + big_a) ** cfg.alpha
        c_k = cfg.c / (k + 1) ** cfg.gamma
        delta = rng.integers(0, 2, size=dim) * 2.0 - 1.0
        f_plus = ev(theta + c_k * delta)
        f_minus = ev(theta - c_k * delta)
        _check_finite(f_plus, "objective", trace)
        _check_finite(f_minus, "objective", trace)
        grad = (f_plus - f_minus) / (2 * c_k) * delta  # delta^-1 = delta for Rademacher
        theta = theta - a_k * grad
        trace.records.append(
            TraceRecord(k, objective.eval_count, min(f_plus, f_minus), ev.best_value)
        )
    ev.finalize(trace, theta, min(f_plus, f_minus))
    trace.wall_time = time.perf_counter() - start
    return trace


@dataclass(frozen=True)
class QnspsaConfig:
    learning_rate: float = 0.1
    perturbation: float = 0.01
    regularization: float = 0.001
    average_metric: bool = True
    blocking: bool = True          # reject steps raising the loss by > 2 sigma
    std_evaluations: int = 5       # repeat evals at theta0 to estimate sigma

    def __post_init__(self):
        if self.learning_rate <= 0 or self.perturbation <= 0:
            raise ValueError("learning_rate and perturbation must be positive")
        if self.regularization < 0:
            raise ValueError("regularization must be non-negative")
        if self.std_evaluations < 2:
            raise ValueError("std_evaluations must be >= 2")


def _regularized(metric: np.ndarray, lam: float) -> np.ndarray:
    """Symmetric absolute value plus lam on the diagonal."""
    vals, vecs = np.linalg.eigh((metric + metric.T) / 2)
    return (vecs * np.abs(vals)) @ vecs.T + lam * np.eye(metric.shape[0])


def qnspsa_minimize(
    objective,
    theta0: np.ndarray,
    iterations: int,
    cfg: QnspsaConfig = QnspsaConfig(),
    rng: np.random.Generator | None = None,
) -> OptimizerTrace:
    """Natural-gradient SPSA with a rank-2 Fubini-Study metric sample.

    Each iteration spends 2 energy evaluations on the gradient and 4
    fidelity probes on the metric, then solves metric @ step = gradient.
    With blocking on, one more evaluation prices the candidate point and
    steps that raise the loss by more than twice the sampled loss noise
    are rejected.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if rng is None:
        raise ValueError("qnspsa needs an rng")
    if not hasattr(objective, "fidelity_probe"):
        raise ValueError("qnspsa needs an objective with a fidelity probe")
    start = time.perf_counter()
    theta = np.array(theta0, dtype=float)
    dim = theta.size
    eps = cfg.perturbation
    trace = OptimizerTrace()
    ev = _BestTracker(objective)
    metric_avg = np.zeros((dim, dim))

    allowed_increase = None
    f_current = math.nan
    if cfg.blocking:
        samples = [ev(theta) for _ in range(cfg.std_evaluations)]
        for s in samples:
            _check_finite(s, "loss-noise calibration", trace)
        allowed_increase = 2.0 * float(np.std(samples))
        f_current = float(np.mean(samples))
        trace.metadata["allowed_increase"] = allowed_increase
        trace.metadata["calibration_evaluations"] = cfg.std_evaluations

    for k in range(iterations):
        delta1 = rng.integers(0, 2, size=dim) * 2.0 - 1.0
        delta2 = rng.integers(0, 2, size=dim) * 2.0 - 1.0
        f_plus = ev(theta + eps * delta1)
        f_minus = ev(theta - eps * delta1)
        _check_finite(f_plus, "objective", trace)
        _check_finite(f_minus, "objective", trace)
        grad = (f_plus - f_minus) / (2 * eps) * delta1

        d_f = (
            objective.fidelity_probe(theta, theta + eps * (delta1 + delta2))
            - objective.fidelity_probe(theta, theta + eps * delta1)
            - objective.fidelity_probe(theta, theta + eps * (-delta1 + delta2))
            + objective.fidelity_probe(theta, theta - eps * delta1)
        )
        _check_finite(d_f, "fidelity difference", trace)
        point = (-d_f / (8 * eps**2)) * (np.outer(delta1, delta2) + np.outer(delta2, delta1))
        if cfg.average_metric:
            metric_avg = (k * metric_avg + point) / (k + 1)
            metric = metric_avg
        else:
            metric = point
        try:
            step = np.linalg.solve(_regularized(metric, cfg.regularization), grad)
        except np.linalg.LinAlgError:
            raise OptimizationError(
                f"singular regularized metric at iteration {k}; "
                f"increase regularization (currently {cfg.regularization})",
                trace,
            ) from None
        candidate = theta - cfg.learning_rate * step
        if cfg.blocking:
            f_candidate = ev(candidate)
            _check_finite(f_candidate, "objective", trace)
            if f_candidate <= f_current + allowed_increase:
                theta, f_current = candidate, f_candidate
            recorded = f_candidate
        else:
            theta = candidate
            recorded = min(f_plus, f_minus)
        trace.records.append(TraceRecord(k, objective.eval_count, recorded, ev.best_value))
    final_value = f_current if cfg.blocking else min(f_plus, f_minus)
    ev.finalize(trace, theta, final_value)
    trace.wall_time = time.perf_counter() - start
    return trace


def finite_difference_gradient(objective, theta: np.ndarray, step: float = 1e-4) -> np.ndarray:
    """Central differences, 2 * dim evaluations."""
    theta = np.asarray(theta, dtype=float)
    grad = np.empty(theta.size)
    for j in range(theta.size):
        probe = np.zeros_like(theta)
        probe[j] = step
        grad[j] = (objective.evaluate(theta + probe) - objective.evaluate(theta - probe)) / (
            2 * step
        )
    return grad


def parameter_shift_gradient(objective, theta: np.ndarray) -> np.ndarray:
    """Exact gradient via the two-point shift rule, 2 * dim evaluations.

    Valid only when every slot feeds exactly one Pauli rotation with
    angle multiplier m: d f / d theta_j = m * [f(theta + (pi/2m) e_j) -
    f(theta - (pi/2m) e_j)] / 2.
    """
    multipliers = objective.shift_multipliers()
    if multipliers is None:
        raise UnsupportedShiftError("objective does not expose per-slot shift multipliers")
    theta = np.asarray(theta, dtype=float)
    grad = np.empty(theta.size)
    for j, m in enumerate(multipliers):
        if m is None:
            raise UnsupportedShiftError(
                f"parameter slot {j} feeds more than one gate; shift rule does not apply"
            )
        probe = np.zeros_like(theta)
        probe[j] = math.pi / (2 * m)
        grad[j] = m * (objective.evaluate(theta + probe) - objective.evaluate(theta - probe)) / 2
    return grad


@dataclass(frozen=True)
class GradConfig:
    initial_step: float = 1.0
    shrink: float = 0.5
    armijo: float = 1e-4
    grad_tol: float = 1e-8
    max_backtracks: int = 30
    fd_step: float = 1e-4


def shift_gradient_minimize(
    objective,
    theta0: np.ndarray,
    iterations: int,
    cfg: GradConfig = GradConfig(),
) -> OptimizerTrace:
    """Deterministic gradient descent with Armijo backtracking.

    Uses the parameter-shift rule when the objective supports it on all
    slots, otherwise central finite differences. Stops early when the
    gradient norm falls below cfg.grad_tol or no backtracked step
    improves the objective.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    start = time.perf_counter()
    theta = np.array(theta0, dtype=float)
    trace = OptimizerTrace()
    ev = _BestTracker(objective)

    multipliers = getattr(objective, "shift_multipliers", lambda: None)()
    use_shift = multipliers is not None and all(m is not None for m in multipliers)
    trace.metadata["gradient"] = "parameter-shift" if use_shift else "finite-difference"

    f_current = ev(theta)
    _check_finite(f_current, "objective", trace)
    for k in range(iterations):
        if use_shift:
            grad = parameter_shift_gradient(_Tracked(objective, ev), theta)
        else:
            grad = finite_difference_gradient(_Tracked(objective, ev), theta, cfg.fd_step)
        if not np.all(np.isfinite(grad)):
            raise OptimizationError(f"non-finite gradient at iteration {k}", trace)
        gnorm2 = float(grad @ grad)
        if math.sqrt(gnorm2) < cfg.grad_tol:
            trace.records.append(TraceRecord(k, objective.eval_count, f_current, ev.best_value))
            trace.metadata["stopped"] = "gradient-norm"
            break
        step = cfg.initial_step
        accepted = False
        for _ in range(cfg.max_backtracks):
            candidate = theta - step * grad
            f_new = ev(candidate)
            _check_finite(f_new, "objective", trace)
            if f_new <= f_current - cfg.armijo * step * gnorm2:
                theta, f_current, accepted = candidate, f_new, True
                break
            step *= cfg.shrink
        trace.records.append(TraceRecord(k, objective.eval_count, f_current, ev.best_value))
        if not accepted:
            trace.metadata["stopped"] = "line-search-stall"
            break
    ev.finalize(trace, theta, f_current)
    trace.wall_time = time.perf_counter() - start
    return trace


class _Tracked:
    """Expose an objective through a best-tracking evaluator."""

    def __init__(self, objective, tracker: _BestTracker):
        self._objective = objective
        self._tracker = tracker

    def evaluate(self, theta):
        return self._tracker(theta)

    def shift_multipliers(self):
        return self._objective.shift_multipliers()
