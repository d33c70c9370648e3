"""Randomized checks of the identities and inequalities the solver relies on.

Each ``check_*`` function draws its own instances from ``rng`` and returns a
:class:`CheckResult` holding the worst observed value against its tolerance.
:func:`run_verification` runs all of them with independent, seed-derived
streams and is what ``tomoml verify`` prints.
"""

from dataclasses import dataclass

import numpy as np

from .hermitian import HermitianOperator
from .instances import random_density, random_instance, random_traceless
from .likelihood import (
    ObjectiveContext,
    directional_derivative,
    gradient,
    log_likelihood,
    stationarity,
)
from .quantum import Dataset, DensityMatrix, Povm
from .solver import (
    check_rhobar_subproblem,
    combined_direction,
    compute_directions,
    diluted_step,
    rrhor_step,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tolerance: float
    trials: int
    detail: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        text = (
            f"{self.name:<22} {status}  worst={self.worst:.3e}  "
            f"tol={self.tolerance:.0e}  trials={self.trials}"
        )
        return f"{text}  {self.detail}" if self.detail else text


def _rho_bar_terms(ctx, rho):
    """``Tr(R (rho_bar - rho))`` and ``Tr((rho - rho_bar) rho^-1 (rho - rho_bar))``."""
    m = rho.matrix
    r = gradient(ctx, rho).matrix
    rr = r @ m
    step = 0.5 * (rr + rr.conj().T) - m
    lhs = float(np.vdot(step, r).real)
    rhs = float(np.trace(step @ np.linalg.solve(m, step)).real)
    return lhs, rhs


def random_commuting_instance(rng, dim_max=8, dim_min=2):
    """Instance whose gradient commutes with the state: effects and state are
    all diagonal in one random basis."""
    d = int(rng.integers(dim_min, dim_max + 1))
    n_effects = int(rng.integers(2, 2 * d + 1))
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    u, _ = np.linalg.qr(g)
    weights = rng.random((n_effects, d)) + 0.05
    weights /= weights.sum(axis=0)
    effects = [u @ np.diag(w) @ u.conj().T for w in weights]
    effects[-1] = effects[-1] + (np.eye(d) - sum(effects))
    lam = rng.random(d) + 0.05
    lam /= lam.sum()
    rho = DensityMatrix(u @ np.diag(lam) @ u.conj().T)
    ctx = ObjectiveContext(Povm(effects), Dataset(rng.dirichlet(np.ones(n_effects))))
    return ctx, rho


def check_trace_r_rho(rng, trials=200, dim_max=8):
    worst = 0.0
    for _ in range(trials):
        ctx, rho = random_instance(rng, dim_max)
        worst = max(worst, abs(stationarity(ctx, rho).trace_r_rho - 1.0))
    return CheckResult("trace-R-rho", worst <= 1e-10, worst, 1e-10, trials)


def check_trace_rrr(rng, trials=200, dim_max=8):
    """``Tr(R rho R) >= 1``, with equality exactly at stationary points.

    Half of the instances are stationary by construction.
    """
    worst = np.inf
    mismatches = 0
    for i in range(trials):
        ctx, rho = random_instance(rng, dim_max, stationary=i % 2 == 1)
        rep = stationarity(ctx, rho)
        gap = rep.trace_rrr - 1.0
        worst = min(worst, gap)
        if (abs(gap) <= 1e-8) != (rep.residual_extremal <= 1e-10):
            mismatches += 1
    passed = worst >= -1e-10 and mismatches == 0
    return CheckResult(
        "trace-RrhoR", passed, worst, 1e-10, trials, f"iff-mismatches={mismatches}"
    )


def check_rhobar_kkt(rng, trials=200, dim_max=8, commuting=False):
    gen = random_commuting_instance if commuting else random_instance
    worst = 0.0
    for _ in range(trials):
        ctx, rho = gen(rng, dim_max)
        worst = max(worst, check_rhobar_subproblem(ctx, rho))
    name = "rhobar-kkt-commuting" if commuting else "rhobar-kkt"
    return CheckResult(name, worst <= 1e-9, worst, 1e-9, trials)


def check_rhobar_norm(rng, trials=200, dim_max=8, commuting=False):
    gen = random_commuting_instance if commuting else random_instance
    worst = 0.0
    for _ in range(trials):
        ctx, rho = gen(rng, dim_max)
        lhs, rhs = _rho_bar_terms(ctx, rho)
        worst = max(worst, abs(lhs - rhs))
    name = "rhobar-norm-commuting" if commuting else "rhobar-weighted-norm"
    return CheckResult(name, worst <= 1e-9, worst, 1e-9, trials)


def check_ascent(rng, trials=200, dim_max=8):
    """``Tr(R Dbar) = Tr(R rho R) - 1 > 0`` and ``Tr(R Dtilde) > 0`` off stationarity."""
    worst = 0.0
    nonpositive = 0
    for _ in range(trials):
        ctx, rho = random_instance(rng, dim_max)
        pair = compute_directions(ctx, rho)
        r = gradient(ctx, rho)
        s_bar = directional_derivative(ctx, rho, pair.d_bar)
        s_tilde = directional_derivative(ctx, rho, pair.d_tilde)
        worst = max(worst, abs(s_bar - (pair.trace_rrr - 1.0)))
        if s_bar <= 0 or s_tilde <= 0 or np.linalg.eigvalsh(r.matrix)[0] < -1e-10:
            nonpositive += 1
    return CheckResult(
        "ascent-directions",
        worst <= 1e-10 and nonpositive == 0,
        worst,
        1e-10,
        trials,
        f"non-ascent={nonpositive}",
    )


def check_gradient(rng, trials=100, dim_max=8, h=1e-6):
    """Directional derivative against a central finite difference of F."""
    worst = 0.0
    for _ in range(trials):
        ctx, rho = random_instance(rng, dim_max)
        d = random_traceless(rho.dim, rng)
        analytic = directional_derivative(ctx, rho, d)
        plus = HermitianOperator._trusted(rho.matrix + h * d.matrix)
        minus = HermitianOperator._trusted(rho.matrix - h * d.matrix)
        fd = (log_likelihood(ctx, plus) - log_likelihood(ctx, minus)) / (2 * h)
        worst = max(worst, abs(fd - analytic) / abs(analytic))
    return CheckResult("gradient-fd", worst <= 1e-5, worst, 1e-5, trials)


def check_path(rng, trials=200, dim_max=8):
    """``rho + t D(t)`` reproduces the diluted update for t in [1e-3, 1e3]."""
    worst = 0.0
    for _ in range(trials):
        ctx, rho = random_instance(rng, dim_max)
        t = float(10.0 ** rng.uniform(-3, 3))
        pair = compute_directions(ctx, rho)
        along = rho.matrix + t * combined_direction(pair, t).matrix
        worst = max(worst, float(np.linalg.norm(along - diluted_step(ctx, rho, t).matrix)))
    return CheckResult("path-identity", worst <= 1e-12, worst, 1e-12, trials)


def check_limits(rng, trials=200, dim_max=8):
    worst_small = worst_large = 0.0
    for _ in range(trials):
        ctx, rho = random_instance(rng, dim_max)
        small = diluted_step(ctx, rho, 1e-9).matrix
        large = diluted_step(ctx, rho, 1e6).matrix
        worst_small = max(worst_small, float(np.linalg.norm(small - rho.matrix)))
        worst_large = max(
            worst_large, float(np.linalg.norm(large - rrhor_step(ctx, rho).matrix))
        )
    return CheckResult(
        "path-limits",
        worst_small <= 1e-8 and worst_large <= 1e-5,
        max(worst_small, worst_large),
        1e-5,
        trials,
        f"t=1e-9:{worst_small:.1e} t=1e6:{worst_large:.1e}",
    )


def check_concavity(rng, trials=200, dim_max=8):
    worst = np.inf
    for _ in range(trials):
        ctx, rho1 = random_instance(rng, dim_max)
        rho2 = random_density(rho1.dim, rng)
        lam = float(rng.uniform(0.01, 0.99))
        mix = HermitianOperator._trusted(lam * rho1.matrix + (1 - lam) * rho2.matrix)
        gap = log_likelihood(ctx, mix) - (
            lam * log_likelihood(ctx, rho1) + (1 - lam) * log_likelihood(ctx, rho2)
        )
        worst = min(worst, gap)
    return CheckResult("concavity", worst >= -1e-10, worst, 1e-10, trials)


FAMILIES = (
    check_trace_r_rho,
    check_trace_rrr,
    check_rhobar_kkt,
    check_rhobar_norm,
    check_ascent,
    check_gradient,
    check_path,
    check_limits,
    check_concavity,
)


def run_verification(trials=200, seed=0, dim_max=4):
    """Run every check family; the commuting variants of the rho_bar checks are
    appended after the general ones."""
    streams = np.random.SeedSequence(seed).spawn(len(FAMILIES) + 2)
    results = []
    for fam, ss in zip(FAMILIES, streams):
        results.append(fam(np.random.default_rng(ss), trials=trials, dim_max=dim_max))
    results.append(
        check_rhobar_kkt(np.random.default_rng(streams[-2]), trials, dim_max, commuting=True)
    )
    results.append(
        check_rhobar_norm(np.random.default_rng(streams[-1]), trials, dim_max, commuting=True)
    )
    return results
