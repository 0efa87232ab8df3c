"""Verification suites behind ``hypercs verify``.

Each suite returns a list of :class:`Check`; a report is one line per check.
Nothing time- or host-dependent is written, so reports are byte-identical
across runs with the same configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from hypercs import eigenfun, fockstate, momentproblem, stats
from hypercs.specfun import bessel_I1

SUITES = ("eigen", "state", "statistics", "moments", "nonuniqueness")


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    threshold: float
    passed: bool
    relation: str = "<="

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{self.name:<48} {self.value:+.6e} {self.relation} "
            f"{self.threshold:+.6e} {status}"
        )


def below(name, value, threshold, strict=False):
    ok = value < threshold if strict else value <= threshold
    return Check(name, float(value), float(threshold), bool(ok), "<" if strict else "<=")


def above(name, value, threshold, strict=False):
    ok = value > threshold if strict else value >= threshold
    return Check(name, float(value), float(threshold), bool(ok), ">" if strict else ">=")


@dataclass(frozen=True)
class VerifyConfig:
    r_values: tuple[int, ...] = (1, 2, 3)
    tail_tol: float = 1e-12
    quad: momentproblem.QuadConfig = field(default_factory=momentproblem.QuadConfig)


# ---------------------------------------------------------------------------


def suite_eigen(cfg: VerifyConfig) -> list[Check]:
    out = []
    worst = 0.0
    for r in range(1, 6):
        for x in (0.01, 1.0, 10.0, 50.0):
            res = eigenfun.ode_residual(r, x, rel_tol=cfg.tail_tol)
            e = eigenfun.eval_E(r, x, rel_tol=cfg.tail_tol)
            worst = max(worst, abs(res) / max(1.0, abs(e)))
    out.append(below("eigen.ode_residual.max_rel", worst, 1e-10))

    # the ODE identity holds term by term, so it cannot see truncation;
    # compare the truncated series with a 40-digit reference instead
    worst = 0.0
    for r in range(1, 6):
        for x in (0.01, 1.0, 10.0, 50.0):
            e = eigenfun.eval_E(r, x, rel_tol=cfg.tail_tol)
            with mpmath.workdps(40):
                ref = float(mpmath.mpf(x) ** r * mpmath.hyper([], list(range(2, r + 2)), x))
            worst = max(worst, abs(e - ref) / ref)
    out.append(below("eigen.series_truncation.max_rel", worst, 1e-10))

    bad = 0
    for r in range(1, 6):
        expect = [0] * r + [math.factorial(r)]
        bad += eigenfun.derivatives_at_zero(r) != expect
    out.append(below("eigen.initial_conditions.mismatches", bad, 0))

    worst = 0.0
    for x in np.linspace(0.0, 50.0, 200):
        e = eigenfun.eval_E(1, x)
        b = math.sqrt(x) * bessel_I1(2 * math.sqrt(x))
        worst = max(worst, abs(e - b) / max(1.0, e))
    out.append(below("eigen.bessel_identity.max_rel", worst, 1e-12))
    return out


def suite_state(cfg: VerifyConfig) -> list[Check]:
    out = []
    zs = (1.0, 2j, -1.5 + 0.5j)
    worst_norm = 0.0
    worst_eig = 0.0
    for r in cfg.r_values:
        for z in zs:
            st = fockstate.build_state(r, z, cfg.tail_tol)
            worst_norm = max(worst_norm, abs(st.norm() ** 2 - 1.0))
            res = fockstate.eigen_residual(r, z, cfg.tail_tol)
            worst_eig = max(worst_eig, res / max(1.0, abs(z)))
    out.append(below("state.norm_defect.max", worst_norm, cfg.tail_tol + 1e-14))
    out.append(below("state.eigen_residual.max_scaled", worst_eig, 1e-9))

    worst = 0.0
    for r in cfg.r_values:
        for x in (0.5, 2.0, 10.0, 100.0):
            series = fockstate.normalization_N(r, x)
            direct = stats._fock_power_sum(r, x, 0, tail_tol=1e-16)
            worst = max(worst, abs(series - direct) / direct)
    out.append(below("state.normalization_two_routes.max_rel", worst, 1e-12))

    bad = 0
    for r in range(1, 7):
        for m in range(-5, 21):
            prod = math.prod(m - k for k in range(1, r + 1))
            bad += fockstate.stirling_f(r, m) != prod
            bad += fockstate.stirling_f_unsigned(r, m) != prod
    out.append(below("state.stirling_identities.mismatches", bad, 0))

    worst = 0.0
    st = fockstate.build_state(2, 1.0 + 1.0j, 1e-12)
    for t in (0.3, 1.0, 2 * math.pi, 17.0):
        worst = max(worst, abs(fockstate.time_evolve(st, t).norm() - st.norm()))
    out.append(below("state.time_evolution_norm_drift", worst, 1e-15))
    return out


def suite_statistics(cfg: VerifyConfig) -> list[Check]:
    out = []
    xs_grid = (0.5, 2.0, 8.0, 15.0)
    worst_q = 0.0
    worst_pp = 0.0
    for r in cfg.r_values:
        for x in xs_grid:
            worst_q = max(worst_q, abs(stats.mandel_Q(r, x) - stats.mandel_Q_moments(r, x)))
            for p in (1, 2, 3):
                d = stats.expectation_pp(r, x, p)
                direct = _falling_moment(r, x, p)
                worst_pp = max(worst_pp, abs(d - direct) / abs(direct))
    out.append(below("statistics.mandel_two_routes.max_abs", worst_q, 1e-10))
    out.append(below("statistics.expectation_pp_two_routes.max_rel", worst_pp, 1e-10))

    worst = 0.0
    for r in cfg.r_values:
        total = math.fsum(stats.probability_P(r, k, 4.0) for k in range(r, r + 61))
        worst = max(worst, abs(total - 1.0))
    out.append(below("statistics.probability_normalization", worst, 1e-12))

    xs = np.linspace(0.0, 20.0, 401)[1:]
    q = np.array([[stats.mandel_Q(r, x) for r in cfg.r_values] for x in xs])
    out.append(below("statistics.mandel_max_on_(0,20]", q.max(), 0.0, strict=True))
    ordering = np.diff(np.abs(q), axis=1)
    out.append(above("statistics.mandel_|Q|_gap_in_r.min", ordering.min(), 0.0, strict=True))

    peaks = [_p_excited_peak(r) for r in cfg.r_values]
    interior = all(p is not None for p in peaks)
    out.append(above("statistics.fig3_single_interior_max", float(interior), 1.0))
    if interior:
        out.append(above("statistics.fig3_peak_shift.min", float(np.diff(peaks).min()), 0.0, strict=True))

    squeeze = min(stats.quadrature_variances(1, math.sqrt(x))[0] for x in np.linspace(0, 20, 401))
    out.append(below("statistics.fig7_min_varX_r1", squeeze, 0.5, strict=True))

    side = np.linspace(-3.0, 3.0, 61)
    worst = math.inf
    for re in side:
        for im in side:
            vx, vp = stats.quadrature_variances(1, complex(re, im))
            worst = min(worst, math.sqrt(vx * vp))
    out.append(above("statistics.fig8_9_min_dX_dP", worst, 0.5))
    return out


def _falling_moment(r, x, p):
    # direct Fock sum of k(k-1)...(k-p+1) P_r(k, x)
    acc = []
    k = r
    while True:
        acc.append(math.perm(k, p) * stats.probability_P(r, k, x))
        if k > r + 10 and acc[-1] < 1e-20 * max(acc):
            return math.fsum(acc)
        k += 1


def _p_excited_peak(r, n_points=2001):
    # single interior maximum of P_r(r+1, x) on a log grid
    xs = np.logspace(-3, 4, n_points)
    vals = np.array([stats.probability_P(r, r + 1, x) for x in xs])
    signs = np.sign(np.diff(vals))
    changes = np.count_nonzero(np.diff(signs) != 0)
    i = int(np.argmax(vals))
    if changes != 1 or i in (0, len(xs) - 1):
        return None
    return float(xs[i])


def suite_moments(cfg: VerifyConfig) -> list[Check]:
    out = []
    for r in cfg.r_values:
        worst = 0.0
        for n in range(9):
            worst = max(worst, momentproblem.verify_moment(r, n, cfg.quad).rel_error)
        out.append(below(f"moments.r{r}.n0-8.max_rel", worst, 1e-6))
    for r in cfg.r_values:
        spec = cfg.quad.spec(r)
        xs = np.logspace(-4, math.log10(50.0), 60)
        w = [momentproblem.weight_W(spec, x, adaptive=True) for x in xs]
        out.append(above(f"moments.r{r}.weight_min_on_[1e-4,50]", min(w), 0.0, strict=True))
        w4, w2, w0 = (momentproblem.weight_W(spec, x) for x in (1e-4, 1e-2, 1.0))
        growth = min(w4 - w2, w2 - w0)
        out.append(above(f"moments.r{r}.singular_growth_toward_0", growth, 0.0, strict=True))
    return out


def suite_nonuniqueness(cfg: VerifyConfig) -> list[Check]:
    out = []
    for r in cfg.r_values:
        rep = momentproblem.nonuniqueness_report(r)
        out.append(above(f"nonuniqueness.r{r}.carleman_exponent", rep.carleman.exponent, 1.1, strict=True))
        out.append(above(f"nonuniqueness.r{r}.min_psi_second", rep.min_psi_second, -1e-6))
        out.append(
            above(f"nonuniqueness.r{r}.verdict_non-unique", float(rep.verdict == "non-unique"), 1.0)
        )
    return out


_RUNNERS = {
    "eigen": suite_eigen,
    "state": suite_state,
    "statistics": suite_statistics,
    "moments": suite_moments,
    "nonuniqueness": suite_nonuniqueness,
}


def run_suite(name: str, cfg: VerifyConfig | None = None) -> list[Check]:
    cfg = cfg or VerifyConfig()
    names = SUITES if name == "all" else (name,)
    checks = []
    for n in names:
        checks.extend(_RUNNERS[n](cfg))
    return checks


def format_report(name: str, checks: list[Check]) -> str:
    lines = [f"# hypercs verify suite={name}"]
    lines += [c.line() for c in checks]
    failed = sum(not c.passed for c in checks)
    lines.append(f"# {len(checks)} checks, {failed} failed")
    return "\n".join(lines) + "\n"
