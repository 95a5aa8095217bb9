"""Named numerical checks of the identities and inequalities behind the variational problem."""
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import energy as en
from .errors import DomainError
from .grid import Field, shift_field
from .potentials import bump_on_top, constant_like, node_periods
from .riesz import DROP, apply_values, build_operator
from .solver import SolverConfig, default_init, gaussian, ground_state, nehari_project

EPS = 1e-300


@dataclass(frozen=True)
class CheckReport:
    name: str
    passed: bool
    measured: float
    threshold: float
    details: str = ""
    skipped: bool = False

    def to_json(self):
        d = asdict(self)
        for k in ("measured", "threshold"):
            v = d[k]
            d[k] = v if np.isfinite(v) else str(v)
        return d


def random_field(grid, rng, n_bumps=4, signed=True):
    """Smooth random field: a seeded sum of Gaussian bumps well resolved by the grid."""
    acc = np.zeros(grid.shape)
    for _ in range(n_bumps):
        c = rng.uniform(-grid.L / 6, grid.L / 6, size=grid.dim)
        lo = max(4 * grid.h, grid.L / 24)
        w = rng.uniform(lo, max(lo, grid.L / 10))  # coarse grids get wider, still resolved bumps
        amp = rng.uniform(-1.0, 1.0) if signed else rng.uniform(0.2, 1.0)
        acc += amp * gaussian(grid, c, w).values
    return Field(grid, acc)


def random_pair(grid, rng, signed=True):
    return en.Pair(random_field(grid, rng, signed=signed), random_field(grid, rng, signed=signed))


def _drop(prob):
    return build_operator(prob.grid, prob.alpha, DROP)


def check_semigroup(prob, pair):
    """D computed with the alpha operator against <I_{alpha/2}|u|^p, I_{alpha/2}|v|^q>, all drop policy."""
    d = en.coupling(prob, pair, op=_drop(prob))
    f = en.half_order_coupling(prob, pair)
    measured = abs(d - f) / max(abs(d), EPS)
    return CheckReport("semigroup", measured <= 1e-12, measured, 1e-12, f"D={d:.12e} factorized={f:.12e}")


def cauchy_schwarz_terms(prob, pair):
    op = _drop(prob)
    d = en.coupling(prob, pair, op=op)
    duu = en.self_coupling(prob, pair.u, prob.p, op=op)
    dvv = en.self_coupling(prob, pair.v, prob.q, op=op)
    return d, duu, dvv


def check_cauchy_schwarz(prob, pair):
    d, duu, dvv = cauchy_schwarz_terms(prob, pair)
    bound = duu * dvv * (1 + 1e-10)
    lhs = d * d
    measured = lhs / bound if bound > 0 else 0.0
    return CheckReport(
        "cauchy_schwarz",
        lhs <= bound,
        measured,
        1.0,
        f"D^2={lhs:.6e} bound={duu * dvv:.6e}",
    )


def hls_ratio(prob, v, s):
    """int |I_alpha v|^(Ns/(N - alpha s)) / (int |v|^s)^(N/(N - alpha s))."""
    N, a = prob.dim, prob.alpha
    if not (1 < s < N / a):
        raise DomainError(f"HLS exponent s={s} outside (1, N/alpha) = (1, {N / a})")
    r = N * s / (N - a * s)
    h = prob.grid.cell_volume
    iv = apply_values(prob.riesz, v.values)
    num = h * np.sum(np.abs(iv) ** r)
    den = (h * np.sum(np.abs(v.values) ** s)) ** (N / (N - a * s))
    return float(num / den)


def check_hls_scaling(prob, v, s, lambdas=(0.5, 3.0)):
    base = hls_ratio(prob, v, s)
    worst = max(abs(hls_ratio(prob, v * lam, s) / base - 1.0) for lam in lambdas)
    return CheckReport("hls_scaling", worst <= 1e-10, worst, 1e-10, f"R(v)={base:.6e} s={s}")


def brezis_lieb_defects(prob, width, separations, center=None):
    """defect(d) = |D(u + w_d, v + z_d) - D(u, v) - D(w_d, z_d)| for Gaussian bumps u=v=w=z."""
    grid = prob.grid
    center = np.zeros(grid.dim) if center is None else np.asarray(center, float)
    bump = gaussian(grid, center, width)
    base = en.Pair(bump, bump)
    d0 = en.coupling(prob, base)
    out = []
    for sep in separations:
        k = int(round(sep / grid.h))
        offs = [k] + [0] * (grid.dim - 1)
        moved = shift_field(bump, offs)
        far = en.Pair(moved, moved)
        combo = base + far
        out.append(abs(en.coupling(prob, combo) - d0 - en.coupling(prob, far)))
    return out


def check_brezis_lieb(prob, width=None, separations=None):
    grid = prob.grid
    width = grid.L / 20 if width is None else width
    if separations is None:
        separations = (grid.L / 16, grid.L / 8, grid.L / 4)
    if width > grid.L / 20 + 1e-12 or max(separations) > grid.L / 2:
        raise DomainError("bumps must have width <= L/20 and separations <= L/2")
    defects = brezis_lieb_defects(prob, width, separations)
    decreasing = all(b < a for a, b in zip(defects, defects[1:]))
    ratio = defects[-1] / defects[-2] if defects[-2] > 0 else np.nan
    return CheckReport(
        "brezis_lieb",
        decreasing,
        float(ratio),
        1.0,
        "defects=" + ",".join(f"{d:.4e}" for d in defects) + f" expected ratio 2^(alpha-N)={2.0 ** (prob.alpha - prob.dim):.4f}",
    )


def check_nehari_identity(prob, result):
    r = result.report
    if not result.converged or abs(r.nehari) > 1e-8 * r.normSq:
        return CheckReport("nehari_identity", True, float("nan"), 1e-8, "skipped: pair is not a converged point on the manifold", True)
    measured = abs(r.action - prob.nehari_factor * r.normSq) / abs(r.action)
    return CheckReport("nehari_identity", measured <= 1e-8, measured, 1e-8, f"c0={r.action:.12e}")


def comparison_slack(cfg, result):
    return 10 * cfg.tol_residual * result.report.normSq


def check_comparison(prob_low, prob_high, cfg=None, init=None):
    """c0 with the lower potential must not exceed c0 with the higher one (beyond solver slack)."""
    return solve_comparison(prob_low, prob_high, cfg, init)[0]


def solve_comparison(prob_low, prob_high, cfg=None, init=None):
    cfg = cfg or SolverConfig()
    low = ground_state(prob_low, cfg, init=init)
    high = ground_state(prob_high, cfg, init=init)
    slack = comparison_slack(cfg, high)
    gap = low.c0 - high.c0
    return CheckReport(
        "comparison",
        low.converged and high.converged and gap <= slack,
        gap,
        slack,
        f"c0(low)={low.c0:.10e} c0(high)={high.c0:.10e} strict={high.c0 - low.c0 > slack}",
    ), low, high


def check_gradient_fd(prob, rng, draws=5, eps=1e-5):
    worst = 0.0
    for _ in range(draws):
        pair = random_pair(prob.grid, rng)
        direction = random_pair(prob.grid, rng)
        worst = max(worst, gradient_fd_error(prob, pair, direction, eps))
    return CheckReport("gradient_fd", worst <= 1e-5, worst, 1e-5, f"{draws} draws, eps={eps}")


def gradient_fd_error(prob, pair, direction, eps=1e-5):
    g = en.gradient(prob, pair)
    exact = g.dot(direction)
    plus = en.action(prob, pair + direction * eps).action
    minus = en.action(prob, pair - direction * eps).action
    fd = (plus - minus) / (2 * eps)
    return abs(fd - exact) / max(abs(exact), EPS)


def check_shift_invariance(prob, cfg=None, init=None, k=4):
    """Solve from init and from init shifted by n/k nodes; the levels must agree to 1e-8."""
    return solve_shifted(prob, cfg, init, k)[0]


def lattice_shift(prob, k=4):
    """Offsets (in nodes) of a lattice translation leaving both potentials invariant, or None."""
    grid = prob.grid
    pa, pb = node_periods(prob.potA), node_periods(prob.potB)
    if pa is None or pb is None:
        return None
    offs = []
    for a, b in zip(pa, pb):
        per = math.lcm(a, b)
        # a nontrivial translation: the smallest multiple of the period reaching n/k nodes
        step = max(per, per * (grid.n // k // per))
        if step % grid.n == 0:
            return None
        offs.append(step)
    return offs


def solve_shifted(prob, cfg=None, init=None, k=4):
    cfg = cfg or SolverConfig()
    grid = prob.grid
    init = default_init(grid) if init is None else init
    offs = lattice_shift(prob, k)
    if offs is None:
        a = ground_state(prob, cfg, init=init)
        return CheckReport(
            "shift_invariance", True, float("nan"), 1e-8, "skipped: potentials have no grid-aligned period", True
        ), a, None
    a = ground_state(prob, cfg, init=init)
    b = ground_state(prob, cfg, init=en.Pair(shift_field(init.u, offs), shift_field(init.v, offs)))
    measured = abs(a.c0 - b.c0) / abs(a.c0)
    return CheckReport(
        "shift_invariance",
        a.converged and b.converged and measured <= 1e-8,
        measured,
        1e-8,
        f"c0={a.c0:.12e} shifted={b.c0:.12e} offsets={offs}",
    ), a, b


def check_nehari_projection(prob, pair):
    _, proj = nehari_project(prob, pair)
    rep = en.action(prob, proj)
    measured = abs(rep.nehari) / rep.normSq
    return CheckReport("nehari_projection", measured <= 1e-10, measured, 1e-10, "|P|/||(u,v)||^2 after projection")


def run_suite(prob, cfg=None, seed=0):
    """Run every registered check; failures are data, never exceptions."""
    cfg = cfg or SolverConfig()
    rng = np.random.default_rng(seed)
    grid = prob.grid
    reports = []

    def guard(name, fn):
        try:
            out = fn()
        except Exception as exc:  # noqa: BLE001 -- a crashing check is a failed check
            out = CheckReport(name, False, float("nan"), float("nan"), f"error: {exc!r}")
        reports.append(out)
        return out

    pair = random_pair(grid, rng)
    guard("semigroup", lambda: check_semigroup(prob, pair))
    guard("cauchy_schwarz", lambda: check_cauchy_schwarz(prob, pair))
    s_hls = 0.5 * (1 + grid.dim / prob.alpha)
    guard("hls_scaling", lambda: check_hls_scaling(prob, random_field(grid, rng, signed=False), s_hls))
    guard("brezis_lieb", lambda: check_brezis_lieb(prob))
    guard("nehari_projection", lambda: check_nehari_projection(prob, random_pair(grid, rng)))
    guard("gradient_fd", lambda: check_gradient_fd(prob, rng))

    solved = {}

    def nehari():
        solved["base"] = ground_state(prob, cfg)
        return check_nehari_identity(prob, solved["base"])

    guard("nehari_identity", nehari)

    def comparison():
        low = prob.with_potentials(potA=constant_like(prob.potA))
        high = prob.with_potentials(potA=bump_on_top(prob.potA, 1.0))
        return check_comparison(low, high, cfg)

    guard("comparison", comparison)
    guard("shift_invariance", lambda: check_shift_invariance(prob, cfg))
    return reports


def reports_to_json(reports):
    return json.dumps([r.to_json() for r in reports], indent=2)


def format_table(reports):
    width = max(len(r.name) for r in reports)
    lines = [f"{'check':<{width}}  status  {'measured':>12}  {'threshold':>10}  details"]
    for r in reports:
        status = "SKIP" if r.skipped else ("PASS" if r.passed else "FAIL")
        lines.append(f"{r.name:<{width}}  {status:<6}  {r.measured:>12.4e}  {r.threshold:>10.3e}  {r.details}")
    return "\n".join(lines)
