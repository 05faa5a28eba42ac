"""Experiment drivers behind the ``mml`` command.

Each ``run_*`` function takes an :class:`~mml.config.ExperimentConfig` and
returns a :class:`RunResult`, a list of flat rows plus a summary.  Writers
turn a result into versioned CSV or JSON; both are byte-identical for
identical inputs.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .arith import cached_mobius
from .config import ExperimentConfig
from .errors import ConfigurationError, DomainError
from .kernels import KernelContext, g_kernel, g_sup_bound, g_tail_bound, jt_check
from .mollifier import make_mollifier
from .moments import moment_length_average, mollified_moment, second_moment_zeta
from .zeta import RS_MAX_CORRECTIONS, RS_SWITCHOVER, ZeroHypothesis, first_zeros, hardy_z_rs, siegel_theta, zeta_em

__all__ = [
    "ChainReport",
    "RunResult",
    "run",
    "run_levinson",
    "run_chain",
    "run_jt_check",
    "run_meanvalue",
    "run_zeros",
    "run_gsupport",
    "write_result",
    "format_csv",
    "format_json",
    "SCHEMA_LINE",
    "EULER_GAMMA",
]

SCHEMA_LINE = "# mml-schema 1"
EULER_GAMMA = 0.5772156649015329


@dataclass
class RunResult:
    command: str
    columns: list[str]
    rows: list[dict]
    summary: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ChainReport:
    x: float
    T1: float
    T2: float
    beta0: float
    lhs: float
    rhs: float
    err_estimate: float
    converged: bool

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs

    def row(self) -> dict:
        return {
            "x": self.x, "T1": self.T1, "T2": self.T2, "beta0": self.beta0,
            "lhs": self.lhs, "rhs": self.rhs, "ratio": self.ratio,
            "err_estimate": self.err_estimate, "converged": self.converged,
        }


def _mobius(cfg: ExperimentConfig, length: float):
    return cached_mobius(max(2, math.ceil(length)), cfg.cache_dir)


def _write_zeta_grid(cfg: ExperimentConfig, name: str, T1: float, T2: float) -> None:
    """zeta(1/2 + it) on a unit grid over [T1, T2] with a per-point error estimate."""
    if cfg.cache_dir is None:
        return
    t = np.arange(math.floor(T1), math.ceil(T2) + 1, dtype=np.float64)
    low = t < RS_SWITCHOVER
    re = np.empty(t.shape)
    im = np.zeros(t.shape)
    err = np.empty(t.shape)
    if np.any(low):
        z, e = zeta_em(0.5 + 1j * t[low], cfg.zeta, return_error=True)
        re[low], im[low], err[low] = z.real, z.imag, e
    if np.any(~low):
        k = cfg.zeta.rs_corrections
        z = hardy_z_rs(t[~low], k)
        err[~low] = np.abs(z - hardy_z_rs(t[~low], k + 2 if k + 2 <= RS_MAX_CORRECTIONS else k - 2))
        zc = z * np.exp(-1j * siegel_theta(t[~low]))
        re[~low], im[~low] = zc.real, zc.imag
    method = np.where(low, "euler-maclaurin", "riemann-siegel")
    lines = [SCHEMA_LINE, "t,re,im,method,err"]
    for k in range(t.size):
        lines.append(f"{_fmt(t[k])},{_fmt(re[k])},{_fmt(im[k])},{method[k]},{_fmt(err[k])}")
    path = Path(cfg.cache_dir) / f"zeta_grid_{name}.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------- drivers

def run_levinson(cfg: ExperimentConfig) -> RunResult:
    """I_{T^theta}(0, T) / T against 1 + 1/theta."""
    if cfg.window != "from_zero":
        raise ConfigurationError("levinson runs need window = from_zero")
    for T in cfg.T_list:
        for theta in cfg.theta_list:
            cfg.check_guardrail(T, T**theta)
    rows = []
    for T in cfg.T_list:
        for theta in cfg.theta_list:
            x = T**theta
            spec = make_mollifier(x, _mobius(cfg, x))
            res = mollified_moment(spec, 0.0, T, cfg.quadrature, cfg.zeta)
            target = 1 + 1 / theta
            ratio = res.value / T
            rows.append({
                "theta": theta, "T": T, "x": x, "I_over_T": ratio, "target": target,
                "rel_gap": abs(ratio - target) / target, "err_estimate": res.err_estimate / T,
                "panels_used": res.panels_used, "evaluations": res.evaluations, "converged": res.converged,
            })
    if cfg.T_list:
        _write_zeta_grid(cfg, "levinson", 0.0, max(cfg.T_list))
    return RunResult("levinson", list(rows[0]) if rows else [], rows)


def run_chain(cfg: ExperimentConfig) -> RunResult:
    """Both sides of the lower-bound chain for every (x, window)."""
    if cfg.beta0 != 0.5:
        raise DomainError("run_chain evaluates the real zeta function and only accepts beta0 = 1/2")
    reports = []
    for T1, T2 in cfg.windows():
        for x in cfg.x_list:
            if x < 2:
                raise DomainError("chain needs x >= 2")
            cfg.check_guardrail(T2, x)
            res = moment_length_average(x, T1, T2, cfg.quadrature, _mobius(cfg, x), cfg.zeta)
            L2 = math.log(x) ** 2
            lhs = x ** (2 * cfg.beta0) * math.log(T1 + 2) / (1 + T1) ** 3 + T2 * math.log(T2 + 2) / x
            reports.append(ChainReport(x, T1, T2, cfg.beta0, lhs, L2 * res.value, L2 * res.err_estimate,
                                       res.converged))
    if reports:
        _write_zeta_grid(cfg, "chain", 0.0, max(r.T2 for r in reports))
    rows = [r.row() for r in reports]
    summary = {"max_ratio": max(r.ratio for r in reports)} if reports else {}
    return RunResult("chain", list(rows[0]) if rows else [], rows, summary)


def run_jt_check(cfg: ExperimentConfig) -> RunResult:
    """J_t(x) three ways over x_list x t_list with rho0 the first zero."""
    ctx0 = ZeroHypothesis()
    rows = []
    top = max(cfg.x_list) if cfg.x_list else 2
    mobius = _mobius(cfg, top)
    for x in cfg.x_list:
        cfg.check_guardrail(0.0, x)
        for t in cfg.t_list:
            rep = jt_check(x, KernelContext(float(t), ctx0), cfg.contour, mobius)
            rows.append(rep)
    summary = {"max_rel_dev": max((r["max_rel_dev"] for r in rows), default=0.0)}
    columns = ["x", "t", "j_mellin_re", "j_mellin_im", "j_convolution_re", "j_convolution_im",
               "j_residue_re", "j_residue_im", "residue_term_re", "residue_term_im",
               "dev_mellin_residue", "dev_mellin_convolution", "dev_convolution_residue", "max_rel_dev"]
    return RunResult("jt-check", columns, rows, summary)


def classical_mean_value(T: float) -> float:
    """T (log(T / 2 pi) + 2 gamma - 1)."""
    return T * (math.log(T / (2 * math.pi)) + 2 * EULER_GAMMA - 1)


def run_meanvalue(cfg: ExperimentConfig) -> RunResult:
    """int |zeta(1/2 + it)|^2 over each window against T log(T + 2)."""
    rows = []
    for T1, T2 in cfg.windows():
        cfg.check_guardrail(T2, 1.0)
        res = second_moment_zeta(T1, T2, cfg.quadrature, cfg.zeta)
        scale = T2 * math.log(T2 + 2)
        classical = classical_mean_value(T2) - (classical_mean_value(T1) if T1 > 0 else 0.0)
        rows.append({
            "T1": T1, "T": T2, "integral": res.value, "T_log_T": scale, "ratio": res.value / scale,
            "classical": classical, "rel_to_classical": res.value / classical - 1,
            "err_estimate": res.err_estimate, "converged": res.converged,
        })
    if cfg.T_list:
        _write_zeta_grid(cfg, "meanvalue", 0.0, max(T2 for _, T2 in cfg.windows()))
    return RunResult("meanvalue", list(rows[0]) if rows else [], rows)


def run_zeros(cfg: ExperimentConfig) -> RunResult:
    rows = [{"index": k + 1, "gamma": g} for k, g in enumerate(first_zeros(cfg.count, cfg.zeta))]
    return RunResult("zeros", ["index", "gamma"], rows)


def run_gsupport(cfg: ExperimentConfig) -> RunResult:
    """|g_t(u)| on the sample points.  For u <= 1 the bound column holds the
    per-t constant B = max |G_t| on Re w = 0; for u > 1 it is the truncation
    tail bound of the Re w = 3 contour."""
    rows = []
    gc = cfg.g_contour
    for t in cfg.t_list:
        ctx = KernelContext(float(t))
        B = g_sup_bound(ctx, gc)
        tail0 = g_tail_bound(ctx, gc, 0.0)
        tail3 = g_tail_bound(ctx, gc, 3.0)
        for u in cfg.u_list:
            val = g_kernel(float(u), ctx, gc)
            inside = u <= 1
            err = tail0 if inside else tail3 * u**-3.0
            rows.append({"u": float(u), "t": float(t), "abs_g": abs(val), "err_estimate": err,
                         "bound": B if inside else 0.0, "sup_G": B})
    return RunResult("gsupport", ["u", "t", "abs_g", "err_estimate", "bound", "sup_G"], rows)


_RUNNERS = {
    "levinson": run_levinson,
    "chain": run_chain,
    "jt-check": run_jt_check,
    "meanvalue": run_meanvalue,
    "zeros": run_zeros,
    "gsupport": run_gsupport,
}


def run(cfg: ExperimentConfig) -> RunResult:
    return _RUNNERS[cfg.command](cfg)


# ---------------------------------------------------------------- output

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".15g")
    return str(v)


def _flat(row: dict) -> dict:
    out = {}
    for k, v in row.items():
        if isinstance(v, (list, tuple)) and len(v) == 2:
            out[f"{k}_re"], out[f"{k}_im"] = v
        else:
            out[k] = v
    return out


def format_csv(result: RunResult) -> str:
    buf = io.StringIO()
    buf.write(SCHEMA_LINE + "\n")
    buf.write(",".join(result.columns) + "\n")
    for row in result.rows:
        flat = _flat(row)
        buf.write(",".join(_fmt(flat[c]) for c in result.columns) + "\n")
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    return v


def format_json(result: RunResult, cfg: ExperimentConfig) -> str:
    doc = {
        "schema": 1,
        "version": __version__,
        "command": result.command,
        "config": _jsonable(cfg.as_dict()),
        "rows": _jsonable(result.rows),
        "summary": _jsonable(result.summary),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_result(result: RunResult, cfg: ExperimentConfig) -> str:
    """Render in ``cfg.format`` and write to ``cfg.output`` if set."""
    text = format_csv(result) if cfg.format == "csv" else format_json(result, cfg)
    if cfg.output:
        path = Path(cfg.output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    return text
