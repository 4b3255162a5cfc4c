"""Command-line front end.

Every command writes one CSV table.  The ``#`` preamble records the fully
resolved configuration as a canonical argument list, so a file can be
regenerated with ``thermocasimir $(config line)``; see :func:`config_from_csv`.

Exit status: 0 success, 1 usage or I/O error, 2 numerical non-convergence
(the CSV is still written, with ``status`` set to ``nonconverged``).
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import math
import shlex
import sys
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import __version__
from . import engine, materials as mat, reflection as refl, thermo
from .errors import CasimirError, ConvergenceError, ValidationError
from .units import ev_to_radsec

log = logging.getLogger("thermocasimir")

COMMANDS = ("energy", "pressure", "tempcorr", "entropy", "nernst", "compare", "reflect",
            "epsilon", "kk")
MODELS = ("ideal", "plasma", "drude", "tabulated", "impedance-ns", "impedance-as",
          "impedance-ir", "impedance-matched")
PRESCRIPTIONS = ("auto", "drude-limit", "plasma-like", "ideal-like")

# which material flags each model accepts
_MODEL_PARAMS = {
    "ideal": set(),
    "plasma": {"omega_p"},
    "drude": {"omega_p", "omega_tau"},
    "tabulated": set(),
    "impedance-ir": {"omega_p"},
    "impedance-ns": {"omega_p", "omega_tau"},
    "impedance-as": {"omega_p", "vf_over_c", "v_prefactor"},
    "impedance-matched": {"omega_p", "omega_tau", "vf_over_c", "v_prefactor", "ns_upper",
                          "as_upper"},
}
_FLAG_NAMES = {
    "omega_p": "--wp-ev/--wp-rads",
    "omega_tau": "--wt-ev/--wt-rads",
    "vf_over_c": "--vf-over-c",
    "v_prefactor": "--v-prefactor",
    "ns_upper": "--ns-upper-rads",
    "as_upper": "--as-upper-rads",
}


class UsageError(CasimirError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    model: str | None = None
    prescription: str | None = None
    omega_p: float | None = None
    omega_tau: float | None = None
    vf_over_c: float | None = None
    v_prefactor: float | None = None
    ns_upper: float | None = None
    as_upper: float | None = None
    table: str | None = None
    high_exponent: float | None = None
    a_values: tuple = ()
    T: float | None = None
    T_grid: tuple = ()
    zeta_values: tuple = ()
    y_values: tuple = ()
    n0: bool = False
    h: float | None = None
    rel_tol: float | None = None
    abs_tol: float | None = None
    tail_tol: float | None = None
    max_terms: int | None = None
    max_subdivisions: int | None = None
    output: str = field(default="-", compare=False)
    svg: str | None = field(default=None, compare=False)

    def settings(self):
        return engine.QuadratureSettings(rel_tol=self.rel_tol, abs_tol=self.abs_tol,
                                         matsubara_tail_tol=self.tail_tol,
                                         max_terms=self.max_terms,
                                         max_subdivisions=self.max_subdivisions)

    def params(self):
        return mat.MaterialParams(self.omega_p, self.omega_tau or 0.0, self.vf_over_c or 0.0,
                                  self.v_prefactor or 1.0)

    def to_argv(self):
        """Canonical argument list; parsing it gives back an equal config."""
        out = [self.command]

        def add(flag, value):
            if value is None or value == () or value is False:
                return
            if value is True:
                out.append(flag)
            elif isinstance(value, tuple):
                out.extend([flag, ",".join(repr(float(v)) for v in value)])
            elif isinstance(value, float):
                out.extend([flag, repr(value)])
            else:
                out.extend([flag, str(value)])

        add("--model", self.model)
        add("--prescription", self.prescription)
        add("--wp-rads", self.omega_p)
        add("--wt-rads", self.omega_tau)
        add("--vf-over-c", self.vf_over_c)
        add("--v-prefactor", self.v_prefactor)
        add("--ns-upper-rads", self.ns_upper)
        add("--as-upper-rads", self.as_upper)
        add("--table", self.table)
        add("--high-exponent", self.high_exponent)
        add("--a", self.a_values)
        add("--T", self.T)
        add("--T-grid", self.T_grid)
        add("--zeta", self.zeta_values)
        add("--y", self.y_values)
        add("--n0", self.n0)
        add("--h", self.h)
        add("--rel-tol", self.rel_tol)
        add("--abs-tol", self.abs_tol)
        add("--tail-tol", self.tail_tol)
        add("--max-terms", self.max_terms)
        add("--max-subdivisions", self.max_subdivisions)
        return out


def _values(text):
    """``v1,v2,...`` or a geometric range ``start:stop:num``."""
    try:
        if ":" in text:
            start, stop, num = text.split(":")
            start, stop, num = float(start), float(stop), int(num)
            if start <= 0 or stop <= 0 or num < 1:
                raise ValueError
            return tuple(float(v) for v in np.geomspace(start, stop, num))
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected 'v1,v2,...' or 'start:stop:num' (positive), got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser():
    parser = _Parser(prog="thermocasimir",
                     description="Thermal Casimir free energy between two metal plates.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--model", choices=MODELS)
        p.add_argument("--prescription", choices=PRESCRIPTIONS)
        wp = p.add_mutually_exclusive_group()
        wp.add_argument("--wp-ev", type=float)
        wp.add_argument("--wp-rads", type=float)
        wt = p.add_mutually_exclusive_group()
        wt.add_argument("--wt-ev", type=float)
        wt.add_argument("--wt-rads", type=float)
        p.add_argument("--vf-over-c", type=float)
        p.add_argument("--v-prefactor", type=float)
        p.add_argument("--ns-upper-rads", type=float)
        p.add_argument("--as-upper-rads", type=float)
        p.add_argument("--table")
        p.add_argument("--high-exponent", type=float)
        p.add_argument("--a", type=_values, help="separations in m: list or start:stop:num")
        p.add_argument("--a-range", type=_values, dest="a_range")
        p.add_argument("--T", type=float, help="temperature in K")
        p.add_argument("--T-grid", type=_values, dest="T_grid")
        p.add_argument("--zeta", "--zeta-range", type=_values, dest="zeta")
        p.add_argument("--y", type=_values, help="integration variable y (or q with --n0), 1/m")
        p.add_argument("--n0", action="store_true",
                       help="reflect: zero-frequency coefficients from the prescription")
        p.add_argument("--h", type=float, help="entropy stencil step in K")
        p.add_argument("--rel-tol", type=float)
        p.add_argument("--abs-tol", type=float)
        p.add_argument("--tail-tol", type=float)
        p.add_argument("--max-terms", type=int)
        p.add_argument("--max-subdivisions", type=int)
        p.add_argument("--out", default="-")
        p.add_argument("--svg")
    return parser


def parse_and_validate(argv):
    """Parse ``argv`` into a fully resolved :class:`RunConfig`.

    Raises :class:`UsageError` on unknown or conflicting flags.
    """
    ns = build_parser().parse_args(list(argv))
    cmd = ns.command

    given = {
        "omega_p": ev_to_radsec(ns.wp_ev) if ns.wp_ev is not None else ns.wp_rads,
        "omega_tau": ev_to_radsec(ns.wt_ev) if ns.wt_ev is not None else ns.wt_rads,
        "vf_over_c": ns.vf_over_c,
        "v_prefactor": ns.v_prefactor,
        "ns_upper": ns.ns_upper_rads,
        "as_upper": ns.as_upper_rads,
    }
    model = ns.model
    prescription = ns.prescription

    if cmd == "kk":
        if model not in (None, "tabulated"):
            raise UsageError(f"kk works on --table data; --model {model} conflicts with it")
        model = "tabulated"
    if cmd == "compare":
        if model is not None or prescription is not None:
            raise UsageError("compare runs its four fixed methods; drop --model/--prescription")
        allowed = {"omega_p", "omega_tau", "vf_over_c", "v_prefactor", "ns_upper", "as_upper"}
    else:
        if model is None:
            raise UsageError(f"{cmd} needs --model")
        allowed = set(_MODEL_PARAMS[model])

    if model == "tabulated":
        if not ns.table:
            raise UsageError("--model tabulated needs --table")
        if prescription in (None, "auto") and cmd not in ("epsilon", "kk", "reflect"):
            raise UsageError("--model tabulated needs an explicit --prescription "
                             "(drude-limit, plasma-like or ideal-like)")
        if prescription == "plasma-like":
            allowed.add("omega_p")
    elif ns.table:
        raise UsageError(f"--table is only used with --model tabulated, not --model {model}")
    if ns.high_exponent is not None and model != "tabulated":
        raise UsageError("--high-exponent only applies to --table data")

    if cmd in ("epsilon",) and model is not None and model not in ("plasma", "drude",
                                                                   "tabulated"):
        raise UsageError(f"epsilon needs a dielectric model; --model {model} is not one")

    for key, value in given.items():
        if value is not None and key not in allowed:
            what = f"--model {model}" if model else cmd
            if model == "ideal" and key == "omega_p":
                raise UsageError("omega_p is meaningless for --model ideal; drop --wp-ev/--wp-rads")
            raise UsageError(f"{_FLAG_NAMES[key]} is meaningless for {what}")

    # editable gold-like defaults for parameters the model needs but were not given
    defaults = {"omega_p": mat.GOLD.omega_p, "omega_tau": mat.GOLD.omega_tau,
                "vf_over_c": mat.GOLD.vf_over_c, "v_prefactor": 1.0}
    resolved = {}
    for key in ("omega_p", "omega_tau", "vf_over_c", "v_prefactor"):
        if key in allowed and not (model == "tabulated"):
            resolved[key] = given[key] if given[key] is not None else defaults[key]
        else:
            resolved[key] = given[key]
    if model == "tabulated" and prescription == "plasma-like" and resolved["omega_p"] is None:
        raise UsageError("--prescription plasma-like needs --wp-ev/--wp-rads")
    if (given["ns_upper"] is None) != (given["as_upper"] is None):
        raise UsageError("give both --ns-upper-rads and --as-upper-rads, or neither")

    if cmd not in ("kk", "epsilon") and prescription is None and not (
            cmd == "reflect" and not ns.n0) and cmd != "compare":
        prescription = "auto"

    a_values = ns.a or ns.a_range or ()
    if ns.a and ns.a_range:
        raise UsageError("use either --a or --a-range")
    T_grid = ns.T_grid or ()

    needs_a = cmd in ("energy", "pressure", "tempcorr", "entropy", "nernst", "compare")
    if needs_a and not a_values:
        raise UsageError(f"{cmd} needs --a (or --a-range)")
    if needs_a and any(not a > 0 for a in a_values):
        raise UsageError("separations must be positive")
    if cmd in ("energy", "pressure", "tempcorr", "compare") and ns.T is None:
        raise UsageError(f"{cmd} needs --T")
    if cmd == "entropy" and ns.T is None and not T_grid:
        raise UsageError("entropy needs --T or --T-grid")
    if cmd == "nernst":
        if len(a_values) != 1:
            raise UsageError("nernst takes a single --a")
        T_grid = T_grid or (1.0, 2.0, 5.0, 10.0, 20.0, 50.0)
    if cmd in ("reflect", "epsilon", "kk") and not ns.zeta and not ns.n0:
        raise UsageError(f"{cmd} needs --zeta (list or start:stop:num)")
    if cmd == "reflect" and not ns.y:
        raise UsageError("reflect needs --y")
    if ns.n0 and cmd != "reflect":
        raise UsageError("--n0 only applies to reflect")
    if ns.T is not None and not ns.T > 0:
        raise UsageError("--T must be positive")

    precise = cmd in ("entropy", "nernst")
    base = thermo.ENTROPY_SETTINGS if precise else engine.DEFAULT_SETTINGS
    cfg = RunConfig(
        command=cmd, model=None if cmd == "compare" else model, prescription=prescription,
        omega_p=resolved["omega_p"], omega_tau=resolved["omega_tau"],
        vf_over_c=resolved["vf_over_c"], v_prefactor=resolved["v_prefactor"],
        ns_upper=given["ns_upper"], as_upper=given["as_upper"],
        table=ns.table,
        high_exponent=(ns.high_exponent if ns.high_exponent is not None
                       else (3.0 if model == "tabulated" else None)),
        a_values=tuple(a_values),
        T=ns.T if cmd != "nernst" else None,
        T_grid=tuple(T_grid) if cmd in ("entropy", "nernst") else (),
        zeta_values=tuple(ns.zeta or ()), y_values=tuple(ns.y or ()), n0=ns.n0,
        h=ns.h,
        rel_tol=ns.rel_tol if ns.rel_tol is not None else base.rel_tol,
        abs_tol=ns.abs_tol if ns.abs_tol is not None else base.abs_tol,
        tail_tol=ns.tail_tol if ns.tail_tol is not None else base.matsubara_tail_tol,
        max_terms=ns.max_terms if ns.max_terms is not None else base.max_terms,
        max_subdivisions=(ns.max_subdivisions if ns.max_subdivisions is not None
                          else base.max_subdivisions),
        output=ns.out, svg=ns.svg,
    )
    try:
        cfg.settings()
        if cfg.omega_p is not None:
            cfg.params()
        if cfg.ns_upper is not None:
            mat.RegimeBreakpoints(cfg.ns_upper, cfg.as_upper)
    except ValidationError as exc:
        raise UsageError(str(exc)) from exc
    return cfg


def ingest_optical_table(path, high_exponent=3.0):
    """Read a two-column ``omega eps2`` text file into an :class:`OpticalTable`.

    Lines starting with ``#`` and blank lines are skipped.  Errors name the
    offending line.
    """
    omega, eps2, lines = [], [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            if len(parts) != 2:
                raise ValidationError(f"expected 2 columns, found {len(parts)}", lineno)
            try:
                w, e = float(parts[0]), float(parts[1])
            except ValueError:
                raise ValidationError(f"cannot parse numbers from {text!r}", lineno) from None
            omega.append(w)
            eps2.append(e)
            lines.append(lineno)
    table = mat.OpticalTable.from_arrays(omega, eps2, high_exponent=high_exponent,
                                         source=str(path), line_numbers=lines)
    log.info("read %d rows from %s, omega in [%.4g, %.4g] rad/s", len(table), path,
             table.omega[0], table.omega[-1])
    return table


def build_model(cfg):
    if cfg.model == "ideal":
        return mat.IdealMetal()
    if cfg.model == "tabulated":
        return mat.Tabulated(ingest_optical_table(cfg.table, cfg.high_exponent))
    p = cfg.params()
    if cfg.model == "plasma":
        return mat.Plasma(p)
    if cfg.model == "drude":
        return mat.Drude(p)
    if cfg.model == "impedance-ir":
        return mat.ImpedanceInfrared(p)
    if cfg.model == "impedance-ns":
        return mat.ImpedanceNormalSkin(p)
    if cfg.model == "impedance-as":
        return mat.ImpedanceAnomalousSkin(p)
    return mat.ImpedanceMatched(p, _breakpoints(cfg))


def _breakpoints(cfg):
    if cfg.ns_upper is None:
        return None
    return mat.RegimeBreakpoints(cfg.ns_upper, cfg.as_upper)


def build_prescription(cfg):
    name = cfg.prescription
    if name in (None, "auto"):
        return refl.Auto()
    if name == "drude-limit":
        return refl.DrudeLimit()
    if name == "ideal-like":
        return refl.IdealLike()
    return refl.PlasmaLike(cfg.omega_p)


def _fmt(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.11e}"


class _Table:
    def __init__(self, columns):
        self.columns = list(columns) + ["status"]
        self.rows = []
        self.failed = False

    def add(self, *values, status="ok"):
        if status != "ok":
            self.failed = True
        self.rows.append([_fmt(v) for v in values] + [status])


def _guarded(table, n_cols, fn, prefix):
    """Run ``fn``; on non-convergence record a marked row instead."""
    try:
        table.add(*prefix, *fn())
    except ConvergenceError as exc:
        log.error("%s", exc)
        partial = exc.partial
        first = partial.value if hasattr(partial, "value") else partial
        vals = [first if first is not None else math.nan] + [math.nan] * (n_cols - 1)
        table.add(*prefix, *vals, status="nonconverged")


def _execute(cfg):
    settings = cfg.settings() if cfg.command not in ("reflect", "epsilon", "kk") else None
    cmd = cfg.command
    if cmd == "compare":
        return _run_compare(cfg, settings)
    model = build_model(cfg)
    rule = build_prescription(cfg)

    if cmd == "energy":
        t = _Table(["a_m", "T_K", "free_energy_J_m2", "n_terms", "quad_error_J_m2",
                    "tail_bound_J_m2"])
        for a in cfg.a_values:
            def fn(a=a):
                r = engine.free_energy(a, cfg.T, model, rule, settings)
                return r.value, r.n_terms, r.quad_error, r.tail_bound
            _guarded(t, 4, fn, (a, cfg.T))
    elif cmd == "pressure":
        t = _Table(["a_m", "T_K", "pressure_Pa", "pressure_fd_Pa", "discrepancy", "n_terms",
                    "quad_error_Pa", "tail_bound_Pa"])
        for a in cfg.a_values:
            def fn(a=a):
                r = engine.pressure(a, cfg.T, model, rule, settings)
                return (r.analytic, r.finite_difference, r.discrepancy, r.n_terms,
                        r.quad_error, r.tail_bound)
            _guarded(t, 6, fn, (a, cfg.T))
    elif cmd == "tempcorr":
        t = _Table(["a_m", "T_K", "delta_F_J_m2", "relative", "free_energy_J_m2",
                    "zero_T_energy_J_m2", "error_J_m2"])
        for a in cfg.a_values:
            def fn(a=a):
                r = thermo.temperature_correction(a, cfg.T, model, rule, settings)
                return r.delta_F, r.relative, r.free_energy, r.zero_T, r.error
            _guarded(t, 5, fn, (a, cfg.T))
    elif cmd == "entropy":
        t = _Table(["a_m", "T_K", "entropy_J_m2K", "stencil_h_K", "richardson_error_J_m2K"])
        temps = cfg.T_grid or (cfg.T,)
        for a in cfg.a_values:
            for T in temps:
                def fn(a=a, T=T):
                    r = thermo.entropy(a, T, model, rule, settings, cfg.h)
                    if r.warning:
                        log.warning("%s", r.warning)
                    return r.S, r.stencil_h, r.richardson_error
                _guarded(t, 3, fn, (a, T))
    elif cmd == "nernst":
        t = _Table(["a_m", "T_K", "entropy_J_m2K", "richardson_error_J_m2K", "in_fit",
                    "intercept_J_m2K", "intercept_error_J_m2K", "exponent", "passed"])
        a = cfg.a_values[0]
        try:
            r = thermo.nernst_check(a, model, rule, settings, cfg.T_grid)
            for T, S, e in zip(r.T, r.S, r.richardson_error):
                t.add(a, T, S, e, T in r.fit_T, r.intercept, r.intercept_error, r.exponent,
                      r.passed)
        except ConvergenceError as exc:
            log.error("%s", exc)
            for T in cfg.T_grid:
                t.add(a, T, *[math.nan] * 2, False, *[math.nan] * 3, False,
                      status="nonconverged")
    elif cmd == "reflect":
        if cfg.n0:
            t = _Table(["q_per_m", "r_par_sq", "r_perp_sq"])
            for q in cfg.y_values:
                pair = refl.n0_term_coefficients(rule, q, model)
                t.add(q, *pair)
        else:
            t = _Table(["zeta_rad_s", "y_per_m", "r_par_sq", "r_perp_sq"])
            for z in cfg.zeta_values:
                for y in cfg.y_values:
                    t.add(z, y, *_reflect(model, z, y))
    elif cmd == "epsilon":
        t = _Table(["zeta_rad_s", "eps"])
        eps = mat.eps_imag_axis(model, np.array(cfg.zeta_values))
        for z, e in zip(cfg.zeta_values, eps):
            t.add(z, e)
    else:  # kk
        t = _Table(["zeta_rad_s", "eps", "eps_error"])
        res = mat.kk_transform(model.table, np.array(cfg.zeta_values))
        for z, e, err in zip(cfg.zeta_values, res.value, res.error):
            t.add(z, e, err)
    return t


def _reflect(model, zeta, y):
    if model.family == "ideal":
        return 1.0, 1.0
    if model.family == "dielectric":
        return refl.fresnel_dielectric(mat.eps_imag_axis(model, zeta), zeta, y)
    return refl.fresnel_impedance(mat.impedance_imag_axis(model, zeta), zeta, y)


def _run_compare(cfg, settings):
    t = _Table(["a_m", "method", "omega_c_rad_s", "n0_prescription", "free_energy_J_m2",
                "zero_T_energy_J_m2", "delta_F_J_m2", "relative", "n_terms", "regimes"])
    params = cfg.params()
    bp = _breakpoints(cfg)
    for a in cfg.a_values:
        try:
            rows = thermo.prescription_comparison([a], cfg.T, params, settings, bp)
        except ConvergenceError as exc:
            log.error("%s", exc)
            for method in thermo.METHODS:
                t.add(a, method, math.nan, "", *[math.nan] * 4, 0, "", status="nonconverged")
            continue
        for r in rows:
            t.add(r.a, r.method, r.omega_c, r.prescription, r.free_energy, r.zero_T,
                  r.delta_F, r.relative, r.n_terms, r.regimes)
    return t


def render_csv(cfg, table):
    buf = io.StringIO()
    buf.write(f"# thermocasimir {__version__}\n")
    buf.write(f"# command: {cfg.command}\n")
    buf.write(f"# argv: {shlex.join(cfg.to_argv())}\n")
    record = {k: v for k, v in asdict(cfg).items() if k not in ("output", "svg")}
    buf.write(f"# config: {json.dumps(record, sort_keys=True)}\n")
    buf.write(",".join(table.columns) + "\n")
    for row in table.rows:
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def config_from_csv(path):
    """Rebuild the :class:`RunConfig` recorded in a CSV preamble."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            if line.startswith("# argv: "):
                return parse_and_validate(shlex.split(line[len("# argv: "):]))
    raise ValidationError(f"{path} has no '# argv:' preamble line")


def _write_svg(cfg, table, path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    x_col = 1 if table.columns[0] == "a_m" and cfg.command in ("entropy", "nernst") else 0
    y_col = 2 if cfg.command not in ("epsilon", "kk") else 1
    if cfg.command == "reflect":
        y_col = 2 if not cfg.n0 else 1
    if cfg.command == "compare":
        x_col, y_col = 0, 7
    xs, ys, labels = [], [], []
    for row in table.rows:
        try:
            xs.append(float(row[x_col]))
            ys.append(float(row[y_col]))
            labels.append(row[1] if cfg.command == "compare" else "")
        except ValueError:
            continue
    plt.rcParams["svg.hashsalt"] = "thermocasimir"
    fig, ax = plt.subplots(figsize=(6, 4))
    if cfg.command == "compare":
        for method in thermo.METHODS:
            pts = [(x, y) for x, y, lab in zip(xs, ys, labels) if lab == method]
            if pts:
                ax.plot(*zip(*pts), marker="o", label=method)
        ax.legend()
    else:
        ax.plot(xs, ys, marker="o")
    ax.set_xlabel(table.columns[x_col])
    ax.set_ylabel(table.columns[y_col])
    if xs and min(xs) > 0 and max(xs) / min(xs) > 50:
        ax.set_xscale("log")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def run(cfg):
    """Execute ``cfg`` and write its CSV.  Returns the exit status."""
    try:
        table = _execute(cfg)
    except (CasimirError, OSError) as exc:
        log.error("%s", exc)
        return 1
    text = render_csv(cfg, table)
    try:
        if cfg.output == "-":
            sys.stdout.write(text)
        else:
            with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        if cfg.svg:
            _write_svg(cfg, table, cfg.svg)
    except OSError as exc:
        log.error("cannot write output: %s", exc)
        return 1
    return 2 if table.failed else 0


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s",
                        stream=sys.stderr)
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_and_validate(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
