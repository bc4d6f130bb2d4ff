"""Command-line front end.

Every subcommand writes a CSV whose leading ``#!`` lines echo the complete
configuration; passing such a file back with ``--config`` reproduces the run.
Plain ``#`` lines in config files are comments.
"""

from dataclasses import asdict, dataclass, fields
import csv
import math
import os
import sys

import click
import numpy as np

from . import __version__
from .bell import CorrelationEngine, OptimizerBudget, chsh_maximize
from .entanglement import GridSpec, entropy_purity_trace
from .epr import overlap_lattice
from .errors import DeltaTrapError, NumericalError, ValidationError
from .phasespace import GROUND_GRID, PhaseGrid, wigner_ground_state, wigner_relative
from .spectrum import TrapConfig, spectrum_table
from .wavepacket import InitialState, interaction_energy, norm_defect, project_initial

CONFIG_PREFIX = "#!"


@dataclass(frozen=True)
class RunConfig:
    gamma_tilde: float = 0.5
    rho: float = 6.0
    tmax: float = 2.0 * math.pi
    steps: int = 600
    grid_n: int = 256
    grid_l: float | None = None
    basis_max: int = 400
    trunc_eps: float = 1e-8
    restarts: int = 32
    seed: int = 0
    output_path: str = "out.csv"

    def __post_init__(self):
        for name in ("gamma_tilde", "rho", "tmax", "trunc_eps"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(name, "must be finite")
        if self.rho < 0:
            raise ValidationError("rho", "must be >= 0")
        if self.tmax < 0:
            raise ValidationError("tmax", "must be >= 0")
        if self.steps < 1:
            raise ValidationError("steps", "must be >= 1")
        if self.grid_n < 16:
            raise ValidationError("grid_n", "must be >= 16")
        if self.grid_l is not None and not (math.isfinite(self.grid_l) and self.grid_l > 0):
            raise ValidationError("grid_l", "must be finite and > 0")
        if self.basis_max < 4:
            raise ValidationError("basis_max", "must be >= 4")
        if not self.trunc_eps > 0:
            raise ValidationError("trunc_eps", "must be > 0")
        if self.restarts < 1:
            raise ValidationError("restarts", "must be >= 1")

    def times(self):
        return np.linspace(0.0, self.tmax, self.steps)


_FIELD_TYPES = {"gamma_tilde": float, "rho": float, "tmax": float, "steps": int,
                "grid_n": int, "grid_l": float, "basis_max": int, "trunc_eps": float,
                "restarts": int, "seed": int, "output_path": str}
_ALIASES = {"gamma": "gamma_tilde", "output": "output_path"}


def _convert(key, text, types):
    if text in ("", "None"):
        return None
    try:
        return types[key](text)
    except ValueError:
        raise ValidationError(key, f"cannot parse {text!r}") from None


def read_config(path, extra_types=None):
    """Parse key=value lines (or the ``#!`` header of an output CSV)."""
    types = dict(_FIELD_TYPES, **(extra_types or {}))
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ValidationError("config", str(exc)) from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if line.startswith(CONFIG_PREFIX):
            line = line[len(CONFIG_PREFIX):].strip()
        elif not line or line.startswith("#"):
            continue
        if "=" not in line:
            # first data row of a CSV ends the header
            if out:
                break
            raise ValidationError("config", f"line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = _ALIASES.get(key, key)
        if key in ("command", "version"):
            continue
        if key not in types:
            raise ValidationError(key, f"unknown config key (line {lineno})")
        out[key] = _convert(key, value, types)
    return out


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(path, command, settings, columns, rows):
    path = os.fspath(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"{CONFIG_PREFIX} command={command}\n")
        fh.write(f"{CONFIG_PREFIX} version={__version__}\n")
        for key, value in settings.items():
            fh.write(f"{CONFIG_PREFIX} {key}={'' if value is None else _fmt(value)}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


_PLOTS = {
    "spectrum": "plot datafile using 1:4 with points pt 7 ps 0.4 title 'E_r'",
    "evolve": "plot datafile using 1:2 with lines title 'E_int'",
    "entropy": ("set multiplot layout 2,1\n"
                "plot datafile using 1:2 with lines title 'S'\n"
                "plot datafile using 1:3 with lines title 'E_int'\n"
                "unset multiplot"),
    "wigner": ("set view map\nset dgrid3d\n"
               "splot datafile using 1:2:3 with pm3d title 'W'"),
    "chsh": "plot datafile using 1:2 with lines title 'C_max', 2 title 'local bound'",
    "overlap": ("set view map\nset dgrid3d\n"
                "splot datafile using 1:2:3 with pm3d title 'overlap'"),
}


def write_plotscript(csv_path, command):
    base, _ = os.path.splitext(os.fspath(csv_path))
    gp = base + ".gp"
    with open(gp, "w", encoding="utf-8") as fh:
        fh.write(f"# gnuplot script for {os.path.basename(csv_path)}\n")
        fh.write("set datafile separator ','\nset datafile commentschars '#'\n")
        fh.write(f"datafile = '{os.path.basename(csv_path)}'\nset key autotitle columnhead\n")
        fh.write(_PLOTS[command] + "\n")
    return gp


def _common(fn):
    opts = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False),
                     help="key=value file; flags override it."),
        click.option("--gamma", type=float, help="Scaled interaction strength."),
        click.option("--rho", type=float, help="Scaled initial separation."),
        click.option("--tmax", type=float, help="Final scaled time."),
        click.option("--steps", type=int, help="Number of time samples."),
        click.option("--grid-n", type=int, help="Grid points per axis."),
        click.option("--grid-l", type=float, help="Grid half-width."),
        click.option("--basis-max", type=int, help="Maximum number of modes."),
        click.option("--trunc-eps", type=float, help="Truncation target for 1 - sum |c|^2."),
        click.option("--restarts", type=int, help="Optimizer restarts (chsh)."),
        click.option("--seed", type=int, help="Seed for random starts (chsh)."),
        click.option("--output", "-o", type=click.Path(dir_okay=False), help="Output CSV."),
        click.option("--emit-plotscript", is_flag=True, help="Also write a gnuplot script."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def build_config(command, kw, need_gamma=True, extra_types=None):
    """Merge defaults, config file and flags.

    Returns ``(RunConfig, extras, given)`` where ``extras`` holds non-RunConfig
    keys from the file and ``given`` the names set by file or flags.
    """
    from_file = read_config(kw["config_path"], extra_types) if kw.get("config_path") else {}
    flags = {"gamma_tilde": kw.get("gamma"), "rho": kw.get("rho"), "tmax": kw.get("tmax"),
             "steps": kw.get("steps"), "grid_n": kw.get("grid_n"), "grid_l": kw.get("grid_l"),
             "basis_max": kw.get("basis_max"), "trunc_eps": kw.get("trunc_eps"),
             "restarts": kw.get("restarts"), "seed": kw.get("seed"),
             "output_path": kw.get("output")}
    merged = dict(from_file)
    merged.update({k: v for k, v in flags.items() if v is not None})
    if need_gamma and merged.get("gamma_tilde") is None:
        raise ValidationError("gamma_tilde", "required (--gamma or a config file)")
    if merged.get("output_path") is None:
        merged["output_path"] = f"{command}.csv"
    base = {f.name for f in fields(RunConfig)}
    cfg = RunConfig(**{k: v for k, v in merged.items() if k in base and v is not None})
    extras = {k: v for k, v in merged.items() if k not in base}
    return cfg, extras, {k for k, v in merged.items() if v is not None}


def _finish(command, cfg, settings, columns, rows, plotscript):
    write_csv(cfg.output_path, command, settings, columns, rows)
    if plotscript:
        write_plotscript(cfg.output_path, command)
    click.echo(f"wrote {len(rows)} rows to {cfg.output_path}")


def _state(cfg):
    return project_initial(TrapConfig(cfg.gamma_tilde), InitialState(cfg.rho),
                           n_modes=cfg.basis_max, trunc_eps=cfg.trunc_eps)


@click.group()
@click.version_option(__version__, prog_name="deltatrap")
def cli():
    """Two atoms with contact interaction in a harmonic trap."""


def _parse_sweep(text):
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise ValidationError("sweep", "expected lo:hi:count") from None
    if n < 1:
        raise ValidationError("sweep", "count must be >= 1")
    return lo, hi, n


@cli.command()
@_common
@click.option("--sweep", type=str, help="Gamma sweep lo:hi:count.")
@click.option("--count", type=int, help="Levels per gamma (default 8).")
def spectrum(**kw):
    """Lowest relative-motion levels, at one gamma or over a sweep."""
    extra = {"sweep": str, "count": int}
    cfg, extras, given = build_config("spectrum", kw, need_gamma=False, extra_types=extra)
    sweep = kw["sweep"] or extras.get("sweep")
    count = kw["count"] or extras.get("count") or 8
    if count < 1:
        raise ValidationError("count", "must be >= 1")
    if sweep:
        lo, hi, n = _parse_sweep(sweep)
        gammas = np.linspace(lo, hi, n)
    else:
        if "gamma_tilde" not in given:
            raise ValidationError("gamma_tilde", "required (--gamma, --sweep or a config file)")
        gammas = [cfg.gamma_tilde]
    rows = spectrum_table(gammas, count)
    settings = dict(asdict(cfg), sweep=sweep, count=count)
    _finish("spectrum", cfg, settings, ["gamma", "parity", "k", "energy"], rows,
            kw["emit_plotscript"])


@cli.command()
@_common
def evolve(**kw):
    """Interaction energy and norm defect along the time grid."""
    cfg, _, _ = build_config("evolve", kw)
    state = _state(cfg)
    t = cfg.times()
    rows = zip(t, interaction_energy(state, t), norm_defect(state, t))
    _finish("evolve", cfg, asdict(cfg), ["t", "E_int", "norm_defect"], list(rows),
            kw["emit_plotscript"])


@cli.command()
@_common
def entropy(**kw):
    """Entanglement entropy (nats), interaction energy and purity."""
    cfg, _, _ = build_config("entropy", kw)
    state = _state(cfg)
    grid = GridSpec(cfg.grid_n, cfg.grid_l or GridSpec.for_packet(cfg.rho).half_width)
    t = cfg.times()
    s, purity = entropy_purity_trace(state, t, grid)
    rows = zip(t, s, interaction_energy(state, t), purity)
    _finish("entropy", cfg, asdict(cfg), ["t", "S", "E_int", "purity"], list(rows),
            kw["emit_plotscript"])


@cli.command()
@_common
@click.option("--time", "time_", type=float, help="Scaled time of the packet.")
@click.option("--ground", is_flag=True, help="Ground state instead of the packet.")
def wigner(**kw):
    """Wigner function of the relative motion, long format y, p, W."""
    cfg, extras, _ = build_config("wigner", kw, extra_types={"time": float, "ground": int})
    ground = bool(kw["ground"] or extras.get("ground"))
    time_ = kw["time_"] if kw["time_"] is not None else extras.get("time")
    if not ground and time_ is None:
        raise ValidationError("time", "give --time or --ground")
    if ground:
        default = GROUND_GRID
        grid = PhaseGrid(kw["grid_n"] or default.n, kw["grid_l"] or default.y_max)
        w = wigner_ground_state(TrapConfig(cfg.gamma_tilde), grid)
    else:
        grid = PhaseGrid(cfg.grid_n, cfg.grid_l or 12.0)
        w = wigner_relative(_state(cfg), time_, grid)
    rows = [(y, p, w.values[i, j]) for i, y in enumerate(w.y) for j, p in enumerate(w.p)]
    settings = dict(asdict(cfg), time=time_, ground=int(ground))
    _finish("wigner", cfg, settings, ["y", "p", "W"], rows, kw["emit_plotscript"])


@cli.command()
@_common
def chsh(**kw):
    """Maximal CHSH sum along the time grid."""
    cfg, _, _ = build_config("chsh", kw)
    state = _state(cfg)
    grid = GridSpec(cfg.grid_n, cfg.grid_l or GridSpec.for_packet(cfg.rho).half_width)
    engine = CorrelationEngine(state, grid)
    budget = OptimizerBudget(restarts=cfg.restarts)
    rows = []
    for t in cfg.times():
        res = chsh_maximize(state, t, budget, cfg.seed, engine=engine)
        rows.append((t, res.value, *res.setting.as_vector(), res.converged))
    cols = ["t", "C_max", "a1", "b1", "a1p", "b1p", "a2", "b2", "a2p", "b2p", "converged"]
    _finish("chsh", cfg, asdict(cfg), cols, rows, kw["emit_plotscript"])


@cli.command()
@_common
@click.option("--time", "time_", type=float, help="Scaled time of the packet.")
def overlap(**kw):
    """Overlap with EPR states on a (Y_r, P_c) lattice."""
    cfg, extras, _ = build_config("overlap", kw, extra_types={"time": float})
    time_ = kw["time_"] if kw["time_"] is not None else extras.get("time")
    if time_ is None:
        raise ValidationError("time", "required")
    half = cfg.grid_l or cfg.rho + 4.0
    yv = np.linspace(-half, half, cfg.grid_n)
    pv = np.linspace(-4.0, 4.0, cfg.grid_n)
    ov = overlap_lattice(_state(cfg), time_, yv, pv)
    rows = [(y, p, ov[i, j]) for i, y in enumerate(yv) for j, p in enumerate(pv)]
    _finish("overlap", cfg, dict(asdict(cfg), time=time_), ["Y_r", "P_c", "overlap"], rows,
            kw["emit_plotscript"])


def main(argv=None):
    """Entry point; maps validation errors to exit 1 and numerical failures to exit 2."""
    try:
        cli.main(args=argv, prog_name="deltatrap", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except (click.UsageError, click.BadParameter) as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except ValidationError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except NumericalError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return 2
    except DeltaTrapError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
