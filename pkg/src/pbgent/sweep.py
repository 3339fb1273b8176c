"""Concurrence sweeps over (beta^2, alpha^2 t), figure presets and the
mode-oracle comparison harness.

CSV layout (one header row, LF line endings, floats at 17 significant
digits)::

    family,delta_over_alpha2,beta2,alpha2_t,c_abs,concurrence,source
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .amplitude import ReservoirParams, amplitude_c
from .entanglement import BellFamily, concurrence
from .modes import integrate_modes, kernel_match, oracle_reservoir

__all__ = [
    "SweepSpec",
    "ConcurrenceRecord",
    "SweepError",
    "CSV_HEADER",
    "FIGURES",
    "FigurePreset",
    "parse_grid",
    "run_sweep",
    "records_to_csv",
    "write_csv",
    "run_figure",
    "run_oracle_compare",
    "MAX_ORACLE_MODES",
    "MAX_ORACLE_T",
    "MAX_ORACLE_WORK",
]

CSV_HEADER = ("family", "delta_over_alpha2", "beta2", "alpha2_t", "c_abs", "concurrence", "source")

MAX_ORACLE_MODES = 200_000
MAX_ORACLE_T = 100.0
# n_modes * n_steps; the default comparison uses 10^4 * 4*10^4
MAX_ORACLE_WORK = 2.0e10


class SweepError(RuntimeError):
    """Numerical failure inside a sweep, tagged with the grid point."""


def _strictly_increasing(values) -> bool:
    return all(b > a for a, b in zip(values, values[1:]))


@dataclass(frozen=True)
class SweepSpec:
    family: BellFamily
    delta_over_alpha_sq: float
    beta_sq_grid: tuple
    t_grid: tuple
    oracle: bool = False
    n_modes: int = 10_000
    cutoff_W: float = 1.0e3
    omega_c_ratio: float = 1.0e4
    oracle_dt: float = 2.5e-4

    def __post_init__(self):
        object.__setattr__(self, "family", BellFamily.parse(self.family))
        object.__setattr__(self, "beta_sq_grid", tuple(float(b) for b in self.beta_sq_grid))
        object.__setattr__(self, "t_grid", tuple(float(t) for t in self.t_grid))
        if not self.beta_sq_grid or not self.t_grid:
            raise ValueError("grids must be non-empty")
        if not (_strictly_increasing(self.beta_sq_grid) and _strictly_increasing(self.t_grid)):
            raise ValueError("grids must be strictly increasing")
        if self.beta_sq_grid[0] < 0 or self.beta_sq_grid[-1] > 1:
            raise ValueError("beta^2 grid must lie in [0, 1]")
        if self.t_grid[0] < 0:
            raise ValueError("alpha^2 t grid must be non-negative")

    @property
    def params(self) -> ReservoirParams:
        return ReservoirParams.scaled(self.delta_over_alpha_sq)


@dataclass(frozen=True)
class ConcurrenceRecord:
    family: BellFamily
    delta_over_alpha_sq: float
    beta_sq: float
    alpha_sq_t: float
    c_abs: float
    concurrence: float
    source: str = "analytic"

    def row(self) -> list[str]:
        return [
            self.family.value,
            _fmt(self.delta_over_alpha_sq),
            _fmt(self.beta_sq),
            _fmt(self.alpha_sq_t),
            _fmt(self.c_abs),
            _fmt(self.concurrence),
            self.source,
        ]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def parse_grid(text: str) -> tuple:
    """``start:stop:step`` (inclusive of ``stop``) or a comma-separated list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid {text!r} is not start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError(f"grid {text!r} needs step > 0 and stop >= start")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + i * step, 12) for i in range(count))
    return tuple(float(v) for v in text.split(",") if v.strip())


def _row_records(args):
    family, delta, beta_sq, t_grid, c_abs, source = args
    beta = math.sqrt(beta_sq)
    out = []
    for t, ca in zip(t_grid, c_abs):
        try:
            value = concurrence(family, beta, ca * ca)
        except ValueError as exc:
            raise SweepError(f"{exc} at beta2={beta_sq:g}, alpha2_t={t:g}, source={source}") from exc
        out.append(ConcurrenceRecord(family, delta, beta_sq, t, float(ca), float(value), source))
    return out


def _oracle_abs(spec: SweepSpec) -> np.ndarray:
    t_grid = np.asarray(spec.t_grid)
    t_end = float(t_grid[-1])
    res = oracle_reservoir(spec.params, omega_c=spec.omega_c_ratio, cutoff_W=spec.cutoff_W, n_modes=spec.n_modes)
    sample_every = max(1, int(round(0.01 / spec.oracle_dt)))
    traj = integrate_modes(res, max(t_end, spec.oracle_dt * sample_every), spec.oracle_dt, sample_every=sample_every)
    return np.interp(t_grid, traj.t, np.abs(traj.c1))


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[ConcurrenceRecord]:
    """Concurrence over the full grid, ``beta^2`` outer and ``t`` inner.

    Analytic records come first; with ``spec.oracle`` a second block with
    ``source == "oracle"`` follows, using ``|c1|`` from the mode oracle
    interpolated linearly onto ``t_grid``.
    """
    try:
        c_abs = np.abs(amplitude_c(np.asarray(spec.t_grid), spec.params))
    except (ValueError, OverflowError) as exc:
        raise SweepError(f"amplitude failed for delta/alpha2={spec.delta_over_alpha_sq:g}: {exc}") from exc
    blocks = [("analytic", c_abs)]
    if spec.oracle:
        blocks.append(("oracle", _oracle_abs(spec)))

    tasks = [
        (spec.family, spec.delta_over_alpha_sq, b, spec.t_grid, tuple(values), source)
        for source, values in blocks
        for b in spec.beta_sq_grid
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_row_records, tasks))
    else:
        rows = [_row_records(task) for task in tasks]
    return [record for row in rows for record in row]


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for record in records:
        writer.writerow(record.row())
    return buf.getvalue()


def write_csv(records, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(records_to_csv(records))
    return path


@dataclass(frozen=True)
class FigurePreset:
    kind: str  # "surface" or "lines"
    curves: tuple  # (family, delta_over_alpha2) pairs
    beta_sq_grid: tuple = field(default_factory=lambda: parse_grid("0:1:0.02"))
    t_grid: tuple = field(default_factory=lambda: parse_grid("0:15:0.05"))


FIGURES = {
    1: FigurePreset("surface", (("phi", 1.0),)),
    2: FigurePreset("surface", (("phi", -1.0),)),
    3: FigurePreset("surface", (("phi", -4.0),)),
    4: FigurePreset("surface", (("psi", 1.0),)),
    5: FigurePreset("surface", (("psi", -1.0),)),
    6: FigurePreset("surface", (("psi", -4.0),)),
    7: FigurePreset(
        "lines",
        tuple((fam, d) for fam in ("phi", "psi") for d in (-20.0, -5.0, 0.5)),
        beta_sq_grid=(0.5,),
    ),
}


_SURFACE_SCRIPT = '''"""Surface plot of {csv_name}; needs numpy and matplotlib."""
import csv
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np

here = Path(__file__).resolve().parent
rows = [r for r in csv.DictReader(open(here / "{csv_name}")) if r["source"] == "analytic"]
beta2 = sorted({{float(r["beta2"]) for r in rows}})
times = sorted({{float(r["alpha2_t"]) for r in rows}})
C = np.array([float(r["concurrence"]) for r in rows]).reshape(len(beta2), len(times))
T, B = np.meshgrid(times, beta2)

fig = plt.figure(figsize=(7, 5))
ax = fig.add_subplot(projection="3d")
ax.plot_surface(T, B, C, cmap="viridis", linewidth=0)
ax.set_xlabel(r"$\\alpha^2 t$")
ax.set_ylabel(r"$\\beta^2$")
ax.set_zlabel("concurrence")
ax.set_title("{title}")
fig.savefig(here / "{png_name}", dpi=150)
'''

_LINES_SCRIPT = '''"""Two-panel line plot of {csv_name}; needs matplotlib."""
import csv
from collections import defaultdict
from pathlib import Path

import matplotlib.pyplot as plt

here = Path(__file__).resolve().parent
curves = defaultdict(list)
for r in csv.DictReader(open(here / "{csv_name}")):
    if r["source"] == "analytic":
        curves[(r["family"], float(r["delta_over_alpha2"]))].append(
            (float(r["alpha2_t"]), float(r["concurrence"])))

styles = {{-20.0: "-", -5.0: ":", 0.5: "--"}}
fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
for ax, family, label in zip(axes, ("phi", "psi"),
                             (r"(a) $(|ge\\rangle+|eg\\rangle)/\\sqrt{{2}}$",
                              r"(b) $(|gg\\rangle+|ee\\rangle)/\\sqrt{{2}}$")):
    for (fam, delta), pts in sorted(curves.items()):
        if fam != family:
            continue
        t, c = zip(*pts)
        ax.plot(t, c, styles.get(delta, "-"), color="k", label=rf"$\\delta={{delta:g}}\\alpha^2$")
    ax.set_title(label)
    ax.set_xlabel(r"$\\alpha^2 t$")
axes[0].set_ylabel("concurrence")
axes[0].legend()
fig.tight_layout()
fig.savefig(here / "{png_name}", dpi=150)
'''


def run_figure(
    fig_id: int,
    out_dir,
    *,
    beta_sq_grid=None,
    t_grid=None,
    delta_over_alpha_sq=None,
    family=None,
    oracle: bool = False,
    jobs: int = 1,
    **oracle_settings,
) -> tuple[Path, Path]:
    """Write ``fig<N>.csv`` and ``plot_fig<N>.py`` into ``out_dir``.

    Keyword overrides replace the preset grids; ``delta_over_alpha_sq`` and
    ``family`` only apply to the single-surface figures 1-6.
    """
    if fig_id not in FIGURES:
        raise ValueError(f"figure id must be one of {sorted(FIGURES)}, got {fig_id!r}")
    preset = FIGURES[fig_id]
    curves = preset.curves
    if preset.kind == "surface" and (delta_over_alpha_sq is not None or family is not None):
        fam0, d0 = curves[0]
        curves = ((family or fam0, d0 if delta_over_alpha_sq is None else delta_over_alpha_sq),)

    records = []
    for fam, delta in curves:
        spec = SweepSpec(
            family=fam,
            delta_over_alpha_sq=delta,
            beta_sq_grid=beta_sq_grid if beta_sq_grid is not None else preset.beta_sq_grid,
            t_grid=t_grid if t_grid is not None else preset.t_grid,
            oracle=oracle,
            **oracle_settings,
        )
        records.extend(run_sweep(spec, jobs=jobs))

    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        csv_path = write_csv(records, out / f"fig{fig_id}.csv")
        template = _SURFACE_SCRIPT if preset.kind == "surface" else _LINES_SCRIPT
        fam0, d0 = curves[0]
        title = f"{fam0} family, delta = {d0:g} alpha^2"
        script = template.format(csv_name=csv_path.name, png_name=f"fig{fig_id}.png", title=title)
        script_path = out / f"plot_fig{fig_id}.py"
        script_path.write_text(script, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write figure output to {out}: {exc}") from exc
    return csv_path, script_path


@dataclass
class OracleReport:
    params: ReservoirParams
    runs: list  # dicts with settings and results
    csv_path: Path
    report_path: Path

    @property
    def max_deviation(self) -> float:
        return self.runs[0]["max_deviation"]


def _oracle_run(params, n_modes, cutoff_W, omega_c, t_end, dt, window):
    res = oracle_reservoir(params, omega_c=omega_c, cutoff_W=cutoff_W, n_modes=n_modes)
    tau = np.linspace(max(0.05, 50.0 / cutoff_W), 5.0, 60)
    # compare against the strength the reservoir was built for
    km = kernel_match(res, ReservoirParams(res.alpha_sq, res.detuning), tau)
    sample_every = max(1, int(round(0.01 / dt)))
    traj = integrate_modes(res, t_end, dt, sample_every=sample_every)
    analytic = np.abs(amplitude_c(traj.t, params))
    oracle = np.abs(traj.c1)
    mask = (traj.t >= window[0]) & (traj.t <= window[1])
    dev = np.abs(oracle - analytic)
    return {
        "n_modes": n_modes,
        "cutoff_W": cutoff_W,
        "dt": dt,
        "t": traj.t,
        "oracle_abs": oracle,
        "analytic_abs": analytic,
        "kernel_max_rel_error": km.max_rel_error,
        "max_deviation": float(np.max(dev[mask])) if mask.any() else float("nan"),
        "mean_deviation": float(np.mean(dev[mask])) if mask.any() else float("nan"),
        "max_norm_drift": traj.max_norm_drift,
        "lamb_shift": res.lamb_shift,
    }


def run_oracle_compare(
    params: ReservoirParams,
    out_dir,
    *,
    n_modes: int = 10_000,
    cutoff_W: float = 1.0e3,
    omega_c: float = 1.0e4,
    t_end: float = 10.0,
    dt: float = 2.5e-4,
    window: tuple = (2.0, 10.0),
    refine: bool = False,
) -> OracleReport:
    """Side-by-side ``|c|`` curves from the mode oracle and the closed form.

    ``refine`` adds a second run with ``n_modes`` and ``cutoff_W`` doubled and
    ``dt`` halved. Writes ``oracle_compare.csv`` and ``oracle_report.txt``.
    """
    settings = [(n_modes, cutoff_W, dt)]
    if refine:
        settings.append((2 * n_modes, 2.0 * cutoff_W, dt / 2.0))
    for n, W, step in settings:
        if n > MAX_ORACLE_MODES:
            raise ValueError(f"n_modes={n} exceeds the cap {MAX_ORACLE_MODES}; lower --n-modes")
        if t_end > MAX_ORACLE_T:
            raise ValueError(f"t_end={t_end:g} exceeds the cap {MAX_ORACLE_T:g}")
        work = n * t_end / step
        if work > MAX_ORACLE_WORK:
            raise ValueError(
                f"n_modes * steps = {work:.3g} exceeds {MAX_ORACLE_WORK:.3g}; "
                "reduce --n-modes or --cutoff-w (dt scales with 1/W)"
            )
    dim = params.dimensionless()
    runs = [_oracle_run(dim, n, W, omega_c, t_end, step, window) for n, W, step in settings]

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    base = runs[0]
    csv_path = out / "oracle_compare.csv"
    with open(csv_path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["alpha2_t", "analytic_abs", "oracle_abs", "abs_deviation"])
        for t, a, o in zip(base["t"], base["analytic_abs"], base["oracle_abs"]):
            writer.writerow([_fmt(t), _fmt(a), _fmt(o), _fmt(abs(o - a))])

    lines = [f"delta_over_alpha2 = {dim.delta:.17g}", f"window = {window[0]:g}..{window[1]:g}"]
    for run in runs:
        lines.append(
            "n_modes={n_modes} cutoff_W={cutoff_W:g} dt={dt:g} "
            "kernel_max_rel_error={kernel_max_rel_error:.4g} lamb_shift={lamb_shift:.6g} "
            "max_norm_drift={max_norm_drift:.3g} max_deviation={max_deviation:.6g} "
            "mean_deviation={mean_deviation:.6g}".format(**run)
        )
    report_path = out / "oracle_report.txt"
    report_path.write_bytes(("\n".join(lines) + "\n").encode("ascii"))
    return OracleReport(dim, runs, csv_path, report_path)
