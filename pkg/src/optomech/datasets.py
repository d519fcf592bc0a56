"""Parameter scans, figure datasets, and the cross-system comparison table.

Output contract: comma-separated values with a header line naming the
columns, every number rendered with 17 significant digits, plus a sidecar
"<path>.meta" file of sorted "key = value" lines carrying the parameter
values and normalizers.  Identical inputs produce byte-identical files
regardless of worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import mate as mate_mod
from . import mos as mos_mod
from . import msi as msi_mod
from . import noise as noise_mod
from .constants import C_LIGHT
from .elements import CONSTRAINT_TOL, ElementSpec, synthetic_response
from .errors import ConfigError, OptomechError

_VERSION = "0.1.0"

#: reference parameter set used for the bundled figures
FIGURE_PARAMS = {
    "t": 0.014,
    "t_m": 0.1,
    "l": 1e-4,
    "wavelength": 0.85e-6,
    "phi_r": math.pi / 2,
}


def format_value(value: object) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


@dataclass
class FigureDataset:
    """Named numeric series plus the metadata needed to regenerate them."""

    name: str
    columns: dict[str, list[float]]
    metadata: dict[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ConfigError(f"ragged columns in dataset {self.name!r}: {lengths}")
        first = next(iter(self.columns.values()))
        if any(b <= a for a, b in zip(first, first[1:])):
            raise ConfigError(
                f"abscissa of dataset {self.name!r} must be strictly increasing"
            )

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values())))

    def write(self, path: str | Path) -> None:
        """Write the CSV and its sidecar metadata file."""
        path = Path(path)
        names = list(self.columns)
        series = [self.columns[n] for n in names]
        lines = [",".join(names)]
        for i in range(self.n_rows):
            lines.append(",".join(format_value(col[i]) for col in series))
        path.write_text("\n".join(lines) + "\n")
        meta_lines = [
            f"{key} = {format_value(self.metadata[key])}" for key in sorted(self.metadata)
        ]
        Path(str(path) + ".meta").write_text("\n".join(meta_lines) + "\n")


@dataclass(frozen=True)
class ScanSpec:
    """One-parameter sweep of a model target."""

    target: str
    parameter: str
    start: float
    stop: float
    points: int
    fixed: dict[str, float] = field(default_factory=dict)
    output_path: str | None = None


# ---------------------------------------------------------------------------
# per-target row evaluators (module-level for process-pool pickling)

def _row_synthetic(fixed: dict[str, float], psi: float) -> dict[str, float]:
    resp = synthetic_response(
        psi,
        ElementSpec.mirror(fixed["t"]),
        ElementSpec.membrane(fixed["t_m"], phi_r=fixed["phi_r"]),
    )
    return {
        "psi": psi,
        "T": resp.T,
        "mu": resp.mu,
        "dT_dpsi": resp.dT_dpsi,
        "dmu_dpsi": resp.dmu_dpsi,
    }


def _mos_config(fixed: dict[str, float], parameter: str, value: float) -> mos_mod.MosConfig:
    base = mos_mod.MosConfig(
        l=fixed["l"],
        wavelength=fixed["wavelength"],
        t=fixed["t"],
        t_m=fixed["t_m"],
        x=0.0 if parameter != "x" else value,
        phi_r=fixed["phi_r"],
        N=int(fixed["N"]),
    )
    if parameter == "x":
        return base
    if parameter == "phi_over_phi0":
        return base.at_phi(value * base.phi0)
    raise ConfigError(f"mos target cannot sweep {parameter!r}")


def _row_mos(fixed: dict[str, float], parameter: str, value: float) -> dict[str, float]:
    cfg = _mos_config(fixed, parameter, value)
    op = mos_mod.operating_point(cfg)
    row = {parameter: value}
    derived = {
        "phi_over_phi0": op.phi / op.phi0,
        "T": op.T,
        "gamma": op.gamma,
        "g_omega0": op.g_omega0,
        "g_gamma0": op.g_gamma0,
        "gamma_over_gamma0": op.gamma / cfg.gamma0,
        "g_omega0_over_g00": op.g_omega0 / op.g_00,
        "g_gamma0_over_g00": op.g_gamma0 / op.g_00,
        "valid_thin_tandem": float(op.valid_thin_tandem),
    }
    row.update((key, val) for key, val in derived.items() if key != parameter)
    return row


def _row_msi(fixed: dict[str, float], x: float) -> dict[str, float]:
    cfg = msi_mod.MsiConfig.balanced(
        r_ms=fixed["r_ms"],
        l=fixed["l"],
        k=2.0 * math.pi / fixed["wavelength"],
        x=x,
        Tb_sq=fixed["Tb_sq"],
    )
    cpl = msi_mod.msi_couplings(cfg)
    return {
        "x": x,
        "tau": msi_mod.msi_effective_mirror(cfg).tau,
        "T_ms": cpl.T_ms,
        "gamma_ms": cpl.gamma_ms,
        "g_omega0": cpl.g_omega0,
        "g_gamma0": cpl.g_gamma0,
    }


def _row_mate(fixed: dict[str, float], x: float) -> dict[str, float]:
    cfg = mate_mod.MateConfig(
        l=fixed["l"],
        x=x,
        t=fixed["t"],
        t_m=fixed["t_m"],
        wavelength=fixed["wavelength"],
        phi_r=fixed["phi_r"],
    )
    dec = mate_mod.mate_exact_decay(cfg, cfg.k)
    return {
        "x": x,
        "gamma_mate": dec.gamma_mate,
        "dgamma_dx": dec.dgamma_dx,
        "gamma_reduced": dec.gamma_reduced,
        "dgamma_dx_reduced": dec.dgamma_dx_reduced,
    }


def _row_noise(fixed: dict[str, float], xi: float) -> dict[str, float]:
    big_a = 1.0 + fixed["gamma3_over_gamma"] / 2.0
    return {
        "xi": xi,
        "product_normalized": noise_mod.product_normalized(xi, big_a),
        "theta_opt": math.atan2(xi, 1.0),
    }


@dataclass(frozen=True)
class _Target:
    sweepable: tuple[str, ...]
    defaults: dict[str, float]
    evaluate: object  # (fixed, [parameter,] value) -> row dict
    takes_parameter: bool = False


TARGETS: dict[str, _Target] = {
    "synthetic": _Target(
        sweepable=("psi",),
        defaults={"t": 0.014, "t_m": 0.1, "phi_r": math.pi / 2},
        evaluate=_row_synthetic,
    ),
    "mos": _Target(
        sweepable=("phi_over_phi0", "x"),
        defaults=dict(FIGURE_PARAMS, N=0.0),
        evaluate=_row_mos,
        takes_parameter=True,
    ),
    "msi": _Target(
        sweepable=("x",),
        defaults={"r_ms": 0.9, "Tb_sq": 0.5, "l": 1e-4, "wavelength": 0.85e-6},
        evaluate=_row_msi,
    ),
    "mate": _Target(
        sweepable=("x",),
        defaults=dict(FIGURE_PARAMS, phi_r=math.pi),
        evaluate=_row_mate,
    ),
    "noise": _Target(
        sweepable=("xi",),
        defaults={"gamma3_over_gamma": 0.0},
        evaluate=_row_noise,
    ),
}


def _eval_point(target_name: str, fixed: dict[str, float], parameter: str,
                value: float) -> dict[str, float]:
    target = TARGETS[target_name]
    try:
        if target.takes_parameter:
            return target.evaluate(fixed, parameter, value)
        return target.evaluate(fixed, value)
    except OptomechError as exc:
        raise type(exc)(f"{exc} [at sweep point {parameter} = {value!r}]") from exc


def _sweep_values(spec: ScanSpec) -> list[float]:
    span = spec.stop - spec.start
    n = spec.points - 1
    return [spec.start + i * span / n for i in range(spec.points)]


def run_scan(spec: ScanSpec, workers: int = 1) -> FigureDataset:
    """Evaluate a sweep and (optionally) write its dataset.

    Validates the spec (unknown target/parameter, point count < 2,
    non-finite bounds, swept parameter also fixed -> ConfigError), then
    evaluates every point in input order; results do not depend on the
    worker count.
    """
    if spec.target not in TARGETS:
        raise ConfigError(
            f"unknown target {spec.target!r}; expected one of {sorted(TARGETS)}"
        )
    target = TARGETS[spec.target]
    if spec.parameter not in target.sweepable:
        raise ConfigError(
            f"target {spec.target!r} cannot sweep {spec.parameter!r}; "
            f"sweepable: {target.sweepable}"
        )
    if spec.points < 2:
        raise ConfigError(f"need at least 2 sweep points, got {spec.points}")
    if not (math.isfinite(spec.start) and math.isfinite(spec.stop)):
        raise ConfigError(f"sweep range must be finite, got [{spec.start}, {spec.stop}]")
    if spec.stop <= spec.start:
        raise ConfigError(f"sweep range must be increasing, got [{spec.start}, {spec.stop}]")
    if spec.parameter in spec.fixed:
        raise ConfigError(f"swept parameter {spec.parameter!r} is also fixed")
    unknown = set(spec.fixed) - set(target.defaults)
    if unknown:
        raise ConfigError(
            f"unknown parameters for target {spec.target!r}: {sorted(unknown)}"
        )
    fixed = {**target.defaults, **spec.fixed}

    values = _sweep_values(spec)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(
                pool.map(
                    _eval_point,
                    [spec.target] * len(values),
                    [fixed] * len(values),
                    [spec.parameter] * len(values),
                    values,
                    chunksize=max(1, len(values) // (4 * workers)),
                )
            )
    else:
        rows = [_eval_point(spec.target, fixed, spec.parameter, v) for v in values]

    columns: dict[str, list[float]] = {key: [] for key in rows[0]}
    for row in rows:
        for key, val in row.items():
            columns[key].append(val)

    metadata: dict[str, object] = {
        "target": spec.target,
        "parameter": spec.parameter,
        "start": spec.start,
        "stop": spec.stop,
        "points": spec.points,
        "version": _VERSION,
        "tolerance.element_constraint": CONSTRAINT_TOL,
    }
    for key, val in sorted(fixed.items()):
        metadata[f"param.{key}"] = val
    if spec.target == "mos":
        cfg = _mos_config(fixed, "phi_over_phi0", 0.0)
        metadata["normalizer.phi0"] = cfg.phi0
        metadata["normalizer.gamma0"] = cfg.gamma0
        metadata["normalizer.g_00"] = cfg.g_00

    dataset = FigureDataset(name=spec.target, columns=columns, metadata=metadata)
    if spec.output_path:
        dataset.write(spec.output_path)
    return dataset


FIGURE_IDS = ("fig2", "fig3", "fig4")


def reproduce_figure(figure_id: str, output_path: str | None = None,
                     workers: int = 1) -> FigureDataset:
    """Datasets behind the bundled figures.

    fig2: normalized coupling constants g_omega0/g_00 and g_gamma0/g_00
          versus Phi/Phi0 on [-4, 4], 801 points.
    fig3: normalized decay rate gamma/gamma0 on the same grid.
    fig4: normalized backaction-imprecision product versus
          xi = g_omega0/g_gamma0 for loss ratios gamma3/gamma in {0, 0.5, 1}.
    """
    if figure_id not in FIGURE_IDS:
        raise ConfigError(f"unknown figure {figure_id!r}; expected one of {FIGURE_IDS}")
    if figure_id in ("fig2", "fig3"):
        scan = run_scan(
            ScanSpec(target="mos", parameter="phi_over_phi0",
                     start=-4.0, stop=4.0, points=801),
            workers=workers,
        )
        if figure_id == "fig2":
            keep = ("phi_over_phi0", "g_omega0_over_g00", "g_gamma0_over_g00")
        else:
            keep = ("phi_over_phi0", "gamma_over_gamma0")
        dataset = FigureDataset(
            name=figure_id,
            columns={k: scan.columns[k] for k in keep},
            metadata={**scan.metadata, "figure_id": figure_id},
        )
    else:
        xi_values = _sweep_values(
            ScanSpec(target="noise", parameter="xi", start=-20.0, stop=20.0, points=801)
        )
        columns: dict[str, list[float]] = {"xi": list(xi_values)}
        loss_fractions = (0.0, 0.5, 1.0)
        for frac in loss_fractions:
            big_a = 1.0 + frac / 2.0
            columns[f"product_normalized_loss{int(100 * frac)}"] = [
                noise_mod.product_normalized(xi, big_a) for xi in xi_values
            ]
        dataset = FigureDataset(
            name="fig4",
            columns=columns,
            metadata={
                "figure_id": "fig4",
                "target": "noise",
                "parameter": "xi",
                "points": 801,
                "start": -20.0,
                "stop": 20.0,
                "loss_fractions": "0,0.5,1",
                "normalizer.product_unit": "hbar^2/4",
                "version": _VERSION,
                "tolerance.element_constraint": CONSTRAINT_TOL,
            },
        )
    if output_path:
        dataset.write(output_path)
    return dataset


COMPARE_DEFAULTS: dict[str, float] = {
    "t": 0.014,
    "t_m": 0.1,
    "l": 1e-4,
    "wavelength": 0.85e-6,
    "x_zpf": 1e-15,
    "gamma_m": 0.1,
    "a0": 1.0,
    "omega_m": 1e6,
    "msi_r_ms": 0.9,
    "msi_Tb_sq": 0.48,
    "mate_x": None,  # default: l t_m^2 / 4000 (deep near-edge)
}

COMPARE_COLUMNS = (
    "system", "g_gamma0", "gamma", "cooperativity",
    "g_ratio_mos", "gamma_ratio_mos", "coop_ratio_mos", "error",
)


@dataclass
class ComparisonTable:
    rows: list[dict[str, object]]
    metadata: dict[str, object]

    def write(self, path: str | Path) -> None:
        path = Path(path)
        lines = [",".join(COMPARE_COLUMNS)]
        for row in self.rows:
            lines.append(",".join(format_value(row.get(c, "")) for c in COMPARE_COLUMNS))
        path.write_text("\n".join(lines) + "\n")
        meta = [f"{k} = {format_value(v)}" for k, v in sorted(self.metadata.items())]
        Path(str(path) + ".meta").write_text("\n".join(meta) + "\n")


def compare_systems(params: dict[str, float] | None = None) -> ComparisonTable:
    """Dissipative constant, decay rate, and cooperativity of the three
    systems at their zero-dispersive operating points, with MOS-referenced
    ratio columns.  Per-system infeasibility (NoZeroDispersivePoint) is
    reported in the row's error column instead of propagating."""
    p = dict(COMPARE_DEFAULTS)
    if params:
        unknown = set(params) - set(COMPARE_DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown compare parameters: {sorted(unknown)}")
        p.update(params)
    k = 2.0 * math.pi / p["wavelength"]
    omega_c = C_LIGHT * k
    mech = dict(
        l=p["l"], wavelength=p["wavelength"], x_zpf=p["x_zpf"],
        gamma_m=p["gamma_m"], a0=p["a0"],
    )

    rows: list[dict[str, object]] = []

    mos_row: dict[str, object] = {"system": "mos", "error": ""}
    try:
        mos_mod.zero_dispersive_locus(p["t"], p["t_m"])
        mos_row["g_gamma0"] = 2.0 * omega_c * p["t"] ** 2 / (p["l"] * p["t_m"] ** 4)
        mos_row["gamma"] = C_LIGHT * p["t"] ** 2 / (p["l"] * p["t_m"] ** 2)
        mos_row["cooperativity"] = noise_mod.cooperativity_mos(
            t=p["t"], t_m=p["t_m"], **mech
        )
    except OptomechError as exc:
        mos_row["error"] = type(exc).__name__
    rows.append(mos_row)

    msi_row: dict[str, object] = {"system": "msi", "error": ""}
    try:
        msi_cfg = msi_mod.MsiConfig.balanced(
            r_ms=p["msi_r_ms"], l=p["l"], k=k, Tb_sq=p["msi_Tb_sq"]
        )
        zd = msi_mod.msi_zero_dispersive(msi_cfg)
        msi_row["g_gamma0"] = zd.g_gamma0_benchmark
        msi_row["gamma"] = zd.gamma_ms
        msi_row["cooperativity"] = noise_mod.cooperativity_msi(
            r_ms=p["msi_r_ms"], gamma_ms=zd.gamma_ms, omega_m=p["omega_m"], **mech
        )
    except OptomechError as exc:
        msi_row["error"] = type(exc).__name__
    rows.append(msi_row)

    mate_row: dict[str, object] = {"system": "mate", "error": ""}
    try:
        mate_x = p["mate_x"]
        if mate_x is None:
            mate_x = p["l"] * p["t_m"] ** 2 / 4000.0
        mate_cfg = mate_mod.MateConfig(
            l=p["l"], x=mate_x, t=p["t"], t_m=p["t_m"],
            wavelength=p["wavelength"],
        )
        zd_mate = mate_mod.mate_zero_dispersive(mate_cfg)
        mate_row["g_gamma0"] = zd_mate.g_gamma0_mag
        mate_row["gamma"] = zd_mate.gamma_mate
        mate_row["cooperativity"] = noise_mod.cooperativity_mate(
            t=p["t"], t_m=p["t_m"], omega_m=p["omega_m"], **mech
        )
    except OptomechError as exc:
        mate_row["error"] = type(exc).__name__
    rows.append(mate_row)

    mos_ok = not mos_row["error"]
    for row in rows:
        if mos_ok and not row["error"]:
            row["g_ratio_mos"] = mos_row["g_gamma0"] / row["g_gamma0"]
            row["gamma_ratio_mos"] = mos_row["gamma"] / row["gamma"]
            row["coop_ratio_mos"] = mos_row["cooperativity"] / row["cooperativity"]
        else:
            row["g_ratio_mos"] = row["gamma_ratio_mos"] = row["coop_ratio_mos"] = math.nan

    metadata: dict[str, object] = {f"param.{key}": val for key, val in sorted(p.items())
                                   if val is not None}
    metadata["version"] = _VERSION
    return ComparisonTable(rows=rows, metadata=metadata)
