"""Run configuration parsing and report serialization (JSON/CSV/PGM).

Conventions: complex numbers travel as two-element [re, im] arrays; JSON
reports keep full float round-trip precision (parse(serialize(x)) == x);
CSV bodies and console text print 15 significant digits.  Unknown keys in
a config document are rejected outright.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, IO, Mapping, Optional, Sequence

from .coremap import (
    ConvergedTo,
    Orbit,
    OrbitOutcome,
    OrbitState,
    Params,
    PeriodicCycle,
    Singular,
    ToleranceConfig,
    Unbounded,
    Undecided,
)
from .equilibria import CharQuadratic, EquilibriumReport, SpecialCaseReport
from .errors import ConfigError
from .lyapunov import LyapunovEstimate
from .scan import (
    BasinRaster,
    ChaosHarnessReport,
    ChaosSample,
    ConditionCheck,
    ExtremumResult,
    PeriodHarnessReport,
    PeriodHit,
    ScanGrid,
)

FORMATS = ("csv", "json", "pgm")


def fmt15(x: float) -> str:
    """15-significant-digit rendering used for CSV and console output."""
    return format(x, ".15g")


def fmt15c(z: complex) -> str:
    re, im = fmt15(z.real), fmt15(z.imag)
    return f"{re}{'+' if z.imag >= 0 else '-'}{fmt15(abs(z.imag))}i"


# ---------------------------------------------------------------------------
# Config parsing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    params: Params
    initial: Optional[OrbitState] = None
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    seed: int = 0
    output_path: Optional[str] = None
    output_format: str = "json"


def _as_complex(node: Any, where: str) -> complex:
    if (
        not isinstance(node, (list, tuple))
        or len(node) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in node)
    ):
        raise ConfigError(f"{where}: complex values must be [re, im] number pairs, got {node!r}")
    return complex(float(node[0]), float(node[1]))


def _require_keys(node: Mapping[str, Any], allowed: Sequence[str], where: str) -> None:
    unknown = sorted(set(node) - set(allowed))
    if unknown:
        raise ConfigError(f"{where}: unknown keys {unknown}; allowed keys are {sorted(allowed)}")


def parse_config(doc: Any) -> RunConfig:
    """Build a RunConfig from a parsed JSON document (strict)."""
    if not isinstance(doc, dict):
        raise ConfigError(f"config root must be an object, got {type(doc).__name__}")
    _require_keys(
        doc,
        ["params", "initial", "tolerances", "seed", "output_path", "output_format"],
        "config",
    )
    if "params" not in doc:
        raise ConfigError("config: missing required key 'params'")
    pnode = doc["params"]
    if not isinstance(pnode, dict):
        raise ConfigError("config.params must be an object")
    _require_keys(pnode, ["alpha", "beta"], "config.params")
    if "alpha" not in pnode or "beta" not in pnode:
        raise ConfigError("config.params needs both 'alpha' and 'beta'")
    params = Params(
        alpha=_as_complex(pnode["alpha"], "config.params.alpha"),
        beta=_as_complex(pnode["beta"], "config.params.beta"),
    )

    initial = None
    if "initial" in doc and doc["initial"] is not None:
        inode = doc["initial"]
        if not isinstance(inode, dict):
            raise ConfigError("config.initial must be an object")
        _require_keys(inode, ["z_prev", "z_curr"], "config.initial")
        if "z_prev" not in inode or "z_curr" not in inode:
            raise ConfigError("config.initial needs both 'z_prev' and 'z_curr'")
        initial = OrbitState(
            z_prev=_as_complex(inode["z_prev"], "config.initial.z_prev"),
            z_curr=_as_complex(inode["z_curr"], "config.initial.z_curr"),
        )

    tol_kwargs: dict[str, Any] = {}
    if "tolerances" in doc and doc["tolerances"] is not None:
        tnode = doc["tolerances"]
        if not isinstance(tnode, dict):
            raise ConfigError("config.tolerances must be an object")
        fields = [
            "eps_singular",
            "radius_unbounded",
            "eps_converge",
            "converge_window",
            "max_period",
            "eps_cycle",
            "max_iters",
            "transient_discard",
        ]
        _require_keys(tnode, fields, "config.tolerances")
        for k, v in tnode.items():
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"config.tolerances.{k} must be a number, got {v!r}")
            tol_kwargs[k] = int(v) if k in ("converge_window", "max_period", "max_iters", "transient_discard") else float(v)
    try:
        tolerances = ToleranceConfig(**tol_kwargs)
    except ValueError as exc:
        raise ConfigError(f"config.tolerances: {exc}") from exc

    seed = doc.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError(f"config.seed must be an integer, got {seed!r}")

    output_path = doc.get("output_path")
    if output_path is not None and not isinstance(output_path, str):
        raise ConfigError("config.output_path must be a string")

    output_format = doc.get("output_format", "json")
    if output_format not in FORMATS:
        raise ConfigError(f"config.output_format must be one of {FORMATS}, got {output_format!r}")

    return RunConfig(
        params=params,
        initial=initial,
        tolerances=tolerances,
        seed=seed,
        output_path=output_path,
        output_format=output_format,
    )


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc
    return parse_config(doc)


# ---------------------------------------------------------------------------
# JSON encoding of domain values
# ---------------------------------------------------------------------------


def jsonable(obj: Any) -> Any:
    """Recursively convert domain values into JSON-encodable structures."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Params):
        return {"alpha": jsonable(obj.alpha), "beta": jsonable(obj.beta)}
    if isinstance(obj, OrbitState):
        return {"z_prev": jsonable(obj.z_prev), "z_curr": jsonable(obj.z_curr), "n": obj.n}
    if isinstance(obj, ToleranceConfig):
        return {
            "eps_singular": obj.eps_singular,
            "radius_unbounded": obj.radius_unbounded,
            "eps_converge": obj.eps_converge,
            "converge_window": obj.converge_window,
            "max_period": obj.max_period,
            "eps_cycle": obj.eps_cycle,
            "max_iters": obj.max_iters,
            "transient_discard": obj.transient_discard,
        }
    if isinstance(obj, ConvergedTo):
        return {"kind": obj.kind, "limit": jsonable(obj.limit)}
    if isinstance(obj, PeriodicCycle):
        return {"kind": obj.kind, "period": obj.period, "cycle": [jsonable(z) for z in obj.cycle]}
    if isinstance(obj, (Singular, Unbounded)):
        return {"kind": obj.kind, "step": obj.step}
    if isinstance(obj, Undecided):
        return {"kind": obj.kind}
    if isinstance(obj, CharQuadratic):
        return {
            "r": jsonable(obj.r),
            "s": jsonable(obj.s),
            "c1": jsonable(obj.c1),
            "c0": jsonable(obj.c0),
            "form_discrepancy": obj.form_discrepancy,
        }
    if isinstance(obj, EquilibriumReport):
        return {
            "value": jsonable(obj.value),
            "branch": obj.branch.value,
            "char_poly": jsonable(obj.char_poly),
            "root_moduli": list(obj.root_moduli) if obj.root_moduli else None,
            "stability": obj.stability.value,
            "criterion_value": obj.criterion_value,
            "residual": obj.residual,
            "spurious": obj.spurious,
        }
    if isinstance(obj, SpecialCaseReport):
        return {
            "at_one": jsonable(obj.at_one),
            "companion": jsonable(obj.companion),
            "condition_lower": obj.condition_lower,
            "condition_upper": obj.condition_upper,
            "condition_holds": obj.condition_holds,
        }
    if isinstance(obj, LyapunovEstimate):
        return {
            "lambda_max": obj.lambda_max,
            "iterations": obj.iterations,
            "transient_discarded": obj.transient_discarded,
            "running_series": list(obj.running_series),
            "converged": obj.converged,
            "orbit_outcome": jsonable(obj.orbit_outcome),
        }
    if isinstance(obj, ConditionCheck):
        return {
            "beta_mod": obj.beta_mod,
            "one_plus_4alpha_mod": obj.one_plus_4alpha_mod,
            "beta_gt": obj.beta_gt,
        }
    if isinstance(obj, ExtremumResult):
        return {
            "objective": obj.objective,
            "best_value": obj.best_value,
            "best_params": jsonable(obj.best_params),
            "evaluations": obj.evaluations,
            "seed": obj.seed,
        }
    if isinstance(obj, ScanGrid):
        return {
            "center": jsonable(obj.center),
            "half_width": obj.half_width,
            "resolution": obj.resolution,
            "target": obj.target,
        }
    if isinstance(obj, BasinRaster):
        return {
            "grid": jsonable(obj.grid),
            "params": jsonable(obj.params),
            "config": jsonable(obj.config),
            "slice_policy": obj.slice_policy,
            "fixed_partner": jsonable(obj.fixed_partner),
            "labels": [list(row) for row in obj.labels],
        }
    if isinstance(obj, PeriodHit):
        return {
            "params": jsonable(obj.params),
            "initial": jsonable(obj.initial),
            "period": obj.period,
            "cycle": [jsonable(z) for z in obj.cycle],
            "residual": obj.residual,
            "confirmed": obj.confirmed,
        }
    if isinstance(obj, PeriodHarnessReport):
        return {
            "n_samples": obj.n_samples,
            "param_box": obj.param_box,
            "seed": obj.seed,
            "counts": {str(k): v for k, v in obj.counts.items()},
            "hits_ge3": [jsonable(h) for h in obj.hits_ge3],
            "outcome_counts": obj.outcome_counts,
        }
    if isinstance(obj, ChaosSample):
        return {
            "params": jsonable(obj.params),
            "initial": jsonable(obj.initial),
            "condition": jsonable(obj.condition),
            "lambda_max": obj.lambda_max,
            "chaotic": obj.chaotic,
            "note": obj.note,
        }
    if isinstance(obj, ChaosHarnessReport):
        return {
            "n_samples": obj.n_samples,
            "seed": obj.seed,
            "threshold": obj.threshold,
            "contingency": {
                f"cond_lt={k[0]},chaotic={k[1]}": v for k, v in sorted(obj.contingency.items())
            },
            "dead": obj.dead,
            "samples": [jsonable(s) for s in obj.samples],
            "violators": [jsonable(s) for s in obj.violators],
        }
    if isinstance(obj, Orbit):
        return {
            "params": jsonable(obj.params),
            "initial": jsonable(obj.initial),
            "outcome": jsonable(obj.outcome),
            "iterations_used": obj.iterations_used,
            "points": [jsonable(z) for z in obj.points],
        }
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dump_json(obj: Any, fh: IO[str]) -> None:
    json.dump(jsonable(obj), fh, indent=2, sort_keys=False)
    fh.write("\n")


def dumps_json(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# CSV / PGM writers
# ---------------------------------------------------------------------------


def write_orbit_csv(orbit: Orbit, fh: IO[str]) -> None:
    """One row per iterate: n, re, im, modulus; outcome as a JSON footer
    comment so the file stays a single self-describing artifact."""
    fh.write("n,re,im,modulus\n")
    n0 = orbit.initial.n
    for k, z in enumerate(orbit.points, start=1):
        fh.write(f"{n0 + k},{fmt15(z.real)},{fmt15(z.imag)},{fmt15(abs(z))}\n")
    footer = json.dumps(
        {"outcome": jsonable(orbit.outcome), "iterations_used": orbit.iterations_used},
        sort_keys=False,
    )
    fh.write(f"# outcome: {footer}\n")


def write_series_csv(estimate: LyapunovEstimate, fh: IO[str]) -> None:
    fh.write("block,partial_average\n")
    for i, v in enumerate(estimate.running_series):
        fh.write(f"{i},{fmt15(v)}\n")


_CANON_LABELS = (
    "singular",
    "unbounded",
    "undecided",
    "equilibrium-1",
    "equilibrium-2",
    "other-limit",
    "known-two-cycle",
    "other-two-cycle",
)


def raster_legend(raster: BasinRaster) -> dict[str, int]:
    """Deterministic label -> gray level map covering the raster's labels."""
    seen = {lbl for row in raster.labels for lbl in row}
    ordered = [lbl for lbl in _CANON_LABELS if lbl in seen]
    ordered += sorted(lbl for lbl in seen if lbl not in _CANON_LABELS)
    if not ordered:
        return {}
    if len(ordered) == 1:
        return {ordered[0]: 255}
    return {lbl: round(255 * i / (len(ordered) - 1)) for i, lbl in enumerate(ordered)}


def write_raster_pgm(raster: BasinRaster, fh: IO[str]) -> dict[str, int]:
    """Plain (P2) PGM, one gray level per label; returns the legend used."""
    legend = raster_legend(raster)
    n = raster.grid.resolution
    fh.write(f"P2\n{n} {n}\n255\n")
    for row in raster.labels:
        fh.write(" ".join(str(legend[lbl]) for lbl in row) + "\n")
    return legend


def write_raster_csv(raster: BasinRaster, fh: IO[str]) -> None:
    fh.write("row,col,re,im,label\n")
    for r, row in enumerate(raster.labels):
        for c, lbl in enumerate(row):
            z = raster.grid.point(r, c)
            fh.write(f"{r},{c},{fmt15(z.real)},{fmt15(z.imag)},{lbl}\n")
