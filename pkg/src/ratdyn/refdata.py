"""Bundled reference tables: two-cycle values and chaotic-parameter rows.

The CSV fixtures ship inside the package so table regeneration is a test,
not a manual step.  Rows keep the precision of the original quotes.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources

from .coremap import Params


@dataclass(frozen=True)
class TwoCycleRow:
    params: Params
    phi: complex
    psi: complex


@dataclass(frozen=True)
class ChaoticRow:
    params: Params
    lyapunov: float


def _read(name: str) -> list[dict[str, str]]:
    text = resources.files("ratdyn.data").joinpath(name).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    return list(csv.DictReader(lines))


def two_cycle_rows() -> tuple[TwoCycleRow, ...]:
    rows = []
    for rec in _read("two_cycle_reference.csv"):
        rows.append(
            TwoCycleRow(
                params=Params(
                    alpha=complex(float(rec["alpha_re"]), float(rec["alpha_im"])),
                    beta=complex(float(rec["beta_re"]), float(rec["beta_im"])),
                ),
                phi=complex(float(rec["phi_re"]), float(rec["phi_im"])),
                psi=complex(float(rec["psi_re"]), float(rec["psi_im"])),
            )
        )
    return tuple(rows)


def chaotic_rows() -> tuple[ChaoticRow, ...]:
    rows = []
    for rec in _read("chaotic_reference.csv"):
        rows.append(
            ChaoticRow(
                params=Params(
                    alpha=complex(float(rec["alpha_re"]), float(rec["alpha_im"])),
                    beta=complex(float(rec["beta_re"]), float(rec["beta_im"])),
                ),
                lyapunov=float(rec["lyapunov"]),
            )
        )
    return tuple(rows)
