"""Implementation-cost arithmetic on transcribed FPGA resource counts.

Everything is exact rational arithmetic; rounding happens only when a value
is rendered.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, fields
from fractions import Fraction
from importlib import resources
from pathlib import Path


@dataclass(frozen=True)
class ResourceCount:
    slices: int = 0
    luts: int = 0
    ffs: int = 0
    dsps: int = 0
    brams: int = 0
    power_mw: Fraction | None = None
    delay_ns: Fraction | None = None

    def __post_init__(self):
        for name in ("slices", "luts", "ffs", "dsps", "brams"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @classmethod
    def from_dict(cls, data: dict) -> "ResourceCount":
        known = {f.name for f in fields(cls)}
        kwargs = {}
        for key, val in data.items():
            if key not in known:
                raise ValueError(f"unknown resource field {key!r}")
            if key in ("power_mw", "delay_ns"):
                kwargs[key] = None if val is None else Fraction(str(val))
            else:
                kwargs[key] = int(val)
        return cls(**kwargs)

    def __add__(self, other: "ResourceCount") -> "ResourceCount":
        def opt(a, b):
            return None if a is None or b is None else a + b
        return ResourceCount(self.slices + other.slices, self.luts + other.luts,
                             self.ffs + other.ffs, self.dsps + other.dsps,
                             self.brams + other.brams, opt(self.power_mw, other.power_mw),
                             opt(self.delay_ns, other.delay_ns))


def sec(rc: ResourceCount) -> Fraction:
    """Slice effective cost: LUTs/4 + FFs/8 + 100 per DSP + 200 per BRAM."""
    return Fraction(rc.luts, 4) + Fraction(rc.ffs, 8) + 100 * rc.dsps + 200 * rc.brams


def overhead_pct(with_fd, without_fd, baseline) -> Fraction:
    """Cost added by fault detection, as a percentage of the full butterfly cost."""
    baseline = Fraction(baseline)
    if baseline == 0:
        raise ValueError("baseline must be non-zero")
    return 100 * (Fraction(with_fd) - Fraction(without_fd)) / baseline


def render_pct(value: Fraction, places: int = 2) -> str:
    """Fixed-point rendering truncated toward zero, matching the reference figures."""
    value = Fraction(value)
    sign = "-" if value < 0 else ""
    scaled = int(abs(value) * 10**places)
    whole, frac = divmod(scaled, 10**places)
    return f"{sign}{whole}.{frac:0{places}d}" if places else f"{sign}{whole}"


def render_exact(value: Fraction) -> str:
    """Decimal string for a rational with a power-of-two denominator."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    places = 0
    while (value * 10**places).denominator != 1:
        places += 1
        if places > 12:
            return f"{float(value):.6f}"
    return render_pct(value, places)


def load_tables(path: str | Path | None = None) -> dict:
    if path is None:
        text = resources.files("faultshield").joinpath("data/fpga_resources.json").read_text()
    else:
        text = Path(path).read_text(encoding="utf-8")
    data = json.loads(text) if text.strip() else {}
    if not isinstance(data, dict) or not (data.get("schemes") or data.get("kyber_blocks")):
        raise ValueError("tables file holds no resource rows")
    return data


@dataclass(frozen=True)
class OverheadRow:
    design: str
    target: str
    metric: str
    computed: Fraction
    reported: str | None = None


_METRICS = (("area", "slices"), ("luts", "luts"), ("ffs", "ffs"), ("power", "power_mw"))


def _metric_rows(design, target, with_fd, without_fd, base, reported):
    rows = []
    for metric, attr in _METRICS:
        hi, lo, ref = getattr(with_fd, attr), getattr(without_fd, attr), getattr(base, attr)
        if hi is None or lo is None or ref is None:
            continue
        rep = reported.get("energy" if metric == "power" else metric)
        rows.append(OverheadRow(design, target, metric, overhead_pct(hi, lo, ref), rep))
    return rows


def overhead_rows(tables: dict) -> list[OverheadRow]:
    """Overhead percentages for every design in the tables.

    Scheme rows compare 'Barrett with RESWO' against plain Barrett. Unit rows
    add each standalone recomputation unit to the Kyber Barrett block.
    """
    reported = tables.get("reported_overheads", {})
    rows = []
    for entry in tables.get("schemes", []):
        base = ResourceCount.from_dict(entry["ctbu"])
        plain = ResourceCount.from_dict(entry["barrett"])
        prot = ResourceCount.from_dict(entry["barrett_reswo"])
        rep = reported.get("RESWO", {}) if entry["name"] == "kyber" else {}
        rows += _metric_rows("RESWO", entry["name"], prot, plain, base, rep)
    blocks = tables.get("kyber_blocks")
    if blocks:
        base = ResourceCount.from_dict(blocks["ctbu"])
        plain = ResourceCount.from_dict(blocks["barrett"])
        for unit, counts in blocks.get("units", {}).items():
            unit_rc = ResourceCount.from_dict(counts)
            rep = reported.get(unit, {})
            rows += _metric_rows(unit, "kyber-ctbu", plain + unit_rc, plain, base, rep)
            rows.append(OverheadRow(unit, "kyber-ctbu", "sec",
                                    overhead_pct(sec(unit_rc), 0, sec(base))))
    return rows


def sec_rows(tables: dict) -> list[tuple[str, ResourceCount, Fraction]]:
    blocks = tables.get("kyber_blocks") or {}
    named = [("ctbu", blocks.get("ctbu")), ("barrett", blocks.get("barrett"))]
    named += list(blocks.get("units", {}).items())
    out = []
    for name, counts in named:
        if counts:
            rc = ResourceCount.from_dict(counts)
            out.append((name, rc, sec(rc)))
    return out
