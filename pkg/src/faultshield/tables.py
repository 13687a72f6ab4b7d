"""CSV and markdown renderings of campaign and overhead results."""
from __future__ import annotations

import csv
import io

from .campaign import CampaignStats
from .faults import Kind, Site, parse_kind, parse_site
from .overhead import OverheadRow, render_exact, render_pct
from .recomp import Scheme

CSV_HEADER = ("scheme", "w", "eta", "site", "kind", "samples", "detected", "missed",
              "efficiency_pct")
NA = "NA"

_SITE_LABEL = {Site.ALPHA: "α", Site.BETA: "β", Site.BOTH: "α & β"}


def _efficiency_text(st: CampaignStats, places: int) -> str:
    eff = st.efficiency
    return NA if eff is None else f"{eff:.{places}f}"


def stats_to_csv(stats: list[CampaignStats]) -> str:
    if not stats:
        raise ValueError("nothing to format")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for st in stats:
        writer.writerow([st.scheme.value, st.w, st.eta, st.site.value, st.kind.value,
                         st.samples, st.detected, st.missed, _efficiency_text(st, 4)])
    return buf.getvalue()


def parse_stats_csv(text: str) -> list[CampaignStats]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header!r}")
    out = []
    for row in reader:
        scheme, w, eta, site, kind, samples, detected, missed, eff = row
        st = CampaignStats(Scheme.parse(scheme), int(w), int(eta), parse_site(site),
                           parse_kind(kind), int(samples), int(detected),
                           applicable=eff != NA)
        if st.missed != int(missed):
            raise ValueError(f"inconsistent row {row!r}")
        out.append(st)
    return out


def stats_to_markdown(stats: list[CampaignStats]) -> str:
    """One table per scheme; rows grouped by ascending w, then eta.

    Columns follow a site x kind layout, the usual shape for efficiency
    tables; not-applicable cells show "-".
    """
    if not stats:
        raise ValueError("nothing to format")
    sites = [s for s in Site if any(st.site is s for st in stats)]
    kinds = [k for k in Kind if any(st.kind is k for st in stats)]
    columns = [(s, k) for s in sites for k in kinds]
    lookup = {(st.scheme, st.w, st.eta, st.site, st.kind): st for st in stats}
    schemes = [s for s in Scheme if any(st.scheme is s for st in stats)]

    blocks = []
    for scheme in schemes:
        lines = [f"### {scheme.value} detection efficiency (%)", ""]
        head = ["w", "η"] + [f"{_SITE_LABEL[s]} {k.value}" for s, k in columns]
        lines.append("| " + " | ".join(head) + " |")
        lines.append("|" + "---|" * len(head))
        ws = sorted({st.w for st in stats if st.scheme is scheme})
        for w in ws:
            etas = sorted({st.eta for st in stats if st.scheme is scheme and st.w == w})
            for idx, eta in enumerate(etas):
                cells = [str(w) if idx == 0 else "", str(eta)]
                for site, kind in columns:
                    st = lookup.get((scheme, w, eta, site, kind))
                    cells.append("" if st is None else
                                 ("-" if st.efficiency is None else f"{st.efficiency:.2f}"))
                lines.append("| " + " | ".join(cells) + " |")
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)


OVERHEAD_HEADER = ("design", "target", "metric", "computed_pct", "reported_pct")


def overhead_to_csv(rows: list[OverheadRow]) -> str:
    if not rows:
        raise ValueError("nothing to format")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(OVERHEAD_HEADER)
    for row in rows:
        writer.writerow([row.design, row.target, row.metric, render_pct(row.computed),
                         row.reported or ""])
    return buf.getvalue()


def overhead_to_markdown(rows: list[OverheadRow], sec_rows=()) -> str:
    if not rows:
        raise ValueError("nothing to format")
    lines = ["### Fault-detection overhead (% of CT-BU cost)", "",
             "| design | target | metric | computed | reported |", "|---|---|---|---|---|"]
    for row in rows:
        lines.append(f"| {row.design} | {row.target} | {row.metric} | "
                     f"{render_pct(row.computed)} | {row.reported or ''} |")
    if sec_rows:
        lines += ["", "### Slice effective cost", "",
                  "| block | LUTs | FFs | DSPs | BRAMs | SEC |", "|---|---|---|---|---|---|"]
        for name, rc, cost in sec_rows:
            lines.append(f"| {name} | {rc.luts} | {rc.ffs} | {rc.dsps} | {rc.brams} | "
                         f"{render_exact(cost)} |")
    return "\n".join(lines) + "\n"


def format_tables(items: list, fmt: str = "csv") -> str:
    """Render campaign stats or overhead rows as CSV or markdown."""
    if not items:
        raise ValueError("nothing to format")
    if fmt not in ("csv", "markdown"):
        raise ValueError("fmt must be 'csv' or 'markdown'")
    if isinstance(items[0], CampaignStats):
        return stats_to_csv(items) if fmt == "csv" else stats_to_markdown(items)
    if isinstance(items[0], OverheadRow):
        return overhead_to_csv(items) if fmt == "csv" else overhead_to_markdown(items)
    raise TypeError(f"cannot format {type(items[0]).__name__}")
