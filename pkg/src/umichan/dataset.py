"""Campaign point data: bundled table, CSV ingestion/emission, validation and selection."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources
from typing import IO, Iterable, Optional, Sequence, Union

from .records import (
    STAT_FIELDS,
    BandLike,
    FrequencyBand,
    LinkState,
    LocationRecord,
    as_band,
)

CSV_COLUMNS = (
    "freq_ghz",
    "tx_id",
    "rx_id",
    "link_state",
    "tr_sep_m",
    *STAT_FIELDS,
    "outage",
    "single_mpc",
)

#: Link-budget ceiling (dB) above which a location is logged as an outage.
MAX_MEASURABLE_PL_DB = {6.75: 155.6, 16.95: 159.2}

BUNDLED_PROVENANCE = "bundled UMi campaign, 6.75 and 16.95 GHz"


class DatasetError(ValueError):
    pass


class SchemaError(DatasetError):
    """The CSV header does not match the campaign schema."""


class CsvParseError(DatasetError):
    def __init__(self, message: str, row: int, column: str):
        super().__init__(f"row {row}, column {column!r}: {message}")
        self.row = row
        self.column = column


class RecordValidationError(DatasetError):
    def __init__(self, row: int, rules: Sequence[str]):
        super().__init__(f"row {row}: " + "; ".join(rules))
        self.row = row
        self.rules = list(rules)


@dataclass(frozen=True)
class Campaign:
    records: tuple[LocationRecord, ...]
    provenance: str

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def bands(self) -> list[FrequencyBand]:
        return sorted({r.band for r in self.records})

    def get(self, band: BandLike, tx_id: str, rx_id: str) -> LocationRecord:
        key = (as_band(band).carrier_ghz, tx_id, rx_id)
        for r in self.records:
            if r.key == key:
                return r
        raise KeyError(key)


@dataclass(frozen=True)
class Finding:
    row: Optional[int]  # 1-based data row, None for campaign-level findings
    key: tuple
    message: str

    def __str__(self) -> str:
        where = f"row {self.row} " if self.row is not None else ""
        band, tx, rx = self.key
        return f"{where}({band:g} GHz, {tx}, {rx}): {self.message}"


def _parse_float(text: str, row: int, column: str) -> Optional[float]:
    text = text.strip()
    if text == "":
        return None
    try:
        return float(text)
    except ValueError:
        raise CsvParseError(f"not a number: {text!r}", row, column) from None


def _parse_flag(text: str, row: int, column: str) -> bool:
    text = text.strip()
    if text not in ("0", "1"):
        raise CsvParseError(f"expected 0 or 1, got {text!r}", row, column)
    return text == "1"


def _parse_row(cells: dict, row: int) -> LocationRecord:
    freq = _parse_float(cells["freq_ghz"], row, "freq_ghz")
    if freq is None or freq <= 0:
        raise CsvParseError("frequency must be a positive number", row, "freq_ghz")
    state_text = cells["link_state"].strip()
    if state_text not in ("LOS", "NLOS"):
        raise CsvParseError(f"link_state must be LOS or NLOS, got {state_text!r}", row, "link_state")
    sep = _parse_float(cells["tr_sep_m"], row, "tr_sep_m")
    if sep is None:
        raise CsvParseError("missing T-R separation", row, "tr_sep_m")
    tx_id, rx_id = cells["tx_id"].strip(), cells["rx_id"].strip()
    for col, v in (("tx_id", tx_id), ("rx_id", rx_id)):
        if not v:
            raise CsvParseError("empty identifier", row, col)
    stats = {f: _parse_float(cells[f], row, f) for f in STAT_FIELDS}
    return LocationRecord(
        band=FrequencyBand(freq),
        tx_id=tx_id,
        rx_id=rx_id,
        link_state=LinkState(state_text),
        tr_sep_m=sep,
        outage=_parse_flag(cells["outage"], row, "outage"),
        single_mpc=_parse_flag(cells["single_mpc"], row, "single_mpc"),
        **stats,
    )


def ingest_csv(
    source: Union[IO[bytes], IO[str], bytes, str],
    *,
    provenance: str = "<stream>",
    strict: bool = True,
) -> Campaign:
    """Parse a campaign CSV.

    ``source`` may be a binary or text stream, or the raw bytes/str content.
    With ``strict`` (the default) a record that breaks a record rule raises
    :class:`RecordValidationError`; otherwise such records are kept so that
    :func:`validate` can report them.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    if text.startswith("\ufeff"):
        text = text[1:]

    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise SchemaError("empty input: header row required") from None
    missing = [c for c in CSV_COLUMNS if c not in header]
    unknown = [c for c in header if c not in CSV_COLUMNS]
    if missing:
        raise SchemaError(f"missing column {missing[0]!r}")
    if unknown:
        raise SchemaError(f"unknown column {unknown[0]!r}")
    if len(set(header)) != len(header):
        dup = next(h for h in header if header.count(h) > 1)
        raise SchemaError(f"duplicate column {dup!r}")

    records = []
    for i, row in enumerate(reader, start=1):
        if not any(c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise CsvParseError(f"expected {len(header)} cells, got {len(row)}", i, "*")
        rec = _parse_row(dict(zip(header, row)), i)
        if strict:
            rules = rec.problems()
            if rules:
                raise RecordValidationError(i, rules)
        records.append(rec)
    return Campaign(tuple(records), provenance)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    return repr(float(value))


def emit_csv(campaign: Campaign) -> str:
    """Serialize ``campaign`` in the schema read by :func:`ingest_csv`."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in campaign.records:
        w.writerow(
            [_fmt(r.band.carrier_ghz), r.tx_id, r.rx_id, r.link_state.value, _fmt(r.tr_sep_m)]
            + [_fmt(getattr(r, f)) for f in STAT_FIELDS]
            + [_fmt(r.outage), _fmt(r.single_mpc)]
        )
    return buf.getvalue()


def load_bundled() -> Campaign:
    """The 40-link street-level campaign (20 links in each band)."""
    data = resources.files("umichan").joinpath("data/umi_campaign.csv").read_bytes()
    return ingest_csv(data, provenance=BUNDLED_PROVENANCE)


def max_measurable_pl(band: BandLike) -> Optional[float]:
    return MAX_MEASURABLE_PL_DB.get(as_band(band).carrier_ghz)


def validate(campaign: Campaign) -> list[Finding]:
    findings = []
    seen: dict[tuple, int] = {}
    for i, r in enumerate(campaign.records, start=1):
        for rule in r.problems():
            findings.append(Finding(i, r.key, rule))
        limit = max_measurable_pl(r.band)
        if limit is not None and not r.outage:
            for f in ("omni_pl_vv_db", "omni_pl_vh_db"):
                v = getattr(r, f)
                if v is not None and v > limit:
                    findings.append(
                        Finding(i, r.key, f"{f}={v:g} exceeds max measurable path loss {limit:g} dB")
                    )
        if r.key in seen:
            findings.append(Finding(i, r.key, f"duplicate key (first seen at row {seen[r.key]})"))
        else:
            seen[r.key] = i
    return findings


def select(
    campaign: Campaign,
    band: BandLike,
    state: Union[LinkState, str, None],
    field: str,
    *,
    max_dist_m: Optional[float] = None,
    exclude_single_mpc: bool = False,
    exclude_missing: bool = True,
) -> list[tuple[float, Optional[float]]]:
    """Return ``(tr_sep_m, value)`` pairs for one statistic column.

    Outage records are always skipped. ``state=None`` keeps both link
    states. The distance cap is inclusive.
    """
    if field not in STAT_FIELDS:
        raise KeyError(f"unknown statistic {field!r}; expected one of {', '.join(STAT_FIELDS)}")
    band = as_band(band)
    state = LinkState.parse(state) if state is not None else None
    out = []
    for r in campaign.records:
        if r.band != band or r.outage:
            continue
        if state is not None and r.link_state is not state:
            continue
        if max_dist_m is not None and r.tr_sep_m > max_dist_m:
            continue
        if exclude_single_mpc and r.single_mpc:
            continue
        v = getattr(r, field)
        if v is None and exclude_missing:
            continue
        out.append((r.tr_sep_m, v))
    return out


def counts(campaign: Campaign, band: BandLike) -> dict[str, int]:
    """Record, state and outage counts for one band."""
    band = as_band(band)
    recs = [r for r in campaign.records if r.band == band]
    return {
        "records": len(recs),
        "LOS": sum(r.link_state is LinkState.LOS for r in recs),
        "NLOS": sum(r.link_state is LinkState.NLOS for r in recs),
        "outage": sum(r.outage for r in recs),
    }


def values(pairs: Iterable[tuple[float, Optional[float]]]) -> list[float]:
    return [v for _, v in pairs if v is not None]
