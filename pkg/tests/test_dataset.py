import io

import pytest

from umichan import dataset
from umichan.dataset import (
    CSV_COLUMNS,
    CsvParseError,
    RecordValidationError,
    SchemaError,
    emit_csv,
    ingest_csv,
    select,
    validate,
)
from umichan.records import FrequencyBand, LinkState, LocationRecord

HEADER = ",".join(CSV_COLUMNS)
LOS_ROW = "6.75,TX9,RX1,LOS,40,74.63,,,29.3,,23.5,,,,,,,0,0"


def csv_bytes(*rows, header=HEADER):
    return ("\n".join((header,) + rows) + "\n").encode()


def test_bundled_shape(bundled):
    assert len(bundled) == 40
    for band in (6.75, 16.95):
        c = dataset.counts(bundled, band)
        assert c == {"records": 20, "LOS": 7, "NLOS": 13, "outage": 2}
        per_tx = {}
        for r in bundled:
            if r.band.carrier_ghz == band:
                per_tx[r.tx_id] = per_tx.get(r.tx_id, 0) + 1
        assert per_tx == {"TX1": 7, "TX2": 3, "TX3": 3, "TX4": 4, "TX5": 3}
        outages = {(r.tx_id, r.rx_id) for r in bundled if r.outage and r.band.carrier_ghz == band}
        assert outages == {("TX1", "RX6"), ("TX4", "RX3")}


def test_bundled_cells(bundled):
    r = bundled.get(6.75, "TX1", "RX1")
    assert (r.tr_sep_m, r.omni_pl_vv_db, r.omni_ds_ns, r.omni_asa_deg) == (40, 74.63, 29.3, 23.5)
    assert r.link_state is LinkState.LOS

    r = bundled.get(16.95, "TX1", "RX5")
    assert r.single_mpc and r.omni_ds_ns == 0.0 and r.mean_dir_ds_ns == 0.0
    assert r.omni_pl_vh_db is None

    r = bundled.get(6.75, "TX1", "RX6")
    assert r.outage
    assert all(r.stat(f) is None for f in dataset.STAT_FIELDS)

    assert bundled.get(6.75, "TX1", "RX7").tr_sep_m == 424
    assert bundled.get(16.95, "TX1", "RX7").tr_sep_m == 410


def test_bundled_is_valid(bundled):
    assert validate(bundled) == []
    worst = {b: max(r.omni_pl_vv_db for r in bundled if r.band.carrier_ghz == b and not r.outage)
             for b in (6.75, 16.95)}
    assert worst == {6.75: 124.8, 16.95: 130.1}


def test_ingest_minimal():
    c = ingest_csv(io.BytesIO(csv_bytes(LOS_ROW)))
    assert len(c) == 1
    assert c.records[0].omni_pl_vh_db is None
    assert c.records[0].band == FrequencyBand(6.75)


def test_ingest_preserves_order():
    rows = [LOS_ROW.replace("RX1", f"RX{i}") for i in (3, 1, 2)]
    c = ingest_csv(csv_bytes(*rows))
    assert [r.rx_id for r in c] == ["RX3", "RX1", "RX2"]


def test_outage_with_statistics_rejected():
    row = "6.75,TX9,RX1,NLOS,300,150.0,,,,,,,,,,,,1,0"
    with pytest.raises(RecordValidationError, match="outage row has statistics"):
        ingest_csv(csv_bytes(row))
    # lenient parse keeps it for validate()
    c = ingest_csv(csv_bytes(row), strict=False)
    assert [f.message for f in validate(c)] == ["outage row has statistics"]


def test_bad_header_names_column():
    bad = HEADER.replace("omni_ds_ns", "omni_ds")
    with pytest.raises(SchemaError, match="omni_ds_ns"):
        ingest_csv(csv_bytes(LOS_ROW, header=bad))


def test_non_numeric_cell_reports_position():
    row = LOS_ROW.replace("74.63", "n/a")
    with pytest.raises(CsvParseError) as e:
        ingest_csv(csv_bytes(LOS_ROW, row.replace("RX1", "RX2")))
    assert e.value.row == 2 and e.value.column == "omni_pl_vv_db"


def test_bad_flag_and_state():
    with pytest.raises(CsvParseError, match="outage"):
        ingest_csv(csv_bytes(LOS_ROW[:-3] + "x,0"))
    with pytest.raises(CsvParseError, match="link_state"):
        ingest_csv(csv_bytes(LOS_ROW.replace("LOS", "NLOS_BEST")))


def test_round_trip_identity(bundled):
    text = emit_csv(bundled)
    again = ingest_csv(text.encode(), provenance=bundled.provenance)
    assert again == bundled
    assert emit_csv(again) == text


def test_validate_max_measurable_pl():
    row = "6.75,TX9,RX1,NLOS,300,160,,,,,,,,,,,,0,0"
    (f,) = validate(ingest_csv(csv_bytes(row)))
    assert "exceeds max measurable path loss 155.6 dB" in f.message
    # the ceiling is per band
    row16 = row.replace("6.75", "16.95").replace(",160,", ",159.0,")
    assert validate(ingest_csv(csv_bytes(row16))) == []
    row16 = row16.replace(",159.0,", ",159.3,")
    assert "159.2" in validate(ingest_csv(csv_bytes(row16)))[0].message


def test_validate_duplicate_key():
    (f,) = validate(ingest_csv(csv_bytes(LOS_ROW, LOS_ROW)))
    assert "duplicate key" in f.message


def test_single_mpc_rule():
    rec = LocationRecord(FrequencyBand(6.75), "TX", "RX", LinkState.NLOS, 100.0,
                         omni_pl_vv_db=100.0, omni_ds_ns=3.0, mean_dir_ds_ns=0.0, single_mpc=True)
    assert rec.problems() == ["single-MPC row must have zero delay spreads"]


def test_angle_range_rule():
    rec = LocationRecord(FrequencyBand(6.75), "TX", "RX", LinkState.LOS, 10.0,
                         omni_pl_vv_db=70.0, omni_asa_deg=360.0)
    assert any("outside [0, 360)" in p for p in rec.problems())


# --- select ---------------------------------------------------------------------


def test_select_los_path_loss(bundled):
    pts = select(bundled, 6.75, LinkState.LOS, "omni_pl_vv_db")
    assert len(pts) == 7
    assert (40, 74.63) in pts and (424, 100.2) in pts


def test_select_as_with_distance_cap(bundled):
    vals = dataset.values(select(bundled, 6.75, "NLOS", "omni_asa_deg", max_dist_m=180))
    assert vals == [68.7, 18.4, 34.0, 23.8, 55.7, 16.1, 24.2, 46.5]


def test_select_cap_is_inclusive(bundled):
    pts = select(bundled, 6.75, "NLOS", "omni_asa_deg", max_dist_m=185)
    assert 185 in [d for d, _ in pts]
    pts = select(bundled, 6.75, "NLOS", "omni_asa_deg", max_dist_m=184.999)
    assert 185 not in [d for d, _ in pts]


def test_select_single_mpc(bundled):
    with_rx5 = select(bundled, 6.75, "NLOS", "omni_ds_ns")
    without = select(bundled, 6.75, "NLOS", "omni_ds_ns", exclude_single_mpc=True)
    assert len(with_rx5) == 11 and len(without) == 10
    assert (880, 0.0) in with_rx5 and (880, 0.0) not in without


def test_select_missing_values(bundled):
    present = select(bundled, 16.95, "NLOS", "omni_pl_vh_db")
    everything = select(bundled, 16.95, "NLOS", "omni_pl_vh_db", exclude_missing=False)
    assert len(everything) == 11
    assert len(present) == 11 - 4  # dashes at TX1-RX5, TX4-RX4, TX5-RX2, TX5-RX3


def test_select_unfiltered_is_non_outage(bundled):
    for band in (6.75, 16.95):
        for state in (LinkState.LOS, LinkState.NLOS):
            pts = select(bundled, band, state, "omni_asa_deg", exclude_missing=False)
            expected = [r for r in bundled if r.band.carrier_ghz == band
                        and r.link_state is state and not r.outage]
            assert len(pts) == len(expected)


def test_select_unknown_field(bundled):
    with pytest.raises(KeyError):
        select(bundled, 6.75, None, "omni_xyz")
