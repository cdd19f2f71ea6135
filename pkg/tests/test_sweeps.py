"""Sweeps: grids, regime boundaries, table emission, audit campaigns."""

import csv
import io
import json
import math

import pytest

from otto_forge import (
    CycleConfig,
    CycleKind,
    DisplacedThermalBath,
    RegimeTag,
    SecondKindBath,
    SqueezedThermalBath,
    SweepAxis,
    SweepSpec,
    ThermalBath,
    audit_campaign,
    emit_table,
    occupation,
    run_sweep,
)
from otto_forge.sweeps import TABLE_COLUMNS, row_record

FIG5_BASE = CycleConfig(7, 20, 2, 10, SqueezedThermalBath(0.5))


def fig5_delta_n_spec(steps=101):
    return SweepSpec(
        base=FIG5_BASE,
        axis=SweepAxis.DELTA_N,
        start=0.0,
        stop=1.0,
        steps=steps,
        cycle_kind=CycleKind.MODIFIED,
    )


class TestSweepSpecValidation:
    def test_steps_must_be_at_least_two(self):
        with pytest.raises(ValueError):
            SweepSpec(FIG5_BASE, SweepAxis.SQUEEZE_R, 0.0, 1.0, steps=1)

    def test_bounds_must_be_ordered(self):
        with pytest.raises(ValueError):
            SweepSpec(FIG5_BASE, SweepAxis.SQUEEZE_R, 1.0, 0.5, steps=5)

    def test_frequency_ratio_domain(self):
        with pytest.raises(ValueError):
            SweepSpec(FIG5_BASE, SweepAxis.FREQUENCY_RATIO, 0.0, 1.0, steps=5)
        with pytest.raises(ValueError):
            SweepSpec(FIG5_BASE, SweepAxis.FREQUENCY_RATIO, 0.5, 1.5, steps=5)

    def test_axis_bath_compatibility(self):
        thermal = CycleConfig(7, 20, 2, 10, ThermalBath())
        with pytest.raises(ValueError):
            SweepSpec(thermal, SweepAxis.DELTA_N, 0.0, 1.0, steps=5)
        with pytest.raises(ValueError):
            SweepSpec(thermal, SweepAxis.SQUEEZE_R, 0.0, 1.0, steps=5)
        displaced = CycleConfig(7, 20, 2, 10, DisplacedThermalBath(1.0))
        with pytest.raises(ValueError):
            SweepSpec(displaced, SweepAxis.SQUEEZE_R, 0.0, 1.0, steps=5)
        with pytest.raises(ValueError):
            SweepSpec(FIG5_BASE, SweepAxis.DISPLACEMENT_MAG, 0.0, 1.0, steps=5)

    def test_cold_temperature_stays_below_t2(self):
        with pytest.raises(ValueError):
            SweepSpec(FIG5_BASE, SweepAxis.COLD_TEMPERATURE, 0.0, 11.0, steps=5)


class TestRunSweep:
    def test_fig5_sweep_shape_and_monotonicity(self):
        rows = run_sweep(fig5_delta_n_spec())
        assert len(rows) == 101
        assert all(row.error is None for row in rows)
        etas = [row.ledger.eta for row in rows]
        assert etas[0] == pytest.approx(0.65, abs=1e-12)
        assert etas[10] == pytest.approx(0.80529329383087463, abs=1e-4)
        assert all(b >= a for a, b in zip(etas, etas[1:]))
        assert all(row.law.first_law_residual < 1e-9 for row in rows)

    def test_delta_n_axis_hits_requested_excess(self):
        rows = run_sweep(fig5_delta_n_spec(steps=5))
        # W2 = omega2 * delta_n must track the axis
        for row in rows:
            assert row.ledger.w2 == pytest.approx(20 * row.axis_value, rel=1e-9, abs=1e-12)

    def test_delta_n_axis_for_displaced_bath_matches(self):
        base = CycleConfig(7, 20, 2, 10, DisplacedThermalBath(0.1))
        spec = SweepSpec(base, SweepAxis.DELTA_N, 0.0, 1.0, 11, CycleKind.MODIFIED)
        rows = run_sweep(spec)
        squeezed = run_sweep(fig5_delta_n_spec(steps=11))
        for a, b in zip(rows, squeezed):
            assert a.ledger.eta == pytest.approx(b.ledger.eta, abs=1e-12)

    def test_fig2_regime_boundaries(self):
        # squeezed bath fixes Theta; T1/Theta and T1/T2 must be bracketed
        # within one grid step by the regime transitions
        steps = 2001
        spec = SweepSpec(
            base=FIG5_BASE,
            axis=SweepAxis.FREQUENCY_RATIO,
            start=0.01,
            stop=1.0,
            steps=steps,
            cycle_kind=CycleKind.STANDARD,
        )
        rows = run_sweep(spec)
        step = (1.0 - 0.01) / (steps - 1)
        n2 = occupation(20, 10)
        dn = (2 * n2 + 1) * math.sinh(0.5) ** 2
        theta = 20 / math.log1p(1 / (n2 + dn))
        engine_boundary = 2 / theta
        carnot_boundary = 2 / 10

        first_engine = next(
            row.axis_value for row in rows if row.ledger.regime is not RegimeTag.NOT_ENGINE
        )
        assert abs(first_engine - engine_boundary) <= step

        first_positive_q2 = next(row.axis_value for row in rows if row.ledger.q2 >= 0.0)
        assert abs(first_positive_q2 - carnot_boundary) <= step

        for row in rows:
            if row.axis_value < engine_boundary - step:
                assert row.ledger.regime is RegimeTag.NOT_ENGINE
            elif engine_boundary + step < row.axis_value < carnot_boundary - step:
                assert row.ledger.regime is RegimeTag.SUPER_CARNOT_ENGINE_HEAT_PUMP
                assert row.ledger.q2 < 0.0
            elif row.axis_value > carnot_boundary + step:
                assert row.ledger.regime is RegimeTag.SUB_CARNOT_HYBRID_ENGINE
                assert row.ledger.q2 >= 0.0

    def test_per_point_errors_become_row_flags(self):
        base = CycleConfig(7, 20, 2, 10, SecondKindBath(excess=0.0))
        spec = SweepSpec(base, SweepAxis.DELTA_N, -1.0, 1.0, 9, CycleKind.SECOND_KIND)
        rows = run_sweep(spec)
        assert len(rows) == 9
        flagged = [row for row in rows if row.error is not None]
        clean = [row for row in rows if row.error is None]
        assert flagged and clean
        assert all("InvalidExcess" in row.error for row in flagged)

    def test_constant_axis_grid_yields_identical_ledgers(self):
        spec = SweepSpec(
            CycleConfig(7, 20, 2, 10, SecondKindBath(excess=0.0)),
            SweepAxis.COLD_TEMPERATURE,
            2.0,
            2.0 + 1e-15,
            2,
            CycleKind.SECOND_KIND,
        )
        rows = run_sweep(spec)
        assert rows[0].ledger.e2 == pytest.approx(rows[1].ledger.e2, rel=1e-12)

    def test_parallel_execution_preserves_order_and_values(self):
        spec = fig5_delta_n_spec(steps=41)
        sequential = emit_table(run_sweep(spec, max_workers=1))
        threaded = emit_table(run_sweep(spec, max_workers=4))
        assert sequential == threaded

    def test_workers_from_environment(self, monkeypatch):
        monkeypatch.setenv("OTTO_FORGE_THREADS", "3")
        spec = fig5_delta_n_spec(steps=11)
        assert emit_table(run_sweep(spec)) == emit_table(run_sweep(spec, max_workers=1))


class TestEmitTable:
    def test_single_row_csv_has_two_lines(self):
        spec = fig5_delta_n_spec(steps=2)
        rows = run_sweep(spec)[:1]
        payload = emit_table(rows, format="csv")
        lines = payload.decode().split("\r\n")
        assert lines[-1] == ""  # trailing CRLF
        assert len(lines) == 3
        assert lines[0] == ",".join(TABLE_COLUMNS)

    def test_csv_is_deterministic(self):
        spec = fig5_delta_n_spec(steps=21)
        assert emit_table(run_sweep(spec)) == emit_table(run_sweep(spec))

    def test_csv_floats_round_trip(self):
        rows = run_sweep(fig5_delta_n_spec(steps=11))
        payload = emit_table(rows, format="csv").decode()
        parsed = list(csv.reader(io.StringIO(payload)))
        assert parsed[0] == list(TABLE_COLUMNS)
        for row, raw in zip(rows, parsed[1:]):
            record = dict(zip(TABLE_COLUMNS, raw))
            assert float(record["W1"]) == row.ledger.w1
            assert float(record["eta"]) == row.ledger.eta
            assert record["regime"] == row.ledger.regime.value

    def test_json_round_trip_is_bit_exact(self):
        rows = run_sweep(fig5_delta_n_spec(steps=11))
        parsed = json.loads(emit_table(rows, format="json"))
        assert parsed == [row_record(row) for row in rows]

    def test_error_rows_flagged_in_both_formats(self):
        base = CycleConfig(7, 20, 2, 10, SecondKindBath(excess=0.0))
        spec = SweepSpec(base, SweepAxis.DELTA_N, -1.0, 0.0, 3, CycleKind.SECOND_KIND)
        rows = run_sweep(spec)
        record = json.loads(emit_table(rows, format="json"))[0]
        assert record["regime"].startswith("error:InvalidExcess")
        assert record["W1"] is None
        csv_first = emit_table(rows, format="csv").decode().split("\r\n")[1]
        assert "error:InvalidExcess" in csv_first

    def test_empty_rows_rejected(self):
        with pytest.raises(ValueError):
            emit_table([])

    def test_unknown_format_rejected(self):
        rows = run_sweep(fig5_delta_n_spec(steps=2))
        with pytest.raises(ValueError):
            emit_table(rows, format="parquet")


class TestAuditCampaign:
    def test_deterministic_for_fixed_seed(self):
        assert audit_campaign(50, seed=7) == audit_campaign(50, seed=7)

    def test_single_sample(self):
        summary = audit_campaign(1, seed=3)
        assert summary.samples == 1
        assert summary.ledgers >= 1

    def test_first_kind_family_is_clean(self):
        summary = audit_campaign(500, seed=11, family="first-kind")
        assert summary.ok
        assert summary.max_first_law_residual < 1e-9
        assert summary.clausius_violations == 0

    def test_second_kind_family_respects_carnot(self):
        summary = audit_campaign(500, seed=13, family="second-kind")
        assert summary.ok
        assert summary.bound_violations == 0
        assert summary.bound_checked > 50

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            audit_campaign(0, seed=1)
        with pytest.raises(ValueError):
            audit_campaign(10, seed=1, family="third-kind")
