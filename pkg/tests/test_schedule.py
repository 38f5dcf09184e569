"""Schedule construction, interpolation, and CSV round trips."""

import io

import numpy as np
import pytest

from mamqa.errors import FormatError
from mamqa.schedule import (
    AnnealSchedule,
    default_schedule,
    load_schedule,
    save_schedule,
)

MINIMAL = "s,A,B\n0,1.0,0.1\n1,0.0,1.2\n"


class TestDefaultSchedule:
    def test_endpoints(self):
        sched = default_schedule()
        assert sched.evaluate(0.0) == (1.0, 0.0)
        assert sched.evaluate(1.0) == (0.0, 1.0)

    def test_linear_interior(self):
        sched = default_schedule()
        assert sched.evaluate(0.25) == pytest.approx((0.75, 0.25))
        assert sched.evaluate(0.5) == pytest.approx((0.5, 0.5))


class TestEvaluate:
    def test_midpoint_of_minimal_table(self):
        sched = load_schedule(io.StringIO(MINIMAL))
        a, b = sched.evaluate(0.5)
        assert a == pytest.approx(0.5)
        assert b == pytest.approx(0.65)

    def test_breakpoints_reproduced_exactly(self):
        rng = np.random.default_rng(0)
        s = np.concatenate([[0.0], np.sort(rng.random(8)), [1.0]])
        a = np.sort(rng.random(10))[::-1].copy()
        b = np.sort(rng.random(10))
        sched = AnnealSchedule(s=s, a=a, b=b)
        for k in range(10):
            assert sched.evaluate(float(s[k])) == (a[k], b[k])

    def test_domain_error(self):
        sched = default_schedule()
        with pytest.raises(ValueError):
            sched.evaluate(-0.01)
        with pytest.raises(ValueError):
            sched.evaluate(1.01)

    def test_continuity(self):
        sched = load_schedule(io.StringIO(MINIMAL))
        delta = 1e-6
        for s in np.linspace(0.0, 1.0 - delta, 101):
            a0, b0 = sched.evaluate(float(s))
            a1, b1 = sched.evaluate(float(s) + delta)
            # Slopes are O(1), so a 1e-6 step moves the value by O(1e-6).
            assert abs(a1 - a0) < 1e-5
            assert abs(b1 - b0) < 1e-5

    def test_dense_retabulation_exact_at_breakpoints(self):
        # Breakpoints chosen on the millesimal grid so the dense table
        # contains every original abscissa.
        s = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
        a = np.array([1.0, 0.9, 0.5, 0.2, 0.0])
        b = np.array([0.0, 0.3, 0.55, 0.8, 1.0])
        sched = AnnealSchedule(s=s, a=a, b=b)
        grid = np.arange(1001) / 1000.0
        table = np.array([sched.evaluate(float(x)) for x in grid])
        dense = AnnealSchedule(s=grid, a=table[:, 0], b=table[:, 1])
        for k in range(5):
            assert dense.evaluate(float(s[k])) == (a[k], b[k])


class TestLoadSchedule:
    def test_minimal_table(self):
        sched = load_schedule(io.StringIO(MINIMAL))
        assert sched.s.size == 2
        assert sched.evaluate(0.0) == (1.0, 0.1)

    def test_comments_and_blanks_ignored(self):
        text = "# hardware table\n\ns,A,B\n# interior comment\n0,1,0\n1,0,1\n"
        sched = load_schedule(io.StringIO(text))
        assert sched.s.size == 2

    def test_duplicate_abscissa_rejected(self):
        text = "s,A,B\n0,1,0\n0.5,0.6,0.4\n0.5,0.5,0.5\n1,0,1\n"
        with pytest.raises(FormatError):
            load_schedule(io.StringIO(text))

    def test_missing_endpoint_rejected(self):
        with pytest.raises(FormatError):
            load_schedule(io.StringIO("s,A,B\n0.1,1,0\n1,0,1\n"))
        with pytest.raises(FormatError):
            load_schedule(io.StringIO("s,A,B\n0,1,0\n0.9,0,1\n"))

    def test_negative_envelope_rejected(self):
        with pytest.raises(FormatError):
            load_schedule(io.StringIO("s,A,B\n0,-1,0\n1,0,1\n"))
        with pytest.raises(FormatError):
            load_schedule(io.StringIO("s,A,B\n0,1,0\n1,0,-1\n"))

    def test_bad_header_rejected(self):
        with pytest.raises(FormatError):
            load_schedule(io.StringIO("time,A,B\n0,1,0\n1,0,1\n"))

    def test_bad_cell_names_line(self):
        with pytest.raises(FormatError, match="line 3"):
            load_schedule(io.StringIO("s,A,B\n0,1,0\nx,0,1\n"))

    def test_non_monotone_envelope_warns(self):
        text = "s,A,B\n0,1,0\n0.5,1.1,0.5\n1,0,1\n"
        with pytest.warns(UserWarning):
            load_schedule(io.StringIO(text))

    def test_nonzero_final_a_warns(self):
        text = "s,A,B\n0,1,0\n1,0.05,1\n"
        with pytest.warns(UserWarning, match="A\\(1\\)"):
            load_schedule(io.StringIO(text))

    def test_hundred_row_round_trip_bit_identical(self):
        rng = np.random.default_rng(42)
        s = np.concatenate([[0.0], np.sort(rng.random(98)), [1.0]])
        # Final A pinned to 0 so loading stays warning-free.
        a = np.concatenate([np.sort(rng.random(99))[::-1], [0.0]])
        b = np.sort(rng.random(100))
        sched = AnnealSchedule(s=s, a=a, b=b)
        first = io.StringIO()
        save_schedule(sched, first)
        reloaded = load_schedule(io.StringIO(first.getvalue()))
        second = io.StringIO()
        save_schedule(reloaded, second)
        assert first.getvalue() == second.getvalue()
        assert np.array_equal(reloaded.s, sched.s)
        assert np.array_equal(reloaded.a, sched.a)
        assert np.array_equal(reloaded.b, sched.b)

    def test_file_round_trip(self, tmp_path):
        path = tmp_path / "sched.csv"
        save_schedule(default_schedule(), path)
        sched = load_schedule(path)
        assert sched.evaluate(0.5) == (0.5, 0.5)
