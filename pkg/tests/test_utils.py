"""
Unit tests for the utilities
Tests chunked parallel evaluation and logging setup
"""

import logging

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.models.enums import LogLevel
from src.utils.log_setup import setup_logging
from src.utils.parallel import chunk_slices, concatenate_chunks, map_chunks


class TestParallel:
    """Test chunked evaluation"""

    @given(st.integers(min_value=0, max_value=200), st.integers(min_value=1, max_value=50))
    def test_slices_cover_range(self, count, size):
        """Test slices are contiguous and cover every index once"""
        covered = [i for s in chunk_slices(count, size) for i in range(count)[s]]
        assert covered == list(range(count))

    def test_nonpositive_chunk_size(self):
        """Test a chunk size below one is treated as one"""
        assert len(chunk_slices(3, 0)) == 3

    def test_serial_and_threaded_identical(self):
        """Test both modes return the same arrays in submission order"""
        data = np.random.default_rng(5).normal(size=(97, 3))
        chunks = chunk_slices(len(data), 10)

        def work(rows: slice) -> np.ndarray:
            return np.cumsum(np.exp(data[rows]), axis=1)

        serial = concatenate_chunks(map_chunks(work, chunks, serial=True))
        threaded = concatenate_chunks(map_chunks(work, chunks, serial=False, max_workers=4))
        np.testing.assert_array_equal(serial, threaded)
        np.testing.assert_array_equal(serial, np.cumsum(np.exp(data), axis=1))

    def test_errors_propagate(self):
        """Test an exception in a worker reaches the caller"""

        def fail(item: int) -> int:
            raise ValueError(f"bad item {item}")

        with pytest.raises(ValueError):
            map_chunks(fail, [1, 2], serial=False, max_workers=2)


class TestLogSetup:
    """Test logging configuration"""

    @pytest.mark.parametrize("level", [LogLevel.DEBUG, "WARNING"])
    def test_root_level(self, level):
        """Test the root logger takes the requested level"""
        setup_logging(level)
        assert logging.getLogger().level == getattr(logging, LogLevel(level).value)

    def test_invalid_level(self):
        """Test unknown level names are refused"""
        with pytest.raises(ValueError):
            setup_logging("VERBOSE")
