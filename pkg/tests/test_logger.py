# tests/test_logger.py
import logging

from utils.logger import ContextAwareRotatingFileHandler, ContextFilter, clear_context, get_context, set_context


def make_record(message="hello"):
    return logging.LogRecord("test", logging.INFO, __file__, 1, message, None, None)


def test_context_filter_defaults_to_global():
    clear_context()
    record = make_record()
    assert ContextFilter().filter(record)
    assert (record.run_id, record.cell_id) == ("global", "global")


def test_context_round_trip():
    set_context(run_id="run_x", cell_id="T1-A3-om1-p0")
    try:
        assert get_context() == {"run_id": "run_x", "cell_id": "T1-A3-om1-p0"}
    finally:
        clear_context()
    assert get_context() == {}


def test_context_handler_writes_per_cell(tmp_path):
    handler = ContextAwareRotatingFileHandler(str(tmp_path))
    handler.setFormatter(logging.Formatter("%(message)s"))
    set_context(run_id="run_x", cell_id="T1-A3-om1-p0")
    try:
        record = make_record("cell message")
        ContextFilter().filter(record)
        handler.emit(record)
    finally:
        clear_context()
        handler.close()
    log_file = tmp_path / "run_x" / "T1-A3-om1-p0" / "nu_engine.log"
    assert "cell message" in log_file.read_text()


def test_context_handler_skips_global_records(tmp_path):
    handler = ContextAwareRotatingFileHandler(str(tmp_path))
    record = make_record()
    ContextFilter().filter(record)
    handler.emit(record)
    handler.close()
    assert list(tmp_path.iterdir()) == []
