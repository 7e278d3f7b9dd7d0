import logging

import pytest

from nlab import elk
from nlab.exception import NLabInvEnvValue


def _record(context=None):
    record = logging.LogRecord("wcop.checks", logging.WARNING, __file__, 1, "check %s", ("x",), None)
    if context is not None:
        record.context = context
    return record


def test_adapter_merges_context():
    adapter = elk.get("checks", seed=3)
    msg, kwargs = adapter.process("hello", {"extra": {"witness": {"n": 1}}})
    assert msg == "hello"
    assert kwargs["extra"]["context"] == {"seed": 3, "module_name": "wcop.checks", "witness": {"n": 1}}


def test_stderr_formatter_appends_context():
    line = elk.StderrFormatter().format(_record({"seed": 3}))
    assert line.endswith('check x {"seed": 3}')
    assert elk.StderrFormatter().format(_record()).endswith("check x")


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("WCOP_ELK_HOST", "elk.local")
    monkeypatch.setenv("WCOP_ELK_PORT", "6000")
    monkeypatch.setenv("WCOP_ELK_LEVEL", "debug")
    options = elk.ElkOptions().read_env()
    assert (options.host, options.port, options.level) == ("elk.local", 6000, "DEBUG")


def test_invalid_port(monkeypatch):
    monkeypatch.setenv("WCOP_ELK_PORT", "many")
    with pytest.raises(NLabInvEnvValue):
        elk.ElkOptions().read_env()


def test_setup_without_host_logs_to_stderr_only(monkeypatch):
    monkeypatch.delenv("WCOP_ELK_HOST", raising=False)
    root = elk.setup("wcop", "classify", level="INFO")
    assert [type(h) for h in root.handlers] == [logging.StreamHandler]
    assert root.level == logging.INFO
