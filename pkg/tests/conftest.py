import os
import sys

import pytest

os.environ.setdefault("WHMF_CACHE_DIR", os.path.join(os.path.dirname(__file__), ".whmf-cache-test"))


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("WHMF_CACHE_DIR", str(d))
    return d



def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)
