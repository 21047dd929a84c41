import pytest
from hypothesis import HealthCheck, settings

from opforge import algebras, cellular

settings.register_profile(
    "opforge", deadline=None, max_examples=25,
    suppress_health_check=[HealthCheck.function_scoped_fixture, HealthCheck.too_slow])
settings.load_profile("opforge")

RECORDED = []
TALLY = {"audited": 0, "bad": 0}
ACCEPTANCE = {}


def _recording(cls):
    original = cls.__init__

    def init(self, *args, **kwargs):
        original(self, *args, **kwargs)
        RECORDED.append(self)
    return original, init


@pytest.fixture(autouse=True)
def audit_ledgers(monkeypatch):
    """Every pushout built during a test must satisfy its ledger identity."""
    start = len(RECORDED)
    for cls in (cellular.FiltrationLedger, algebras.AlgebraLedger):
        _, init = _recording(cls)
        monkeypatch.setattr(cls, "__init__", init)
    yield
    bad = [led for led in RECORDED[start:] if not led.identity_holds()]
    TALLY["audited"] += len(RECORDED) - start
    TALLY["bad"] += len(bad)
    del RECORDED[start:]
    assert not bad, f"{len(bad)} pushout ledger(s) violate the dimension identity"


@pytest.fixture
def acceptance():
    """``record(number, label, ok, detail)`` for the end-of-run acceptance table."""
    def record(number, label, ok, detail=""):
        ACCEPTANCE[number] = (label, bool(ok), detail)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance")
    for number in sorted(ACCEPTANCE):
        label, ok, detail = ACCEPTANCE[number]
        if number == 10:
            ok = ok and TALLY["bad"] == 0
            detail += f"; {TALLY['audited']} pushout ledgers audited across the run, {TALLY['bad']} violations"
        tr.write_line(f"[{number:2d}] {'PASS' if ok else 'FAIL'}  {label}: {detail}")
