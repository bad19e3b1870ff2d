import pytest

from divbarrier import BarrierContract, DividendSchedule, MarketState, VanillaContract

# Defaults of the published comparison: r=3%, sigma=20%, K=50, B=65, T=1, d=1 at t=0.5.
RATE, VOL, STRIKE, BARRIER, MATURITY = 0.03, 0.2, 50.0, 65.0, 1.0


@pytest.fixture
def market():
    return MarketState(50.0, RATE, VOL)


@pytest.fixture
def call():
    return VanillaContract(STRIKE, MATURITY)


@pytest.fixture
def uo_call(call):
    return BarrierContract(call, BARRIER)


@pytest.fixture
def one_div():
    return DividendSchedule.from_pairs([(0.5, 1.0)])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
