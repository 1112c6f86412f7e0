from datetime import datetime, timedelta, timezone

import pytest

from windhealth.ingest import SampleRecord

T0 = datetime(2016, 1, 1, tzinfo=timezone.utc)
STEP = timedelta(minutes=10)


def make_records(winds=None, temps=None, powers=None, turbine="T1", start=T0):
    """Build records from parallel value lists; missing channels default."""
    n = max(len(x) for x in (winds, temps, powers) if x is not None)
    winds = winds if winds is not None else [6.0] * n
    temps = temps if temps is not None else [15.0] * n
    powers = powers if powers is not None else [50_000.0] * n
    return [
        SampleRecord(
            timestamp=start + i * STEP,
            turbine_id=turbine,
            wind_speed=float(winds[i]),
            temperature=float(temps[i]),
            power=float(powers[i]),
        )
        for i in range(n)
    ]


@pytest.fixture
def records_factory():
    return make_records
