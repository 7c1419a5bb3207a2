import pytest

from structshift import parse_table

# Five firms A-E across six market situations I-VI; shares per column.
TABLE1_CSV = """category,I,II,III,IV,V,VI
A,0.20,0.20,0.17,0.16,0.23,0.15
B,0.20,0.20,0.23,0.18,0.23,0.28
C,0.20,0.20,0.17,0.16,0.23,0.15
D,0.20,0.15,0.23,0.30,0.23,0.28
E,0.20,0.25,0.20,0.20,0.08,0.14
"""


@pytest.fixture(scope="session")
def market_table():
    return parse_table(TABLE1_CSV, format="csv_wide", mode="shares")


@pytest.fixture(scope="session")
def market_csv():
    return TABLE1_CSV
