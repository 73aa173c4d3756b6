from __future__ import annotations

import pytest

from cjmdp.code import ConvCode, parse_code
from cjmdp.gf import field

# Codes used throughout; compact form lists H_nu | ... | H_0.
F13_CMDP = "13:1 1|1 12|2 2"
F7_C2 = "7:1 1|1 2|5 5"
F5_C1 = "5:1 1|1 2|3 3"
F5_C0 = "5:1 1|1 2|1 1"


@pytest.fixture(scope="session")
def f13_code() -> ConvCode:
    return parse_code(F13_CMDP)


@pytest.fixture(scope="session")
def f7_code() -> ConvCode:
    return parse_code(F7_C2)


@pytest.fixture(scope="session")
def f5_code() -> ConvCode:
    return parse_code(F5_C1)


@pytest.fixture(scope="session")
def f16():
    return field(2, 4)


@pytest.fixture(scope="session")
def f128():
    return field(2, 7)
