from __future__ import annotations

from hypothesis import settings
from hypothesis import strategies as st

from u5free.detection import from_code

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def tournaments(draw, min_n: int = 0, max_n: int = 8):
    n = draw(st.integers(min_n, max_n))
    code = draw(st.integers(0, (1 << (n * (n - 1) // 2)) - 1))
    return from_code(n, code)
