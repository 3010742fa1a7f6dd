"""Shared test configuration.

Hypothesis is pinned to a derandomized profile so the suite is bit-stable
run to run; deadlines are off because a few strategies build numpy arrays
large enough to trip the default 200ms budget on slow machines.
"""

from hypothesis import settings

settings.register_profile("suite", deadline=None, derandomize=True, max_examples=60)
settings.load_profile("suite")
