"""Size guards for the exponential enumerations.

``SPC_SIZE_GUARD`` (an integer) overrides the congruence and exhaustive
filter bounds; the poset construction bound is raised to match if needed.
"""
import os

POSET_MAX = 24
PARTITION_MAX = 12
EXHAUSTIVE_MAX = 16


def _override():
    raw = os.environ.get("SPC_SIZE_GUARD")
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        return None


def poset_limit():
    o = _override()
    return max(POSET_MAX, o) if o is not None else POSET_MAX


def partition_limit():
    o = _override()
    return o if o is not None else PARTITION_MAX


def exhaustive_limit():
    o = _override()
    return o if o is not None else EXHAUSTIVE_MAX
