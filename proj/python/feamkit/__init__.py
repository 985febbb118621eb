"""Boolean-matrix session cipher toolkit.

Keys travel as the same serialized records the `feam` CLI reads and
writes, so the two front ends are interchangeable.
"""

from ._core import (
    __version__,
    analyze_key,
    decrypt,
    encrypt,
    group_order,
    keygen,
    run_attack,
)

__all__ = [
    "__version__",
    "analyze_key",
    "decrypt",
    "encrypt",
    "group_order",
    "keygen",
    "run_attack",
]
