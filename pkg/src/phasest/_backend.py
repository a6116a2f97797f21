"""Backend selection: compiled Cython kernels when available, numpy fallback.

Set PHASEST_BACKEND=purepy (or =compiled) to force a choice; by default the
compiled extension is used when it imports cleanly.
"""

from __future__ import annotations

import os

_forced = os.environ.get("PHASEST_BACKEND")

if _forced == "purepy":
    from . import _purepy as impl

    COMPILED = False
elif _forced == "compiled":
    from . import _kernels as impl  # noqa: F401  (ImportError is the user's answer)

    COMPILED = True
else:
    try:
        from . import _kernels as impl  # type: ignore[no-redef]

        COMPILED = True
    except ImportError:
        from . import _purepy as impl  # type: ignore[no-redef]

        COMPILED = False


def backend_name() -> str:
    return "compiled" if COMPILED else "purepy"
