"""Sequential kernel loops with two interchangeable backends.

The compiled extension (`_core`, Cython) and the pure-numpy fallback
(`reference`) implement the same four functions; one backend is picked
once at import. Set CLOZESUM_KERNELS=py to force the fallback or =c to
require the extension (ImportError if it was not built).

Everything batched (input projections, weight-gradient contractions)
stays in numpy at the call sites; only the inherently sequential
per-timestep recurrences live behind this interface.
"""

import os

MODE_SAMPLE = 0
MODE_GREEDY = 1
MODE_FORCED = 2

_choice = os.environ.get("CLOZESUM_KERNELS", "auto")
if _choice not in ("auto", "c", "py"):
    raise RuntimeError(f"CLOZESUM_KERNELS must be auto, c or py, not {_choice!r}")

if _choice == "py":
    from . import reference as _impl

    BACKEND = "python"
else:
    try:
        from . import _core as _impl

        BACKEND = "c"
    except ImportError:
        if _choice == "c":
            raise
        from . import reference as _impl

        BACKEND = "python"

lstm_loop_forward = _impl.lstm_loop_forward
lstm_loop_backward = _impl.lstm_loop_backward
select_loop_forward = _impl.select_loop_forward
select_loop_backward = _impl.select_loop_backward
