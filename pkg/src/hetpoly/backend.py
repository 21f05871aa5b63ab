"""Kernel backend selection: compiled extension when available, else fallback.

Set HETPOLY_BACKEND=python or =compiled to force one side (the latter turns
a missing extension into a hard error).  Both backends are drop-in
equivalents producing bit-identical results; the compiled one is a few
hundred times faster on the sweep loop.
"""

import os

_forced = os.environ.get("HETPOLY_BACKEND", "")

if _forced == "python":
    from . import _purepy as _impl
elif _forced in ("", "compiled"):
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        if _forced == "compiled":
            raise
        from . import _purepy as _impl
else:
    raise RuntimeError(f"HETPOLY_BACKEND must be 'python' or 'compiled', got {_forced!r}")

BACKEND_NAME = _impl.BACKEND_NAME
MOVE_CODES = _impl.MOVE_CODES

full_energy = _impl.full_energy
move_delta = _impl.move_delta
draw_displacement = _impl.draw_displacement
mean_sq_step = _impl.mean_sq_step
run_sweeps = _impl.run_sweeps
