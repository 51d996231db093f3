"""Monte-Carlo round kernels.

The compiled Cython module is used when it was built; otherwise (or when
``PTSIM_PURE_PYTHON`` is set) the numpy fallback is selected. Both
produce identical output for identical arguments.
"""

import os

from . import _fallback

fallback = _fallback

if os.environ.get("PTSIM_PURE_PYTHON"):
    _impl = _fallback
else:
    try:
        from . import _core as _impl
    except ImportError:
        _impl = _fallback

BACKEND = "cython" if _impl is not _fallback else "python"

uniforms = _impl.uniforms
source_bits = _impl.source_bits
sample_rounds = _impl.sample_rounds


def compiled():
    """The compiled module, or None if it is not available."""
    try:
        from . import _core
    except ImportError:
        return None
    return _core
