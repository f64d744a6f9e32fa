"""No-trade region asymptotics for portfolios with fixed transaction costs.

The heavy lifting lives in the compiled extension ``_core``; this package
re-exports its public surface. In an installed wheel the extension sits
inside the package; in a development tree it is built next to the CMake
build directory and imported as a top-level module via PYTHONPATH.
"""

try:
    from ._core import Model, __version__
except ImportError:  # development layout: extension on sys.path, not in-package
    from _core import Model, __version__

__all__ = ["Model", "__version__"]
