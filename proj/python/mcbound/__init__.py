"""Exact boundary computations for the mapping class group of the
once-punctured torus and the four-punctured sphere."""

try:
    from ._mcbound import *  # installed wheel layout
    from ._mcbound import __version__
except ImportError:  # in-tree build: _mcbound.so on PYTHONPATH
    from _mcbound import *  # noqa: F401,F403
    from _mcbound import __version__  # noqa: F401
