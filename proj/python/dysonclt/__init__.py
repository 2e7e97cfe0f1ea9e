"""Global spectral fluctuations of time-dependent Wigner matrices.

Thin re-export of the compiled ``_core`` module: limiting-covariance
evaluators (series / contour / log-kernel / Chebyshev closed form), the
half-plane kernel with its section maps, entry-process admissibility checks,
and the Monte Carlo simulate-and-compare pipeline driven by the same JSON
configs as the ``dysonclt`` command-line tool.

Container-valued attributes cross the boundary by copy (pybind11 STL
conventions): mutate a config by assignment, e.g.
``cfg.observables = [...]``, not by appending to the returned list.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401
from ._core import __version__  # noqa: F401
