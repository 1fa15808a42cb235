"""Transform-learning NMF with a quasi-Newton solver on the orthogonal manifold.

Submodules
----------
linalg         orthogonal-matrix primitives (exp retraction, projections, DCT)
objective      Itakura-Saito divergence and the penalized objective
nmf            multiplicative factor updates
transform_opt  manifold gradient/Hessian, Wolfe search, quasi-Newton step
driver         alternating minimization and transform-only runs
audio          WAV reading, framing, spectrograms
analysis       energy concentration and atom-similarity reports
matrixio       CSV schemas and the TLNMF1 binary matrix container
kernels        elementwise hot loops (numba or numpy, see TLNMF_BACKEND)

Submodules are imported lazily so the command-line front end can pin
thread counts before numpy loads.
"""

import importlib

__version__ = "0.1.0"

_SUBMODULES = (
    "analysis",
    "audio",
    "cli",
    "driver",
    "errors",
    "kernels",
    "linalg",
    "matrixio",
    "nmf",
    "objective",
    "transform_opt",
)


def __getattr__(name):
    if name in _SUBMODULES:
        return importlib.import_module(f".{name}", __name__)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    return sorted(list(globals()) + list(_SUBMODULES))
