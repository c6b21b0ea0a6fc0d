"""Exact braid group representations from R-matrices, with finiteness probes,
Temperley-Lieb and fusion-ring localization checks, and Gaussian representations."""
import os as _os

_threads = _os.environ.get("BRAIDLOC_THREADS")
if _threads:
    for _var in ("OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

__version__ = "0.1.0"

from .braid_rep import BraidWord, RepSpec, eval_word, probe_image, rep_from_r  # noqa: E402
from .cyclo import CycNum, parse_literal, zeta  # noqa: E402
from .fusion import FusionRing, catalog, localization_obstruction  # noqa: E402
from .matrix import SqMatrix  # noqa: E402
from .yang_baxter import ExceedsBound, Finite, RMatrixSpec, check_ybe, projective_order  # noqa: E402

__all__ = [
    "BraidWord",
    "CycNum",
    "ExceedsBound",
    "Finite",
    "FusionRing",
    "RMatrixSpec",
    "RepSpec",
    "SqMatrix",
    "catalog",
    "check_ybe",
    "eval_word",
    "localization_obstruction",
    "parse_literal",
    "probe_image",
    "projective_order",
    "rep_from_r",
    "zeta",
]
