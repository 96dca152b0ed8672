"""Absolute norm attainment for positive diagonal, weighted shift and composite operators.

Operators are described by the same JSON documents the ``attain`` command
line tool reads, passed as a dict, a JSON string or a path. Exact values come
back as :class:`fractions.Fraction`.
"""

import json
import os
from fractions import Fraction

from . import _attain
from ._attain import AttainError, jacobi_eigenvalues, matrix_sqrt, norm_on_subspace

__all__ = [
    "AttainError",
    "classify",
    "decompose",
    "entries",
    "essential_spectrum",
    "is_an",
    "jacobi_eigenvalues",
    "matrix_sqrt",
    "norm_on_subspace",
    "predicted_norms",
    "verify_witness",
]


def _text(spec):
    if isinstance(spec, dict):
        return json.dumps(spec)
    if isinstance(spec, os.PathLike) or (isinstance(spec, str) and not spec.lstrip().startswith("{")):
        with open(spec, encoding="utf-8") as fh:
            return fh.read()
    return spec


def _fractions(values):
    return [Fraction(v) for v in values]


def classify(spec, sizes=(10, 50, 200), tol=1e-8):
    """Full classification report as a dict (same shape as ``attain classify --json``)."""
    return json.loads(_attain.classify_report(_text(spec), list(sizes), tol))


def is_an(spec):
    return classify(spec)["verdict"] == "AN"


def entries(spec, count):
    """Diagonal entries 1..count (shift moduli for a shift)."""
    return _fractions(_attain.entries(_text(spec), count))


def essential_spectrum(spec):
    return _fractions(_attain.essential_spectrum(_text(spec)))


def decompose(spec, count=20):
    """alpha, the F entries by index, and K+ on indices 1..count."""
    d = _attain.decompose(_text(spec), count)
    return {
        "alpha": Fraction(d["alpha"]),
        "f": {n: Fraction(v) for n, v in d["f"].items()},
        "kplus": _fractions(d["kplus"]),
    }


def predicted_norms(spec, count):
    """Exact restricted norms of the non-attainment witness subspaces."""
    return _fractions(_attain.predicted_norms(_text(spec), count))


def verify_witness(spec, m_max=10, n=200, tol=1e-8):
    return _attain.verify_witness(_text(spec), m_max, n, tol)
