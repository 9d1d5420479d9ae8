"""Python access to the deformq core.

Functions and formal series are plain dicts in the same JSON layout the
command-line tool reads and writes; see the schemas directory.
"""

import json

from . import _core
from ._core import BudgetExceeded, SchemaError, UnrepresentableProduct, ValidationError

__all__ = [
    "BudgetExceeded",
    "SchemaError",
    "UnrepresentableProduct",
    "ValidationError",
    "commutator",
    "distance",
    "flat_section",
    "graphs",
    "run_cli",
    "seminorm",
    "star",
    "trace",
]


def _dump(obj):
    return None if obj is None else json.dumps(obj)


def _atlas(atlas):
    return atlas if isinstance(atlas, str) else json.dumps(atlas)


def star(lhs, rhs, N=None, omega=None):
    """Moyal product of two formal functions, truncated at order N."""
    return json.loads(_core.star(json.dumps(lhs), json.dumps(rhs), N, _dump(omega)))


def commutator(lhs, rhs, N=None, omega=None):
    return json.loads(_core.commutator(json.dumps(lhs), json.dumps(rhs), N, _dump(omega)))


def seminorm(f, k, atlas="flat", tol="1/1000000", N=None):
    """Certified enclosure {"lo", "hi", "approx"} of the order-k semi-norm."""
    return json.loads(_core.seminorm(json.dumps(f), k, _atlas(atlas), str(tol), N))


def distance(lhs, rhs, terms=10, atlas="flat", tol="1/1000000", N=None):
    return json.loads(_core.distance(json.dumps(lhs), json.dumps(rhs), terms, _atlas(atlas), str(tol), N))


def flat_section(f, W=8, N=None, omega=None):
    return json.loads(_core.flat_section(json.dumps(f), W, N, _dump(omega)))


def trace(f, n, N=None, omega=None):
    return json.loads(_core.trace(json.dumps(f), n, N, _dump(omega)))


def graphs(n, l, cap):
    """Admissible graphs of order l for dimension 2n with valency cap."""
    return json.loads(_core.graphs(n, l, cap))


def run_cli(*args):
    """Runs the command-line tool in process; returns (exit code, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])
