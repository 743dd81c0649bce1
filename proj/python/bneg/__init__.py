"""Python access to the bneg checks; the heavy lifting is in the C++ core."""

import json

from ._core import (
    ParameterError,
    ResourceError,
    check_h_identity,
    equation,
    fermat_count,
    gamma_relation,
    multiplicity_profile,
    self_intersection,
    version,
)
from . import _core

__all__ = [
    "ParameterError",
    "ResourceError",
    "check_h_identity",
    "equation",
    "fermat_count",
    "gamma_relation",
    "log_invariants",
    "multiplicity_profile",
    "self_intersection",
    "verify",
    "version",
]


def verify(p, m, e=1, fault=None):
    """Full verification report for (p, m, e) as a dict."""
    return json.loads(_core.verify_json(p, m, e, fault))


def log_invariants(m, d):
    return json.loads(_core.log_invariants_json(m, d))
