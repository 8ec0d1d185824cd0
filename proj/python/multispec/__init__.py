"""Limiting and empirical moments of sparse multi-component random matrices.

Specs are accepted as dicts, JSON text, or paths to JSON files. Exact values
come back as ``fractions.Fraction``.
"""

import json
import os
from fractions import Fraction

from . import _multispec
from ._multispec import GuardError, SpecError, __version__

__all__ = [
    "GuardError",
    "SpecError",
    "__version__",
    "block_sizes",
    "brute_force_cluster_count",
    "carleman",
    "cluster_pass_count",
    "convergence_study",
    "correlator",
    "essential_walks",
    "limiting_moments",
    "oracle_moment",
    "run_cli",
    "sample_matrix",
    "sample_moments",
    "validate_spec",
    "verify_first_splitting",
    "verify_second_splitting",
]


def _spec_text(spec):
    if isinstance(spec, dict):
        return json.dumps(spec)
    if isinstance(spec, os.PathLike) or (isinstance(spec, str) and not spec.lstrip().startswith("{")):
        with open(spec, encoding="utf-8") as fh:
            return fh.read()
    return spec


def validate_spec(spec):
    """The resolved spec as a dict with rationals spelled "num/den"."""
    return json.loads(_multispec.validate_spec(_spec_text(spec)))


def block_sizes(n, spec):
    return _multispec.block_sizes(n, _spec_text(spec))


def limiting_moments(spec, max_order):
    return [Fraction(v) for v in _multispec.limiting_moments(_spec_text(spec), max_order)]


def oracle_moment(spec, order, max_length=12):
    return Fraction(_multispec.oracle_moment(_spec_text(spec), order, max_length))


def essential_walks(spec, length, max_length=12):
    return [(walk, Fraction(w)) for walk, w in _multispec.essential_walks(_spec_text(spec), length, max_length)]


def verify_first_splitting(spec, l, r):
    return _multispec.verify_first_splitting(_spec_text(spec), l, r)


def verify_second_splitting(spec, f, u):
    return _multispec.verify_second_splitting(_spec_text(spec), f, u)


def cluster_pass_count(j, i_list):
    return int(_multispec.cluster_pass_count(j, list(i_list)))


def brute_force_cluster_count(j, i_list, limit=8):
    return int(_multispec.brute_force_cluster_count(j, list(i_list), limit))


def sample_matrix(spec, n, law, seed):
    """Upper-triangle entries (i, j, w), 0-based."""
    return _multispec.sample_matrix(_spec_text(spec), n, law, seed)


def sample_moments(spec, n, law, seed, k_max, method="exact", probes=64):
    return _multispec.sample_moments(_spec_text(spec), n, law, seed, k_max, method, probes)


def convergence_study(spec, law, n_list, k_max, trials, seed, method="exact", probes=64):
    rows = _multispec.convergence_study(_spec_text(spec), law, list(n_list), k_max, trials, seed, method, probes)
    for row in rows:
        row["limit"] = Fraction(row["limit"])
    return rows


def correlator(spec, law, n, k, m, trials, seed):
    """(C_hat, jackknife stderr) for the covariance of M_k and M_m."""
    return _multispec.correlator(_spec_text(spec), law, n, k, m, trials, seed)


def carleman(spec, k_range=8):
    return _multispec.carleman(_spec_text(spec), k_range)


def run_cli(args):
    """(exit code, stdout text, stderr text)."""
    return tuple(_multispec.run_cli([str(a) for a in args]))
