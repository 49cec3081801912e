"""Analytic lower bounds on the critical intensity.

For a connection function with mass M = integral of phi over R^d, the
expected number of partners of a typical point at intensity gamma is
q = gamma * M. Comparing cluster growth with a branching process whose
offspring mean is q shows the model cannot percolate while q < 1, so
1 / M is a lower bound on the critical intensity.

The same comparison yields a quantitative certificate: when q < 1, the
constant g = q / (1 - q) satisfies q * (1 + g) <= g, which bounds the
mean number of further cluster points by g and hence the mean cluster
size by 1 + g = 1 / (1 - q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from .connection import ConnectionModel, effective_connectivity_mass

__all__ = ["BranchingReport", "branching_bound", "constant_g_certificate"]


@dataclass(frozen=True)
class BranchingReport:
    """Branching comparison at one intensity.

    expected_degree is gamma times the connectivity mass. When it is
    below 1 the certificate is valid: cluster_excess_bound bounds the
    mean number of cluster points besides the origin, and
    mean_cluster_size_bound = 1 + cluster_excess_bound. certificate_slack
    is cluster_excess_bound minus expected_degree * (1 +
    cluster_excess_bound), non-negative up to rounding for a valid
    certificate. The three certificate fields are None when
    expected_degree >= 1.
    """

    model: str
    dim: int
    connectivity_mass: float
    branching_bound: float
    gamma: float
    expected_degree: float
    certificate_valid: bool
    cluster_excess_bound: float | None
    mean_cluster_size_bound: float | None
    certificate_slack: float | None

    def to_dict(self) -> dict[str, Any]:
        return {
            "model": self.model,
            "dim": self.dim,
            "connectivity_mass": self.connectivity_mass,
            "branching_bound": self.branching_bound,
            "gamma": self.gamma,
            "expected_degree": self.expected_degree,
            "certificate_valid": self.certificate_valid,
            "cluster_excess_bound": self.cluster_excess_bound,
            "mean_cluster_size_bound": self.mean_cluster_size_bound,
            "certificate_slack": self.certificate_slack,
        }


def branching_bound(model: ConnectionModel, dim: int, quad_tol: float = 1e-10) -> float:
    """Reciprocal of the connectivity mass: a lower bound on the critical intensity."""
    mass = effective_connectivity_mass(model, dim, quad_tol)
    if mass <= 0.0:
        raise ValueError(
            "connection function has zero mass; the branching bound is infinite"
        )
    return 1.0 / mass


def constant_g_certificate(
    model: ConnectionModel, dim: int, gamma: float, quad_tol: float = 1e-10
) -> BranchingReport:
    """Subcriticality certificate at a given intensity.

    Valid exactly when gamma is below the branching bound; the report
    then carries the implied mean cluster size bound 1 / (1 - q).
    """
    if not (math.isfinite(gamma) and gamma >= 0.0):
        raise ValueError(f"intensity must be finite and non-negative, got {gamma!r}")
    mass = effective_connectivity_mass(model, dim, quad_tol)
    if mass <= 0.0:
        raise ValueError(
            "connection function has zero mass; the branching bound is infinite"
        )
    q = gamma * mass
    if q < 1.0:
        g = q / (1.0 - q)
        report = BranchingReport(
            model=model.describe(),
            dim=dim,
            connectivity_mass=mass,
            branching_bound=1.0 / mass,
            gamma=gamma,
            expected_degree=q,
            certificate_valid=True,
            cluster_excess_bound=g,
            mean_cluster_size_bound=1.0 + g,
            certificate_slack=g - q * (1.0 + g),
        )
    else:
        report = BranchingReport(
            model=model.describe(),
            dim=dim,
            connectivity_mass=mass,
            branching_bound=1.0 / mass,
            gamma=gamma,
            expected_degree=q,
            certificate_valid=False,
            cluster_excess_bound=None,
            mean_cluster_size_bound=None,
            certificate_slack=None,
        )
    return report
