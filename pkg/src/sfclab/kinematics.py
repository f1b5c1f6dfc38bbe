"""Damped-least-squares differential inverse kinematics.

Away from singularities the right pseudoinverse ``J^T (J J^T)^-1`` gives the
minimum-norm joint velocity. Once the smallest singular value drops to the
threshold ``epsilon`` the damped form ``J^T (J J^T + lambda I)^-1`` is used
instead. The switch is a hard threshold, so the map jumps there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericError

__all__ = ["DlsConfig", "dls_pseudoinverse", "task_to_joint", "planar_jacobian"]


@dataclass(frozen=True)
class DlsConfig:
    epsilon: float = 1e-3
    lam: float = 1e-2

    def __post_init__(self):
        if not (self.epsilon > 0 and self.lam > 0):
            raise DomainError("epsilon and lambda must be > 0")


def _as_jacobian(J) -> np.ndarray:
    J = np.atleast_2d(np.asarray(J, dtype=float))
    if J.ndim != 2:
        raise DomainError("Jacobian must be a 2-D matrix")
    if not np.all(np.isfinite(J)):
        raise DomainError("Jacobian has non-finite entries")
    rows, cols = J.shape
    if rows > cols:
        raise DomainError(f"task dimension {rows} exceeds joint dimension {cols}")
    return J


def dls_pseudoinverse(J, cfg: DlsConfig = DlsConfig()) -> np.ndarray:
    """Thresholded damped-least-squares inverse of a ``m_r x n_r`` Jacobian."""
    J = _as_jacobian(J)
    sigma_min = float(np.linalg.svd(J, compute_uv=False).min())
    JJt = J @ J.T
    eye = np.eye(J.shape[0])
    if sigma_min > cfg.epsilon:
        try:
            return J.T @ np.linalg.solve(JJt, eye)
        except np.linalg.LinAlgError as exc:
            raise NumericError(
                f"J J^T singular although sigma_min={sigma_min:.3e} > epsilon={cfg.epsilon:.3e}"
            ) from exc
    return J.T @ np.linalg.solve(JJt + cfg.lam * eye, eye)


def task_to_joint(J, cfg: DlsConfig, v_task) -> np.ndarray:
    """Joint velocities realising the task-space velocity ``v_task``."""
    J = _as_jacobian(J)
    v = np.asarray(v_task, dtype=float).reshape(-1)
    if v.size != J.shape[0]:
        raise DomainError(f"velocity has {v.size} entries, Jacobian has {J.shape[0]} rows")
    return dls_pseudoinverse(J, cfg) @ v


def planar_jacobian(q, lengths) -> np.ndarray:
    """Position Jacobian (2 x k) of a planar serial arm with revolute joints."""
    q = np.asarray(q, dtype=float)
    lengths = np.asarray(lengths, dtype=float)
    angles = np.cumsum(q)
    J = np.zeros((2, q.size))
    for j in range(q.size):
        J[0, j] = -np.sum(lengths[j:] * np.sin(angles[j:]))
        J[1, j] = np.sum(lengths[j:] * np.cos(angles[j:]))
    return J
