"""Shared independent oracles for the test suite."""

import itertools

import numpy as np


def qp_oracle_enumerate(qp, tol=1e-9):
    """Exhaustive active-set oracle for min ||v||^2 under linear constraints.

    Tries every subset of inequalities as equalities, keeps candidates that
    are primal feasible and dual feasible, and returns (v, active_set) of
    the least-norm valid candidate, or None when the program is infeasible.
    Independent of the production solver: no working-set iteration at all.
    """
    nin = qp.c_ineq.shape[0]
    best = None
    for r in range(nin + 1):
        for subset in itertools.combinations(range(nin), r):
            M = np.concatenate([qp.a_eq, qp.c_ineq[list(subset)]], axis=0)
            rhs = np.concatenate([qp.b_eq, qp.d_ineq[list(subset)]])
            if M.shape[0]:
                alpha, *_ = np.linalg.lstsq(M @ M.T, rhs, rcond=None)
                v = M.T @ alpha
                if np.linalg.norm(M @ v - rhs) > tol * (1 + np.linalg.norm(rhs)):
                    continue
                mu = -alpha[qp.a_eq.shape[0]:]
            else:
                v = np.zeros(qp.dim)
                mu = np.zeros(0)
            if nin and np.any(qp.c_ineq @ v - qp.d_ineq > tol):
                continue
            if np.any(mu < -tol):
                continue
            if best is None or np.linalg.norm(v) < np.linalg.norm(best[0]) - tol:
                active = {j for i, j in enumerate(subset) if mu[i] > 1e-7}
                best = (v, active)
    return best
