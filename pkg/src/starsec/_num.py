"""Small shared numerics helpers: Hermitian hygiene and stable log-dets."""

import numpy as np

from .errors import NumericDegeneracyError

#: Relative Frobenius defect above which a matrix is rejected as non-Hermitian.
HERMITIAN_REL_TOL = 1e-8


def hermitize(x):
    """(X + X^H)/2, suppressing 1-ulp asymmetry from matrix products."""
    return 0.5 * (x + x.conj().T)


def hermitian_defect(x):
    nx = np.linalg.norm(x)
    if nx == 0.0:
        return 0.0
    return float(np.linalg.norm(x - x.conj().T) / nx)


def require_hermitian(x, tol=HERMITIAN_REL_TOL, what="matrix"):
    """Return the symmetrized matrix, rejecting inputs that are not close
    to Hermitian."""
    defect = hermitian_defect(x)
    if defect > tol:
        raise NumericDegeneracyError(
            f"{what} is not Hermitian (relative defect {defect:.3e})")
    return hermitize(x)


def logdet_hpd(x, what="matrix"):
    """log det of a Hermitian positive-definite matrix via Cholesky."""
    try:
        chol = np.linalg.cholesky(x)
    except np.linalg.LinAlgError as exc:
        raise NumericDegeneracyError(
            f"{what} is not positive definite") from exc
    return 2.0 * float(np.sum(np.log(np.real(np.diag(chol)))))
