"""Panel quadrature helpers for open arcs.

All rules live on the reference interval ``[-1, 1]``.
"""

import functools

import numpy as np


@functools.lru_cache(maxsize=8)
def gauss_legendre(order):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@functools.lru_cache(maxsize=8)
def barycentric_weights(order):
    x, _ = gauss_legendre(order)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    bw = 1.0 / diff.prod(axis=1)
    bw.setflags(write=False)
    return bw


def lagrange_basis(order, tau):
    """Lagrange cardinal functions on the Gauss nodes, shape ``tau.shape + (order,)``."""
    x, _ = gauss_legendre(order)
    bw = barycentric_weights(order)
    tau = np.asarray(tau, dtype=float)
    diff = tau[..., None] - x
    exact = diff == 0
    diff = np.where(exact, 1.0, diff)
    terms = bw / diff
    out = terms / terms.sum(axis=-1, keepdims=True)
    hit = exact.any(axis=-1)
    if hit.any():
        out[hit] = exact[hit].astype(float)
    return out


def legendre_log_moments(order, s):
    """``q_n(s) = int_{-1}^{1} P_n(t) ln|s - t| dt`` for ``n < order``.

    Uses ``q_0 = (1+s) ln(1+s) + (1-s) ln(1-s) - 2`` and
    ``q_n = 2 (Q_{n+1} - Q_{n-1}) / (2n + 1)`` with Legendre functions of the
    second kind ``Q_n`` from forward recurrence, valid for ``|s| < 1``.
    Returns shape ``s.shape + (order,)``.
    """
    s = np.asarray(s, dtype=float)
    Q = np.empty(s.shape + (order + 1,))
    Q[..., 0] = 0.5 * np.log((1 + s) / (1 - s))
    Q[..., 1] = s * Q[..., 0] - 1
    for n in range(1, order):
        Q[..., n + 1] = ((2 * n + 1) * s * Q[..., n] - n * Q[..., n - 1]) / (n + 1)
    q = np.empty(s.shape + (order,))
    with np.errstate(divide="ignore", invalid="ignore"):
        q0 = (1 + s) * np.log1p(s) + (1 - s) * np.log1p(-s) - 2
    q[..., 0] = q0
    n = np.arange(1, order)
    q[..., 1:] = 2 * (Q[..., 2:order + 1] - Q[..., 0:order - 1]) / (2 * n + 1)
    return q


@functools.lru_cache(maxsize=8)
def _legendre_vandermonde_inverse(order):
    x, _ = gauss_legendre(order)
    V = np.polynomial.legendre.legvander(x, order - 1)
    inv = np.linalg.inv(V)
    inv.setflags(write=False)
    return inv


def log_product_weights(order, s):
    """Weights ``W`` with ``int p(t) ln|s - t| dt = W @ p(nodes)`` for polynomials of degree < order."""
    return legendre_log_moments(order, s) @ _legendre_vandermonde_inverse(order)


def adaptive_basis_integrals(kernel, jobs, order, tol=1e-13, max_depth=50):
    """Integrate ``kernel(job, tau) * l_j(tau)`` over ``[-1, 1]`` for every job.

    Parameters
    ----------
    kernel : callable
        ``kernel(job_idx, tau)`` with ``job_idx`` of shape ``(m,)`` and
        ``tau`` of shape ``(m, q)`` returns complex values of shape ``(m, q)``.
    jobs : int
        Number of independent integrals.
    order : int
        Gauss order, also the number of Lagrange basis functions.

    Returns
    -------
    ndarray, shape (jobs, order)

    Intervals are bisected until a parent rule and its two children agree
    to ``tol`` in every basis component; all jobs advance together.
    """
    x, w = gauss_legendre(order)
    result = np.zeros((jobs, order), dtype=complex)

    def rule(job, lo, hi):
        half = 0.5 * (hi - lo)
        tau = 0.5 * (hi + lo)[:, None] + half[:, None] * x
        vals = kernel(job, tau) * (half[:, None] * w)
        return np.einsum("mq,mqj->mj", vals, lagrange_basis(order, tau))

    job = np.arange(jobs)
    lo = np.full(jobs, -1.0)
    hi = np.full(jobs, 1.0)
    est = rule(job, lo, hi)
    depth = 0
    while job.size:
        mid = 0.5 * (lo + hi)
        both = rule(np.concatenate((job, job)), np.concatenate((lo, mid)), np.concatenate((mid, hi)))
        left, right = both[:job.size], both[job.size:]
        children = left + right
        err = np.max(np.abs(children - est), axis=1)
        done = (err <= tol) | (depth >= max_depth)
        np.add.at(result, job[done], children[done])
        keep = ~done
        job = np.concatenate((job[keep], job[keep]))
        lo, hi = np.concatenate((lo[keep], mid[keep])), np.concatenate((mid[keep], hi[keep]))
        est = np.concatenate((left[keep], right[keep]))
        depth += 1
    return result


def bernstein_radius(zeta):
    """``|zeta + sqrt(zeta^2 - 1)|`` on the branch with modulus >= 1."""
    zeta = np.asarray(zeta, dtype=complex)
    root = np.sqrt(zeta - 1) * np.sqrt(zeta + 1)
    return np.maximum(np.abs(zeta + root), np.abs(zeta - root))


def _legendre_q(order, zeta):
    """Legendre functions of the second kind ``Q_0 .. Q_order`` off the cut ``[-1, 1]``."""
    Q = np.empty(zeta.shape + (order + 1,), dtype=complex)
    Q[..., 0] = 0.5 * (np.log(zeta + 1) - np.log(zeta - 1))
    Q[..., 1] = zeta * Q[..., 0] - 1
    for n in range(1, order):
        Q[..., n + 1] = ((2 * n + 1) * zeta * Q[..., n] - n * Q[..., n - 1]) / (n + 1)
    return Q


def legendre_log_moments_complex(order, zeta):
    """``int_{-1}^{1} P_n(t) ln|zeta - t| dt`` for complex ``zeta`` off the segment.

    Forward recurrence for ``Q_n`` loses about ``rho^(2n)`` in relative
    accuracy, with ``rho`` the Bernstein radius, so use only close to the
    segment. Returns shape ``zeta.shape + (order,)``.
    """
    zeta = np.asarray(zeta, dtype=complex)
    Q = _legendre_q(order, zeta)
    q = np.empty(zeta.shape + (order,), dtype=complex)
    q[..., 0] = (zeta + 1) * np.log(zeta + 1) - (zeta - 1) * np.log(zeta - 1) - 2
    n = np.arange(1, order)
    q[..., 1:] = 2 * (Q[..., 2:order + 1] - Q[..., 0:order - 1]) / (2 * n + 1)
    return q.real


def log_product_weights_complex(order, zeta):
    """Weights for ``int p(t) ln|zeta - t| dt`` with complex ``zeta`` near ``[-1, 1]``."""
    return legendre_log_moments_complex(order, zeta) @ _legendre_vandermonde_inverse(order)


def cauchy_product_weights(order, zeta):
    """Weights for ``int p(t) / (t - zeta) dt``, using ``int P_n / (zeta - t) = 2 Q_n(zeta)``."""
    zeta = np.asarray(zeta, dtype=complex)
    moments = -2 * _legendre_q(order, zeta)[..., :order]
    return moments @ _legendre_vandermonde_inverse(order)
