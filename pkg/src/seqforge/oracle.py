"""Dense, deliberately naive reference implementations.

Everything here is O(N^2) to O(N^4) and exists to cross-check the fast paths
in tests. Nothing in this module calls the FFT engine; eigenvalues come from a
self-contained Jacobi solver rather than LAPACK.
"""
from __future__ import annotations

import numpy as np

from .corr import as_complex, autocorr_direct, check_weights

MAX_LIFTED_N = 8


def _require_lifted(N: int):
    if N > MAX_LIFTED_N:
        raise ValueError(f"dense N^2 x N^2 objects are capped at N <= {MAX_LIFTED_N}, got {N}")


# --------------------------------------------------------------------------
# eigenvalues
# --------------------------------------------------------------------------

def _round_robin(n: int):
    """Pairings of 0..n-1 (n even) such that every pair meets once per sweep."""
    players = list(range(n))
    for _ in range(n - 1):
        yield [(players[i], players[n - 1 - i]) for i in range(n // 2)]
        players = [players[0]] + [players[-1]] + players[1:-1]


def jacobi_eigvalsh_real(A: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Ascending eigenvalues of a real symmetric matrix by cyclic Jacobi.

    Rotations on disjoint index pairs are applied together (round-robin
    ordering). Iterates until the off-diagonal Frobenius mass is below
    ``tol * ||A||_F``.
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    if not np.allclose(A, A.T, atol=1e-12 * max(1.0, np.abs(A).max(initial=0.0))):
        raise ValueError("matrix must be symmetric")
    A = 0.5 * (A + A.T)
    if n < 2:
        return np.diag(A).copy()
    m = n + (n % 2)
    if m != n:
        A = np.pad(A, ((0, 1), (0, 1)))
    scale = np.linalg.norm(A) or 1.0
    rounds = [np.array(r).T for r in _round_robin(m)]
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= tol * scale:
            break
        for P, Q in rounds:
            apq = A[P, Q]
            app = A[P, P]
            aqq = A[Q, Q]
            c = np.ones_like(apq)
            s = np.zeros_like(apq)
            nz = apq != 0
            if not np.any(nz):
                continue
            tau = (aqq[nz] - app[nz]) / (2.0 * apq[nz])
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            c[nz] = 1.0 / np.sqrt(1.0 + t * t)
            s[nz] = t * c[nz]
            colP = A[:, P].copy()
            colQ = A[:, Q]
            A[:, P] = colP * c - colQ * s
            A[:, Q] = colP * s + colQ * c
            rowP = A[P, :].copy()
            rowQ = A[Q, :]
            A[P, :] = c[:, None] * rowP - s[:, None] * rowQ
            A[Q, :] = s[:, None] * rowP + c[:, None] * rowQ
    ev = np.sort(np.diag(A))
    if m != n:
        # the padded zero row/column contributes one exact zero eigenvalue
        idx = np.argmin(np.abs(ev))
        ev = np.delete(ev, idx)
    return ev


def eigvalsh(A: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (real symmetric or complex)."""
    A = np.asarray(A)
    if not np.iscomplexobj(A) or not np.any(A.imag):
        return jacobi_eigvalsh_real(A.real)
    if not np.allclose(A, A.conj().T, atol=1e-12 * max(1.0, np.abs(A).max())):
        raise ValueError("matrix must be Hermitian")
    # [[Re, -Im], [Im, Re]] carries every eigenvalue of A twice
    big = np.block([[A.real, -A.imag], [A.imag, A.real]])
    return jacobi_eigvalsh_real(big)[::2]


# --------------------------------------------------------------------------
# structured matrices
# --------------------------------------------------------------------------

def dft_matrix(n: int) -> np.ndarray:
    """Dense ``F[m, k] = exp(-2j*pi*m*k/n)``."""
    m = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(m, m) / n)


def build_shift_U(N: int, k: int) -> np.ndarray:
    """Ones on the k-th diagonal (k > 0 above the main one), so ``tr(U_k x x^H) = r_k``."""
    if not -(N - 1) <= k <= N - 1:
        raise ValueError("lag out of range")
    return np.eye(N, k=k)


def build_L_dense(weights, N: int) -> np.ndarray:
    """``sum_k w_k vec(U_k) vec(U_k)^H`` over k = 1-N..N-1 (N^2 x N^2)."""
    _require_lifted(N)
    w = check_weights(weights, N, allow_zero=True)
    L = np.zeros((N * N, N * N))
    for k in range(1, N):
        for kk in (k, -k):
            u = build_shift_U(N, kk).reshape(-1, order="F")
            L += w[k - 1] * np.outer(u, u)
    return L


def hermitian_toeplitz(t) -> np.ndarray:
    """Dense Hermitian Toeplitz matrix with first column `t`."""
    t = np.asarray(t, dtype=complex)
    N = t.size
    T = np.empty((N, N), dtype=complex)
    for m in range(N):
        for n in range(N):
            T[m, n] = t[m - n] if m >= n else np.conj(t[n - m])
    return T


def build_R_dense(profile, weights) -> np.ndarray:
    """``sum_k w_k r_{-k} U_k``: zero diagonal, ``w_k r_k`` on the k-th subdiagonal."""
    r = np.asarray(profile, dtype=complex)
    N = r.size
    w = check_weights(weights, N, allow_zero=True)
    R = np.zeros((N, N), dtype=complex)
    for k in range(1, N):
        R += w[k - 1] * np.conj(r[k]) * build_shift_U(N, k)
        R += w[k - 1] * r[k] * build_shift_U(N, -k)
    return R


def build_B_dense(weights, N: int) -> np.ndarray:
    """``sum_k w_k (N-|k|) U_k``, the Toeplitz image of the row sums of L."""
    w = check_weights(weights, N, allow_zero=True)
    B = np.zeros((N, N))
    for k in range(1, N):
        B += w[k - 1] * (N - k) * (build_shift_U(N, k) + build_shift_U(N, -k))
    return B


def spectral_bounds_dense(first_column) -> tuple[float, float]:
    """Lower/upper eigenvalue bounds via the dense 2N DFT of the circulant embedding."""
    t = np.asarray(first_column, dtype=complex)
    N = t.size
    c = np.concatenate([t, [0.0], np.conj(t[:0:-1])])
    mu = (dft_matrix(2 * N) @ c).real
    even, odd = mu[0::2], mu[1::2]
    return 0.5 * (even.min() + odd.min()), 0.5 * (even.max() + odd.max())


# --------------------------------------------------------------------------
# structural identity checks
# --------------------------------------------------------------------------

def psd_check_diag_dominance(L: np.ndarray) -> bool:
    """True if ``Diag(L 1) - L`` is PSD for a real symmetric nonnegative L."""
    L = np.asarray(L, dtype=float)
    if np.any(L < 0) or not np.allclose(L, L.T):
        raise ValueError("L must be real, symmetric and nonnegative")
    D = np.diag(L.sum(axis=1)) - L
    lam = jacobi_eigvalsh_real(D)
    return bool(lam.min() >= -1e-9 * max(1.0, np.linalg.norm(L)))


def hadamard_diag_identity_check(A, Bm, x) -> bool:
    """``(A o B) x == diag(A Diag(x) B^T)`` to 1e-10."""
    A, Bm, x = np.asarray(A), np.asarray(Bm), np.asarray(x)
    lhs = (A * Bm) @ x
    rhs = np.diag(A @ np.diag(x) @ Bm.T)
    return bool(np.allclose(lhs, rhs, rtol=0, atol=1e-10 * max(1.0, np.abs(lhs).max())))


def eigset_check_phase_similarity(Bm, x) -> bool:
    """Spectra of a Hermitian `Bm` and of ``Bm o (x x^H)`` agree for unimodular x."""
    Bm = np.asarray(Bm)
    x = as_complex(x)
    if Bm.shape[0] > 10:
        raise ValueError("capped at N <= 10")
    if not np.allclose(np.abs(x), 1.0):
        raise ValueError("x must be unit-modulus")
    e1 = eigvalsh(Bm)
    e2 = eigvalsh(Bm * np.outer(x, np.conj(x)))
    return bool(np.allclose(e1, e2, rtol=0, atol=1e-8 * max(1.0, np.abs(e1).max())))


def majorizer_quadratic(x0: float, t: float, p: float):
    """``(a, linear, constant)`` of the quadratic bounding ``z**p`` on ``[0, t]`` at `x0`.

    For integer p the touching point ``x0 = t`` is also accepted (the limit
    curvature ``p(p-1)/2 t^(p-2)``); rounding can make the largest sidelobe
    equal the l_p norm exactly.
    """
    integer_p = float(p).is_integer()
    if not (t > 0 and 0 <= x0 and (x0 < t or (integer_p and x0 == t)) and p >= 2):
        raise ValueError("need t > 0, 0 <= x0 < t and p >= 2")
    if integer_p:
        # exact polynomial quotient; a sum of positive terms, free of cancellation
        j = np.arange(int(p) - 1)
        a = float(np.sum((j + 1) * x0**j * t ** (p - 2 - j)))
    else:
        a = (t**p - x0**p - p * x0 ** (p - 1) * (t - x0)) / (t - x0) ** 2
    return a, p * x0 ** (p - 1) - 2 * a * x0, a * x0**2 - (p - 1) * x0**p


# --------------------------------------------------------------------------
# dense solver steps
# --------------------------------------------------------------------------

def _lambda_u_dense(r, w) -> float:
    return spectral_bounds_dense(np.concatenate([[0.0], w * r[1:]]))[1]


def mwisl_step_dense(x, weights):
    """One MWISL step built literally from dense L, R and the 2N DFT matrix."""
    x = as_complex(x)
    N = x.size
    w = check_weights(weights, N)
    r = autocorr_direct(x)
    lam_L = eigvalsh(build_L_dense(w, N))[-1]
    lam_u = _lambda_u_dense(r, w)
    y = (lam_L * N + lam_u) * x - build_R_dense(r, w) @ x
    return y / np.abs(y)


def mwisl_diag_step_dense(x, weights):
    """One MWISL-Diag step from dense B, R and the Hadamard product with x x^H."""
    x = as_complex(x)
    N = x.size
    w = check_weights(weights, N)
    r = autocorr_direct(x)
    B = build_B_dense(w, N)
    lam_B = spectral_bounds_dense(B[:, 0])[0]
    lam_u = _lambda_u_dense(r, w)
    y = (lam_u - lam_B) * x + (B * np.outer(x, np.conj(x))) @ x - build_R_dense(r, w) @ x
    return y / np.abs(y)


def mm_psl_step_dense(x, p):
    """One MM-PSL step with un-normalized coefficients from the quadratic majorizer."""
    x = as_complex(x)
    N = x.size
    r = autocorr_direct(x)
    mag = np.abs(r[1:])
    t = np.sum(mag**p) ** (1.0 / p)
    a = np.empty(N - 1)
    w_hat = np.empty(N - 1)
    for k in range(N - 1):
        a[k] = majorizer_quadratic(mag[k], t, p)[0]
        # a + b / (2|r|) equals this, but cancels badly for large p
        w_hat[k] = 0.5 * p * mag[k] ** (p - 2)
    lam_L = eigvalsh(build_L_dense(a, N))[-1]
    lam_u = _lambda_u_dense(r, w_hat)
    y = (lam_L * N + lam_u) * x - build_R_dense(r, w_hat) @ x
    return y / np.abs(y)


# --------------------------------------------------------------------------
# stationarity
# --------------------------------------------------------------------------

def _wisl_of_phases(phases, w):
    r = autocorr_direct(np.exp(1j * phases))
    return float(np.dot(w, np.abs(r[1:]) ** 2))


def wisl_phase_gradient_fd(seq, weights, h: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of WISL with respect to the N phases."""
    phases = np.angle(as_complex(seq))
    N = phases.size
    w = check_weights(weights, N, allow_zero=True)
    g = np.empty(N)
    for n in range(N):
        e = np.zeros(N)
        e[n] = h
        g[n] = (_wisl_of_phases(phases + e, w) - _wisl_of_phases(phases - e, w)) / (2 * h)
    return g


def wisl_phase_gradient(seq, weights) -> np.ndarray:
    """Analytic phase gradient of WISL: ``sum_k 2 w_k Re(conj(r_k) dr_k/dphi_n)``."""
    x = as_complex(seq)
    N = x.size
    w = check_weights(weights, N, allow_zero=True)
    r = autocorr_direct(x)
    g = np.zeros(N)
    for k in range(1, N):
        dr = np.zeros(N, dtype=complex)
        # phi_n enters r_k as conj(x_n) x_{n+k} and as conj(x_{n-k}) x_n
        dr[: N - k] += -1j * np.conj(x[: N - k]) * x[k:]
        dr[k:] += 1j * np.conj(x[: N - k]) * x[k:]
        g += 2 * w[k - 1] * np.real(np.conj(r[k]) * dr)
    return g
