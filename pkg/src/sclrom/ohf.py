"""Orthonormal history factor: turn raw snapshots into an orthonormal frame.

A snapshot history H = [v_1 .. v_m] in C^{n x m} with 2m <= n is split via
its thin SVD V diag(s) W into a span part V diag(s_j/s_1) W and a complement
part U diag(t_j) W with t_j = sqrt(1 - (s_j/s_1)^2), whose sum Vhat has
orthonormal columns. The factorization carries the scalars kappa = s_1 and
rho = v_1* v_1 / s_1, the projectors K = V V* and T = vhat_1 vhat_1*, and the
unitary circular shift factor advancing the Vhat columns cyclically, so that

    T v_1 = rho vhat_1,   U vhat_j = vhat_{j+1 mod m},   K kappa vhat_j = v_j.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cyclic import VectorSystem, cyclic_operator
from .errors import (
    DegenerateHistory,
    DimensionMismatch,
    DimensionTooSmall,
    NumericalFailure,
)

DEFAULT_RANK_TOL = 1e-12
_COMPLEMENT_DROP_TOL = 1e-8


@dataclass(eq=False)
class SnapshotHistory:
    """State snapshots of a discrete-time system, one per column.

    ``dt_meta`` is an optional sampling step annotation in seconds; it is
    informational only and never enters any computation.

    Zero columns are accepted at construction (a simulator may legitimately
    produce them); operations that require nonzero snapshots reject them
    when reached.
    """

    data: np.ndarray
    dt_meta: float | None = None

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.complex128)
        if data.ndim != 2:
            raise DimensionMismatch(f"snapshot matrix must be 2-D, got ndim={data.ndim}")
        if data.shape[1] < 1:
            raise DimensionMismatch("snapshot history needs at least one column")
        self.data = data

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def m(self) -> int:
        return self.data.shape[1]

    def column(self, t: int) -> np.ndarray:
        return self.data[:, t]


@dataclass(eq=False)
class SvdTriple:
    """Thin SVD factors with V diag(S) W reproducing the input.

    W is whatever right factor makes the product close (numpy's row
    convention); no conjugation is implied by the name.
    """

    V: np.ndarray
    S: np.ndarray
    W: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.V * self.S) @ self.W


@dataclass(eq=False)
class OhfFactorization:
    """Orthonormal history factor with its scalars, projectors, and shift.

    ``singular_values``/``t_values`` are None on instances rebuilt from a
    model file (the file stores only V, Vhat, and coefficients). ``W`` is
    the retained right SVD factor used by least-squares fitting; it is not
    persisted.
    """

    Vhat: np.ndarray
    V: np.ndarray
    kappa: complex
    rho: complex
    K: np.ndarray
    T: np.ndarray
    U_csf: np.ndarray
    singular_values: np.ndarray | None
    t_values: np.ndarray | None
    W: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.Vhat.shape[0]

    @property
    def m(self) -> int:
        return self.Vhat.shape[1]


@dataclass
class OhfReport:
    t_residual: float
    shift_residual: float
    k_residual: float
    unitary_residual: float
    passed: bool


def thin_svd(history: SnapshotHistory) -> SvdTriple:
    """Thin SVD of the snapshot matrix with a deterministic phase convention.

    The largest-magnitude entry of each left singular vector is made real
    and positive (the compensating phase is pushed into the matching row of
    W), which pins down the otherwise arbitrary per-triplet phases so that
    repeated runs produce identical factors.
    """
    try:
        V, S, W = np.linalg.svd(history.data, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    V = np.ascontiguousarray(V)
    W = np.ascontiguousarray(W)
    for j in range(S.shape[0]):
        idx = int(np.argmax(np.abs(V[:, j])))
        pivot = V[idx, j]
        mag = abs(pivot)
        if mag > 0.0:
            V[:, j] *= pivot.conjugate() / mag
            W[j, :] *= pivot / mag
    return SvdTriple(V=V, S=S, W=W)


def complement_basis(V: np.ndarray) -> np.ndarray:
    """m orthonormal columns spanning a subspace orthogonal to range(V).

    Gram-Schmidt is seeded with the canonical basis vectors e_1, e_2, ... in
    order, projecting out range(V) and previously accepted columns and
    skipping candidates whose residual drops below 1e-8, so the result is a
    deterministic function of V.
    """
    n, m = V.shape
    if n < 2 * m:
        raise DimensionTooSmall(f"complement of an m={m} frame needs n >= {2 * m}, got n={n}")
    accepted: list[np.ndarray] = []
    for i in range(n):
        r = np.zeros(n, dtype=np.complex128)
        r[i] = 1.0
        for _ in range(2):  # second pass guards against cancellation
            r = r - V @ (V.conj().T @ r)
            for u in accepted:
                r = r - u * np.vdot(u, r)
        norm = np.linalg.norm(r)
        if norm > _COMPLEMENT_DROP_TOL:
            accepted.append(r / norm)
            if len(accepted) == m:
                break
    if len(accepted) < m:
        raise NumericalFailure(
            f"complement construction found only {len(accepted)} of {m} directions"
        )
    return np.column_stack(accepted)


def derived_factors(V: np.ndarray, Vhat: np.ndarray, tol: float = 1e-8):
    """Recompute (K, T, U_csf) from the stored frames.

    Shared by the builder and the model loader so both produce bit-identical
    projectors and shift factors from bit-identical inputs.
    """
    K = V @ V.conj().T
    vhat1 = Vhat[:, 0:1]
    T = vhat1 @ vhat1.conj().T
    U_csf = cyclic_operator(VectorSystem(Vhat), tol=tol).C
    return K, T, U_csf


def build_ohf(
    history: SnapshotHistory,
    rank_tol: float = DEFAULT_RANK_TOL,
    truncate: bool = False,
) -> OhfFactorization:
    """Construct the orthonormal history factor of a snapshot history.

    Parameters
    ----------
    history : SnapshotHistory
        n x m snapshots with 2m <= n.
    rank_tol : float
        Relative singular-value threshold; snapshots are degenerate when
        s_m <= rank_tol * s_1.
    truncate : bool
        When True, a rank-deficient history is reduced to its numerical
        rank r: the leading r singular directions become an r-column core
        history V_r diag(s_1..s_r) (trivial right factor) and the
        factorization is built for that core. Opt-in because it changes
        the cycle length of the shift factor.

    Raises
    ------
    DimensionTooSmall
        If n < 2m (or n < 2r after truncation).
    DegenerateHistory
        If the numerical rank is below m and ``truncate`` is not set, or
        the history is numerically zero.
    """
    n, m = history.n, history.m
    if not truncate and n < 2 * m:
        raise DimensionTooSmall(f"need n >= 2m, got n={n}, m={m}")
    triple = thin_svd(history)
    s = triple.S
    rank = int(np.count_nonzero(s > rank_tol * s[0])) if s[0] > 0.0 else 0
    if rank < m:
        if not truncate:
            raise DegenerateHistory(
                f"numerical rank {rank} below m={m} at rank_tol={rank_tol:.1e}", rank=rank
            )
        if rank == 0:
            raise DegenerateHistory("history is numerically zero", rank=0)
        V = np.ascontiguousarray(triple.V[:, :rank])
        s = s[:rank]
        W = np.eye(rank, dtype=np.complex128)
        first_col = V[:, 0] * s[0]  # first column of the rank-r core history
        m = rank
    else:
        V, W = triple.V, triple.W
        first_col = history.data[:, 0]
    if n < 2 * m:
        raise DimensionTooSmall(f"need n >= 2m, got n={n}, m={m}")

    ratios = s / s[0]
    t_vals = np.sqrt(np.maximum(0.0, 1.0 - ratios**2))
    U_cols = complement_basis(V)
    span_part = (V * ratios) @ W
    complement_part = (U_cols * t_vals) @ W
    Vhat = np.ascontiguousarray(span_part + complement_part)

    kappa = complex(s[0])
    rho = complex(np.vdot(first_col, first_col).real / s[0])
    # internal consistency: vhat_1* v_1 must reproduce v_1* v_1 / s_1
    direct = np.vdot(Vhat[:, 0], first_col)
    if abs(direct - rho) > 1e-10 * abs(rho):
        raise NumericalFailure(
            f"first-column product {direct:.6e} deviates from rho {rho:.6e}"
        )

    K, T, U_csf = derived_factors(V, Vhat)
    return OhfFactorization(
        Vhat=Vhat,
        V=V,
        kappa=kappa,
        rho=rho,
        K=K,
        T=T,
        U_csf=U_csf,
        singular_values=s.copy(),
        t_values=t_vals,
        W=W,
    )


def verify_ohf(ohf: OhfFactorization, history: SnapshotHistory, tol: float = 1e-10) -> OhfReport:
    """Residuals of the four factorization identities against the history.

    t_residual   = ||T v_1 - rho vhat_1||
    shift_residual = max_j ||U vhat_j - vhat_{j+1 mod m}||
    k_residual   = max_j ||K kappa vhat_j - v_j|| / ||v_j||
    unitary_residual = ||U* U - 1||_F
    """
    if ohf.n != history.n or ohf.m != history.m:
        raise DimensionMismatch(
            f"factorization is (n={ohf.n}, m={ohf.m}) but history is (n={history.n}, m={history.m})"
        )
    Vhat, U, K = ohf.Vhat, ohf.U_csf, ohf.K
    v1 = history.data[:, 0]
    t_residual = float(np.linalg.norm(ohf.T @ v1 - ohf.rho * Vhat[:, 0]))
    advanced = np.roll(Vhat, -1, axis=1)
    shift_residual = float(np.max(np.linalg.norm(U @ Vhat - advanced, axis=0)))
    recon = ohf.kappa * (K @ Vhat)
    col_norms = np.linalg.norm(history.data, axis=0)
    k_residual = float(np.max(np.linalg.norm(recon - history.data, axis=0) / col_norms))
    eye = np.eye(ohf.n, dtype=np.complex128)
    unitary_residual = float(np.linalg.norm(U.conj().T @ U - eye))
    passed = max(t_residual, shift_residual, k_residual, unitary_residual) <= tol
    return OhfReport(t_residual, shift_residual, k_residual, unitary_residual, passed)
