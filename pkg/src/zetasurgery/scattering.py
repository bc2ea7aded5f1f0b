"""Finite-dimensional algebra of two symmetric involutions on ker Delta_Y.

For involutions S1, S2 with +-1 eigenspaces V_i^+-, let
L+ = V1+ & V2+, L- = V1- & V2-, and let V2 be the orthogonal complement of
L+ + L-.  Both involutions preserve V2, and C12 is S1 S2 restricted there.
Counts: h = dim V1+ + dim V2+ - 2 dim L+, h12 = dim L+.

Subspace intersections use principal angles computed from sines, which
stay accurate for nearly aligned subspaces; an angle below ANGLE_TOL counts
as zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError, InvalidArgumentError

ANGLE_TOL = 1e-9


def _orth_complement(basis: np.ndarray, n: int) -> np.ndarray:
    """Orthonormal basis (columns) of the complement of span(basis) in R^n."""
    if basis.shape[1] == 0:
        return np.eye(n)
    q, _ = np.linalg.qr(basis, mode="complete")
    return q[:, basis.shape[1]:]


def intersect(u1: np.ndarray, u2: np.ndarray, tol: float = ANGLE_TOL) -> np.ndarray:
    """Orthonormal basis of span(u1) & span(u2); u1, u2 have orthonormal columns."""
    n = u1.shape[0]
    if u1.shape[1] == 0 or u2.shape[1] == 0:
        return np.zeros((n, 0))
    # singular values of (I - P2) u1 are the sines of the principal angles
    resid = u1 - u2 @ (u2.T @ u1)
    _, s, vt = np.linalg.svd(resid)
    s_full = np.zeros(u1.shape[1])
    s_full[: len(s)] = s
    keep = s_full < tol
    if not keep.any():
        return np.zeros((n, 0))
    coeffs = vt.T[:, keep] if vt.shape[0] == u1.shape[1] else vt.T[:, keep[: vt.shape[0]]]
    vecs = u1 @ coeffs
    q, _ = np.linalg.qr(vecs)
    return q


def eigenspaces(s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases (columns) of the +1 and -1 eigenspaces of an involution."""
    w, v = np.linalg.eigh(s)
    return v[:, w > 0], v[:, w < 0]


def involution(q: np.ndarray, signs) -> np.ndarray:
    """Q diag(signs) Q^T for orthogonal Q."""
    d = np.asarray(signs, dtype=float)
    return (q * d) @ q.T


def check_involution(s: np.ndarray, tol: float = 1e-10) -> None:
    n = s.shape[0]
    if s.shape != (n, n):
        raise InvalidArgumentError("involution must be square")
    if not np.allclose(s, s.T, atol=tol):
        raise InvalidArgumentError("involution must be symmetric")
    if not np.allclose(s @ s, np.eye(n), atol=tol):
        raise InvalidArgumentError("matrix is not an involution (S^2 != Id)")


@dataclass(frozen=True)
class InvolutionPair:
    S1: np.ndarray
    S2: np.ndarray
    v1_plus: np.ndarray = field(init=False, repr=False)
    v1_minus: np.ndarray = field(init=False, repr=False)
    v2_plus: np.ndarray = field(init=False, repr=False)
    v2_minus: np.ndarray = field(init=False, repr=False)
    l_plus: np.ndarray = field(init=False, repr=False)
    l_minus: np.ndarray = field(init=False, repr=False)
    v2_space: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        s1 = np.asarray(self.S1, dtype=float)
        s2 = np.asarray(self.S2, dtype=float)
        if s1.shape != s2.shape:
            raise InvalidArgumentError("involutions must act on the same space")
        check_involution(s1)
        check_involution(s2)
        setattr_ = object.__setattr__
        setattr_(self, "S1", s1)
        setattr_(self, "S2", s2)
        p1, m1 = eigenspaces(s1)
        p2, m2 = eigenspaces(s2)
        lp, lm = intersect(p1, p2), intersect(m1, m2)
        for name, val in (("v1_plus", p1), ("v1_minus", m1), ("v2_plus", p2), ("v2_minus", m2)):
            setattr_(self, name, val)
        setattr_(self, "l_plus", lp)
        setattr_(self, "l_minus", lm)
        setattr_(self, "v2_space", _orth_complement(np.hstack([lp, lm]), self.dim))

    @property
    def dim(self) -> int:
        return self.S1.shape[0]

    @property
    def h12(self) -> int:
        return self.l_plus.shape[1]

    @property
    def h(self) -> int:
        return self.v1_plus.shape[1] + self.v2_plus.shape[1] - 2 * self.h12

    @property
    def C12(self) -> np.ndarray:
        q = self.v2_space
        return q.T @ self.S1 @ self.S2 @ q


def det_half_id_minus_c12(p: InvolutionPair) -> float:
    """det((Id - C12) / 2) on V2; 1 when V2 is empty."""
    c = p.C12
    if c.shape[0] == 0:
        return 1.0
    return float(np.linalg.det((np.eye(c.shape[0]) - c) / 2.0))


def _projector(basis: np.ndarray) -> np.ndarray:
    return basis @ basis.T


def det_S_block(p: InvolutionPair) -> float:
    """det of (Id, -P1; -P2, Id) on L+^perp + L+^perp.

    P_i projects onto the complement of L+ inside V_i^+.
    """
    n = p.dim
    perp = _orth_complement(p.l_plus, n)
    k = perp.shape[1]
    if k == 0:
        return 1.0
    lp = _projector(p.l_plus)
    proj1 = _projector(p.v1_plus) - lp
    proj2 = _projector(p.v2_plus) - lp
    a1 = perp.T @ proj1 @ perp
    a2 = perp.T @ proj2 @ perp
    eye = np.eye(k)
    block = np.block([[eye, -a1], [-a2, eye]])
    return float(np.linalg.det(block))


def random_involution_pair(rng: np.random.Generator, max_dim: int = 8) -> InvolutionPair:
    """Random pair; half the draws plant common +1 and -1 eigenvectors."""
    n = int(rng.integers(1, max_dim + 1))
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    if rng.random() < 0.5:
        s1 = involution(q, rng.choice([-1.0, 1.0], n))
        q2, _ = np.linalg.qr(rng.standard_normal((n, n)))
        s2 = involution(q2, rng.choice([-1.0, 1.0], n))
        return InvolutionPair(s1, s2)
    k_plus = int(rng.integers(0, n + 1))
    k_minus = int(rng.integers(0, n - k_plus + 1))
    shared = q[:, : k_plus + k_minus]
    rest = q[:, k_plus + k_minus:]
    signs = np.r_[np.ones(k_plus), -np.ones(k_minus)]
    base = involution(shared, signs) if shared.shape[1] else np.zeros((n, n))
    mats = []
    for _ in range(2):
        m = rest.shape[1]
        if m:
            w, _ = np.linalg.qr(rng.standard_normal((m, m)))
            inner = involution(w, rng.choice([-1.0, 1.0], m))
            mats.append(base + rest @ inner @ rest.T)
        else:
            mats.append(base)
    return InvolutionPair(mats[0], mats[1])


def det_s_identity_deviation(trials: int = 1000, max_dim: int = 8, seed: int = 0) -> float:
    """max |det S - det((Id - C12)/2)| over seeded random pairs."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        p = random_involution_pair(rng, max_dim)
        worst = max(worst, abs(det_S_block(p) - det_half_id_minus_c12(p)))
    return worst


def gram_A(traces) -> np.ndarray:
    """Gram matrix of boundary traces given as rows of mode coefficients
    (orthonormal mode basis).  Empty input gives the 0x0 matrix."""
    t = np.atleast_2d(np.asarray(traces, dtype=float)) if len(traces) else np.zeros((0, 0))
    if t.shape[0] == 0:
        return np.zeros((0, 0))
    s = np.linalg.svd(t, compute_uv=False)
    if s.size < t.shape[0] or s.min() <= 1e-12 * max(1.0, s.max()):
        raise DegenerateInputError("boundary traces are linearly dependent")
    return t @ t.T


def gram_det(g: np.ndarray) -> float:
    """Determinant with the empty convention det = 1."""
    return 1.0 if g.shape[0] == 0 else float(np.linalg.det(g))


def gram_B_r(cap_gram, r: float) -> np.ndarray:
    """B_r for the product model of a kernel with q orthonormal cross-section
    profiles phi_k.

    Unnormalized kernel elements are P1 phi_k + P2 phi_k on the caps and
    phi_k on the neck [-r, r]; their Gram matrix is 2r Id + C with C the cap
    Gram matrix.  The elements are orthonormalized by Cholesky, and B_r is the
    Gram matrix of their traces (phi, phi) on the two boundary copies.
    """
    c = np.atleast_2d(np.asarray(cap_gram, dtype=float))
    q = c.shape[0]
    if q == 0:
        return np.zeros((0, 0))
    if r <= 0:
        raise InvalidArgumentError("r must be positive")
    g = 2.0 * r * np.eye(q) + c
    chol = np.linalg.cholesky(g)
    # orthonormal elements: psi G^{-1/2}-type change of basis via L^{-T}
    change = np.linalg.inv(chol).T
    traces = np.vstack([np.eye(q), np.eye(q)])  # (phi, phi) on the two copies
    t = traces @ change
    return t.T @ t


def gram_decay_fit(cap_gram, r_grid=(4.0, 8.0, 16.0, 32.0)) -> tuple[float, list[float]]:
    """log-log slope of |r^q det B_r - 1| against r, and the deviations."""
    c = np.atleast_2d(np.asarray(cap_gram, dtype=float))
    q = c.shape[0]
    devs = [abs(r**q * gram_det(gram_B_r(c, r)) - 1.0) for r in r_grid]
    slope = float(np.polyfit(np.log(r_grid), np.log(devs), 1)[0])
    return slope, devs


def synthetic_zero_block(p: InvolutionPair, c1: float, c2: float, r: float) -> np.ndarray:
    """Zero-mode block of R_r for caps whose zero-energy DtN is c_i on V_i^-
    and 0 on V_i^+:  diag(c1 P1-, c2 P2-) + (1/2r) [[Id, -Id], [-Id, Id]]."""
    n = p.dim
    eye = np.eye(n)
    caps = np.block(
        [[c1 * _projector(p.v1_minus), np.zeros((n, n))], [np.zeros((n, n)), c2 * _projector(p.v2_minus)]]
    )
    neck = np.block([[eye, -eye], [-eye, eye]]) / (2.0 * r)
    return caps + neck


def restricted_log_det(block: np.ndarray, tol: float = 1e-10) -> tuple[float, int]:
    """log det of a PSD matrix on the complement of its kernel, and the kernel dimension."""
    w = np.linalg.eigvalsh(block)
    scale = max(1.0, float(np.abs(w).max()))
    mask = np.abs(w) > tol * scale
    return float(np.sum(np.log(w[mask]))), int((~mask).sum())


def zero_block_limit(p: InvolutionPair, c1: float, c2: float, r: float) -> dict[str, float]:
    """Scaled zero-block determinant and its predicted limit.

    scaled = r^{h + h12} det'(zero block of R_r)
    predicted = 2^{-h} det(S) c1^{dim V1-} c2^{dim V2-}
    """
    logdet, kernel = restricted_log_det(synthetic_zero_block(p, c1, c2, r))
    scaled = math.exp((p.h + p.h12) * math.log(r) + logdet)
    predicted = 2.0 ** (-p.h) * det_S_block(p) * c1 ** p.v1_minus.shape[1] * c2 ** p.v2_minus.shape[1]
    return {"scaled": scaled, "predicted": predicted, "kernel_dim": kernel, "h": p.h, "h12": p.h12}
