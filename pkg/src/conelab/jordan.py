"""Matrix realizations of the cone (a=1 real symmetric, a=2 complex Hermitian).

Provides minors, conical functions, the Cayley transform, the kernel h and a
Haar Monte-Carlo estimator of psi_m(x) = E_u[Delta_m(u x u*)].
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .params import DomainParams, Partition, partition
from .symalg import evaluate, jack_psi

BACKENDS = {1: "sym-real", 2: "herm-complex"}
SHARD_SIZE = 25_000


class ConeDomainError(ValueError):
    pass


class SingularPivotError(np.linalg.LinAlgError):
    pass


def backend_for(a) -> str:
    try:
        return BACKENDS[int(a)] if int(a) == a else BACKENDS[a]
    except KeyError:
        raise ValueError(f"no matrix backend for a={a}; only a=1 and a=2 are realized") from None


@dataclass(frozen=True, eq=False)
class ConePoint:
    backend: str
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex if self.backend == "herm-complex" else float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("matrix must be square")
        if not np.allclose(m, m.conj().T, atol=1e-12):
            raise ValueError("matrix must be symmetric/Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def diagonal(cls, values: Sequence[float], backend: str = "sym-real") -> "ConePoint":
        return cls(backend, np.diag(np.asarray(values, dtype=float)))

    @property
    def r(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in decreasing order."""
        return np.linalg.eigvalsh(self.matrix)[::-1].copy()

    def in_cone(self) -> bool:
        return bool(np.all(self.eigenvalues > 0))


def parse_matrix(text: str, backend: str) -> ConePoint:
    """Row-major ``"2,0;0,1"``; complex entries like ``1+2j`` for the Hermitian backend."""
    conv = complex if backend == "herm-complex" else float
    rows = [[conv(t.strip()) for t in row.split(",")] for row in text.strip().split(";")]
    return ConePoint(backend, np.array(rows))


def leading_minors(mats: np.ndarray) -> np.ndarray:
    """Leading principal minors of a (batch of) square matrices, last axis indexes k."""
    r = mats.shape[-1]
    return np.stack([np.linalg.det(mats[..., :k, :k]) for k in range(1, r + 1)], axis=-1)


def minors(x: ConePoint) -> np.ndarray:
    return leading_minors(x.matrix).real


def eigenvalues(x: ConePoint) -> np.ndarray:
    return x.eigenvalues


def _conical_from_minors(alpha: Sequence[float], mins: np.ndarray) -> np.ndarray:
    alpha = list(alpha) + [0]
    out = np.ones(mins.shape[:-1])
    for k in range(len(alpha) - 1):
        e = alpha[k] - alpha[k + 1]
        if e == 0:
            continue
        base = mins[..., k]
        if float(e).is_integer():
            out = out * base ** int(e)
        else:
            if np.any(base <= 0):
                raise ConeDomainError("fractional power of a non-positive minor")
            out = out * base ** float(e)
    return out


def conical(alpha: Sequence[float], x: ConePoint) -> float:
    """``Delta_alpha(x) = prod_j Delta_j(x)^(alpha_j - alpha_{j+1})``."""
    if len(alpha) != x.r:
        raise ValueError(f"alpha has length {len(alpha)}, expected {x.r}")
    return float(_conical_from_minors(alpha, minors(x)))


def haar_batch(rng: np.random.Generator, n: int, r: int, backend: str) -> np.ndarray:
    """Haar-distributed orthogonal or unitary matrices via QR with phase correction."""
    if backend == "herm-complex":
        g = (rng.standard_normal((n, r, r)) + 1j * rng.standard_normal((n, r, r))) / np.sqrt(2)
    else:
        g = rng.standard_normal((n, r, r))
    q, rr = np.linalg.qr(g)
    d = np.diagonal(rr, axis1=-2, axis2=-1)
    ph = d / np.abs(d)
    return q * ph[..., None, :]


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int

    def to_json(self) -> dict:
        return {"mean": self.mean, "std_error": self.std_error, "samples": self.samples, "seed": self.seed}


def _shard_stats(m: Partition, x: ConePoint, n: int, seq: np.random.SeedSequence):
    rng = np.random.Generator(np.random.Philox(seq))
    u = haar_batch(rng, n, x.r, x.backend)
    conj = u @ x.matrix @ np.conj(np.swapaxes(u, -1, -2))
    vals = _conical_from_minors(m, leading_minors(conj).real)
    mean = float(np.mean(vals))
    m2 = float(np.sum((vals - mean) ** 2))
    return n, mean, m2


def _combine(stats):
    # Chan et al. pairwise combination of (count, mean, M2).
    n_tot, mean_tot, m2_tot = 0, 0.0, 0.0
    for n, mean, m2 in stats:
        if n_tot == 0:
            n_tot, mean_tot, m2_tot = n, mean, m2
            continue
        delta = mean - mean_tot
        new_n = n_tot + n
        mean_tot += delta * n / new_n
        m2_tot += m2 + delta**2 * n_tot * n / new_n
        n_tot = new_n
    return n_tot, mean_tot, m2_tot


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("CONELAB_THREADS", "1")))
    except ValueError:
        return 1


def psi_mc(m: Sequence[int], x: ConePoint, samples: int, seed: int, threads: Optional[int] = None) -> McEstimate:
    """Monte-Carlo mean and standard error of Delta_m(u x u*) over Haar u.

    The sample stream is split into fixed-size shards with spawned seeds, so the
    result does not depend on the number of worker threads.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if not x.in_cone():
        raise ConeDomainError("x must lie in the cone")
    m = partition(m, x.r)
    sizes = [SHARD_SIZE] * (samples // SHARD_SIZE)
    if samples % SHARD_SIZE:
        sizes.append(samples % SHARD_SIZE)
    seqs = np.random.SeedSequence(seed).spawn(len(sizes))
    threads = threads or default_threads()
    jobs = list(zip(sizes, seqs))
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            stats = list(pool.map(lambda job: _shard_stats(m, x, *job), jobs))
    else:
        stats = [_shard_stats(m, x, n, s) for n, s in jobs]
    n, mean, m2 = _combine(stats)
    var = m2 / (n - 1) if n > 1 else 0.0
    return McEstimate(mean, float(np.sqrt(var / n)), n, seed)


def jack_at(m: Sequence[int], x: ConePoint, params: DomainParams) -> float:
    return float(evaluate(jack_psi(m, params), [float(v) for v in x.eigenvalues]))


def random_cone_point(rng: np.random.Generator, r: int, backend: str) -> ConePoint:
    """A well-conditioned random point u diag(w) u* with w in [1/2, 3]."""
    u = haar_batch(rng, 1, r, backend)[0]
    w = rng.uniform(0.5, 3.0, size=r)
    mat = u @ np.diag(w) @ u.conj().T
    mat = (mat + mat.conj().T) / 2
    if backend == "sym-real":
        mat = mat.real
    return ConePoint(backend, mat)


def cayley_map(z, direction: str) -> np.ndarray:
    """to-tube: (e+z)(e-z)^(-1); to-ball: (w-e)(w+e)^(-1)."""
    z = np.atleast_2d(np.asarray(z.matrix if isinstance(z, ConePoint) else z))
    e = np.eye(z.shape[0], dtype=z.dtype)
    if direction == "to-tube":
        num, den = e + z, e - z
    elif direction == "to-ball":
        num, den = z - e, z + e
    else:
        raise ValueError("direction must be 'to-tube' or 'to-ball'")
    if np.linalg.cond(den) > 1e13:
        raise SingularPivotError("Cayley transform denominator is singular")
    # num and den commute, so num @ inv(den) = solve(den, num).
    return np.linalg.solve(den, num)


def h_kernel(x, y) -> complex | float:
    """``h(x, y) = det(e - x conj(y))``."""
    x = np.atleast_2d(np.asarray(x.matrix if isinstance(x, ConePoint) else x))
    y = np.atleast_2d(np.asarray(y.matrix if isinstance(y, ConePoint) else y))
    val = np.linalg.det(np.eye(x.shape[0]) - x @ np.conj(y))
    return float(val.real) if abs(val.imag) < 1e-14 * max(1.0, abs(val)) else complex(val)
