"""Cleanup memories: trace stores that map noisy probes back to stored rows.

All five kinds share one recall shape: weight the stored rows by some function
of their activations against the probe, then sum.  ``lookup`` is the hardmax
special case, ``mhn`` the softmax one, ``minerva2`` an odd-power weighting,
``hopfield`` iterates the hardmax step to a fixed point, and ``grossberg``
adds the probe back in and squashes.
"""
from __future__ import annotations

import struct
from typing import Literal

import numpy as np

from .hrr import Vector

__all__ = [
    "KINDS",
    "RULES",
    "CleanupMemory",
    "EmptyMemoryError",
    "ConvergenceError",
]

KINDS = ("lookup", "mhn", "minerva2", "hopfield", "grossberg")
RULES = ("RC", "RG", "RE")

_MAGIC = b"VCM1"
_HEADER = struct.Struct("<4sBBQQ6dQ")


class EmptyMemoryError(RuntimeError):
    """Recall from an empty cleanup memory."""


class ConvergenceError(RuntimeError):
    """Hopfield iteration failed to reach a fixed point; carries the last iterate."""

    def __init__(self, message: str, last_iterate: Vector) -> None:
        super().__init__(message)
        self.last_iterate = last_iterate


def _softmax(z: Vector) -> Vector:
    z = z - z.max()
    w = np.exp(z)
    return w / w.sum()


def _hardmax(z: Vector) -> int:
    # np.argmax already resolves ties toward the lowest index.
    return int(np.argmax(z))


class CleanupMemory:
    """Ordered store of n-dimensional traces with kind-dispatched recall.

    Rows are kept in insertion order.  ``append`` deduplicates near-identical
    traces (cosine >= dedup threshold) so repeated stores do not grow the
    matrix.  Parameters not used by the configured kind are carried inertly.
    """

    def __init__(
        self,
        dim: int,
        kind: str = "lookup",
        *,
        beta: float = 1000.0,
        rho: int | float = 3,
        gamma: float = 1000.0,
        alpha: float = 1.0,
        eta: float = 0.1,
        max_iters: int = 100,
        tol: float = 1e-6,
        dedup_threshold: float = 0.99,
    ) -> None:
        if kind not in KINDS:
            raise ValueError(f"unknown memory kind {kind!r}")
        if dim <= 0:
            raise ValueError("dim must be positive")
        self.dim = int(dim)
        self.kind = kind
        self.beta = float(beta)
        self.rho = rho
        self.gamma = float(gamma)
        self.alpha = float(alpha)
        self.eta = float(eta)
        self.max_iters = int(max_iters)
        self.tol = float(tol)
        self.dedup_threshold = float(dedup_threshold)
        self._buf = np.empty((16, dim))
        self._norms = np.empty(16)
        self._m = 0

    # -- storage ------------------------------------------------------------

    def __len__(self) -> int:
        return self._m

    @property
    def traces(self) -> Vector:
        return self._buf[: self._m]

    def _grow_to(self, needed: int) -> None:
        cap = self._buf.shape[0]
        if needed <= cap:
            return
        while cap < needed:
            cap *= 2
        buf = np.empty((cap, self.dim))
        norms = np.empty(cap)
        buf[: self._m] = self._buf[: self._m]
        norms[: self._m] = self._norms[: self._m]
        self._buf = buf
        self._norms = norms

    def append(self, t: Vector, *, dedup: bool = True) -> "CleanupMemory":
        """Append one trace; a near-duplicate of an existing row is a no-op."""
        if t.shape != (self.dim,):
            raise ValueError(f"trace shape {t.shape} does not match dim {self.dim}")
        if dedup and self._m > 0:
            tn = np.linalg.norm(t)
            if tn > 0.0:
                denom = self._norms[: self._m] * tn
                with np.errstate(invalid="ignore", divide="ignore"):
                    sims = np.where(denom > 0.0, (self.traces @ t) / denom, 0.0)
                if sims.max() >= self.dedup_threshold:
                    return self
        self._grow_to(self._m + 1)
        self._buf[self._m] = t
        self._norms[self._m] = np.linalg.norm(t)
        self._m += 1
        return self

    def extend(self, rows: Vector, *, dedup: bool = False) -> "CleanupMemory":
        """Bulk-append rows; deduplication is off by default for speed."""
        rows = np.atleast_2d(rows)
        if dedup:
            for r in rows:
                self.append(r)
            return self
        k = rows.shape[0]
        self._grow_to(self._m + k)
        self._buf[self._m : self._m + k] = rows
        self._norms[self._m : self._m + k] = np.linalg.norm(rows, axis=1)
        self._m += k
        return self

    def set_row(self, i: int, t: Vector) -> None:
        """Overwrite a stored row in place (used for redefinition semantics)."""
        if not 0 <= i < self._m:
            raise IndexError("row index out of range")
        self._buf[i] = t
        self._norms[i] = np.linalg.norm(t)

    def activations(self, p: Vector) -> Vector:
        self._require_nonempty()
        return self.traces @ p

    def _require_nonempty(self) -> None:
        if self._m == 0:
            raise EmptyMemoryError("recall from empty cleanup memory")

    # -- recall -------------------------------------------------------------

    def recall(self, p: Vector) -> Vector:
        """Dispatch recall by the configured kind."""
        if self.kind == "lookup":
            return self.recall_lookup(p)
        if self.kind == "mhn":
            return self.recall_mhn(p)
        if self.kind == "minerva2":
            return self.recall_minerva2(p)
        if self.kind == "hopfield":
            return self.recall_hopfield(p)
        return self.recall_grossberg(p)

    def recall_lookup(self, p: Vector) -> Vector:
        """Exact row with the highest activation; ties go to the lowest index."""
        acts = self.activations(p)
        return self.traces[_hardmax(acts)].copy()

    def recall_mhn(self, p: Vector, beta: float | None = None) -> Vector:
        """Softmax-weighted row blend; beta=0 is the unweighted row mean."""
        acts = self.activations(p)
        b = self.beta if beta is None else float(beta)
        if b < 0.0:
            raise ValueError("beta must be nonnegative")
        if b == 0.0:
            return self.traces.mean(axis=0)
        return _softmax(b * acts) @ self.traces

    def recall_minerva2(self, p: Vector, rho: int | float | None = None) -> Vector:
        """Activation-power weighting.

        An integer ``rho`` must be odd and is applied as a plain power; a real
        ``rho`` uses the sign-preserving form sgn(x)|x|^rho, which agrees with
        the integer path at odd integers.
        """
        acts = self.activations(p)
        r = self.rho if rho is None else rho
        if isinstance(r, (int, np.integer)) and not isinstance(r, bool):
            if r % 2 == 0:
                raise ValueError("integer rho must be odd")
            w = acts ** int(r)
        else:
            w = np.sign(acts) * np.abs(acts) ** float(r)
        return w @ self.traces

    def recall_hopfield(self, p: Vector) -> Vector:
        """Iterate the hardmax recall step until the iterate stops moving."""
        x = p
        for _ in range(self.max_iters):
            nxt = self.recall_lookup(x)
            if np.linalg.norm(nxt - x) < self.tol:
                return nxt
            x = nxt
        raise ConvergenceError(
            f"no fixed point within {self.max_iters} iterations", last_iterate=x
        )

    def recall_grossberg(self, p: Vector) -> Vector:
        """Hardmax-selected row plus the probe, squashed through a logistic."""
        selected = self.recall_lookup(p)
        v = selected + p
        l1 = np.abs(v).sum()
        if l1 == 0.0:
            raise EmptyMemoryError("degenerate grossberg recall of a zero state")
        z = v / l1
        return 1.0 / (1.0 + np.exp(-z))

    # -- updates ------------------------------------------------------------

    def apply_update(self, p: Vector, grad: Vector, rule: Literal["RC", "RG", "RE"]) -> "CleanupMemory":
        """One gradient step on the stored rows.

        ``grad`` must have one row per trace; the caller owns its meaning.
        RC applies it everywhere, RG gates it to the hardmax row, RE scales
        row i by alpha * softmax(gamma * activations)[i].
        """
        self._require_nonempty()
        grad = np.asarray(grad)
        if grad.shape != (self._m, self.dim):
            raise ValueError(f"grad shape {grad.shape} does not match store ({self._m}, {self.dim})")
        if rule == "RC":
            self._buf[: self._m] -= self.eta * grad
        elif rule == "RG":
            i = _hardmax(self.activations(p))
            self._buf[i] -= self.eta * grad[i]
            self._norms[i] = np.linalg.norm(self._buf[i])
            return self
        elif rule == "RE":
            w = self.alpha * _softmax(self.gamma * self.activations(p))
            self._buf[: self._m] -= self.eta * w[:, None] * grad
        else:
            raise ValueError(f"unknown update rule {rule!r}")
        self._norms[: self._m] = np.linalg.norm(self.traces, axis=1)
        return self

    # -- serialization --------------------------------------------------------

    def to_bytes(self) -> bytes:
        """Flat binary snapshot: fixed header, then row-major float64 traces."""
        rho_is_int = isinstance(self.rho, (int, np.integer)) and not isinstance(self.rho, bool)
        header = _HEADER.pack(
            _MAGIC,
            KINDS.index(self.kind),
            1 if rho_is_int else 0,
            self._m,
            self.dim,
            self.beta,
            float(self.rho),
            self.gamma,
            self.alpha,
            self.eta,
            self.tol,
            self.max_iters,
        )
        body = np.ascontiguousarray(self.traces, dtype="<f8").tobytes()
        return header + body

    @classmethod
    def from_bytes(cls, blob: bytes) -> "CleanupMemory":
        if len(blob) < _HEADER.size:
            raise ValueError("truncated cleanup memory snapshot")
        (magic, kind_i, rho_is_int, m, dim, beta, rho, gamma, alpha, eta, tol, max_iters) = _HEADER.unpack_from(blob)
        if magic != _MAGIC:
            raise ValueError("bad cleanup memory magic")
        expected = _HEADER.size + m * dim * 8
        if len(blob) != expected:
            raise ValueError(f"snapshot length {len(blob)} does not match header ({expected})")
        mem = cls(
            int(dim),
            KINDS[kind_i],
            beta=beta,
            rho=int(rho) if rho_is_int else rho,
            gamma=gamma,
            alpha=alpha,
            eta=eta,
            max_iters=int(max_iters),
            tol=tol,
        )
        rows = np.frombuffer(blob, dtype="<f8", offset=_HEADER.size).reshape(int(m), int(dim))
        if m:
            mem.extend(rows.astype(np.float64))
        return mem

    def save(self, path: str) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def load(cls, path: str) -> "CleanupMemory":
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())
