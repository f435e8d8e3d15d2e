"""Dense complex linear algebra over labeled tensor-product spaces.

A :class:`LabeledState` is a density operator tagged with an ordered list of
named subsystems, so partial traces and reduced states can be requested by
name instead of by axis arithmetic.  Everything here is a pure function of
its inputs; matrices are copied and frozen at construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DuplicateLabel,
    InvalidState,
    NegativeEigenvalue,
    NotSquare,
    UnknownLabel,
)

# Eigenvalues below ENTROPY_CUTOFF are treated as exact zeros when summing
# entropies; SUPPORT_CUTOFF separates support from kernel for matrix
# functions.  Both are sized to swallow round-off accumulated by repeated
# Kronecker/trace passes at dimensions up to a few hundred while keeping
# genuine rank structure intact.
ENTROPY_CUTOFF = 1e-12
SUPPORT_CUTOFF = 1e-10

_HERM_ATOL = 1e-10
_PSD_ATOL = 1e-10
_TRACE_ATOL = 1e-10


@dataclass(frozen=True)
class Subsystem:
    """A named tensor factor together with its Hilbert-space dimension."""

    name: str
    dim: int

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name:
            raise InvalidState("subsystem name must be a nonempty string")
        if int(self.dim) < 1:
            raise InvalidState(f"subsystem {self.name!r} has dimension {self.dim}")


def _square_complex(matrix) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {m.shape}")
    return m


class LabeledState:
    """Density operator over an ordered list of named subsystems.

    Invariants (checked when ``validate=True``): Hermitian within 1e-10,
    positive semidefinite with min eigenvalue >= -1e-10, and unit trace
    within 1e-10.  ``subnormalized=True`` relaxes the trace condition to
    ``trace <= 1`` for conditional states.  The stored matrix is symmetrized
    to (M + M†)/2 and made read-only; instances are safe to share between
    threads.
    """

    __slots__ = ("labels", "matrix", "subnormalized")

    def __init__(
        self,
        labels: Sequence[Subsystem],
        matrix,
        *,
        subnormalized: bool = False,
        validate: bool = True,
    ) -> None:
        labels = tuple(labels)
        names = [lab.name for lab in labels]
        if len(set(names)) != len(names):
            raise DuplicateLabel(f"duplicate subsystem names in {names}")
        m = _square_complex(matrix).copy()
        dim = 1
        for lab in labels:
            dim *= lab.dim
        if m.shape[0] != dim:
            raise InvalidState(
                f"matrix dimension {m.shape[0]} != product of label dims {dim}"
            )
        if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
            raise InvalidState("state matrix contains NaN or Inf entries")
        if validate and m.size:
            herm_dev = float(np.max(np.abs(m - m.conj().T)))
            if herm_dev > _HERM_ATOL:
                raise InvalidState(f"not Hermitian: max |M - M†| = {herm_dev:.3e}")
        m = (m + m.conj().T) / 2.0
        if validate:
            eigs = np.linalg.eigvalsh(m)
            if float(eigs[0]) < -_PSD_ATOL:
                raise InvalidState(
                    f"not positive semidefinite: min eigenvalue = {eigs[0]:.3e}"
                )
            tr = float(np.trace(m).real)
            if subnormalized:
                if tr > 1.0 + _TRACE_ATOL:
                    raise InvalidState(f"subnormalized trace {tr} exceeds 1")
            elif abs(tr - 1.0) > _TRACE_ATOL:
                raise InvalidState(f"trace = {tr}, expected 1")
        m.setflags(write=False)
        self.labels = labels
        self.matrix = m
        self.subnormalized = subnormalized

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(lab.name for lab in self.labels)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(lab.dim for lab in self.labels)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def revalidated(self) -> "LabeledState":
        """Re-run the full construction checks (used by invariant tests)."""
        return LabeledState(
            self.labels, self.matrix, subnormalized=self.subnormalized, validate=True
        )

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        parts = ", ".join(f"{lab.name}:{lab.dim}" for lab in self.labels)
        return f"LabeledState([{parts}], trace={self.trace:.6f})"


def tensor_product(a: LabeledState, b: LabeledState) -> LabeledState:
    """Kronecker product; output labels are ``a``'s followed by ``b``'s."""
    shared = {lab.name for lab in a.labels} & {lab.name for lab in b.labels}
    if shared:
        raise DuplicateLabel(f"label names {sorted(shared)} appear on both factors")
    return LabeledState(
        a.labels + b.labels,
        np.kron(a.matrix, b.matrix),
        subnormalized=a.subnormalized or b.subnormalized,
        validate=False,
    )


def partial_trace(state: LabeledState, keep: Sequence[str]) -> LabeledState:
    """Trace out every subsystem not named in ``keep``.

    The retained subsystems appear in their original relative order
    regardless of the order of ``keep``.
    """
    keep = list(keep)
    if len(set(keep)) != len(keep):
        raise DuplicateLabel(f"repeated names in keep list {keep}")
    names = list(state.names)
    unknown = [k for k in keep if k not in names]
    if unknown:
        raise UnknownLabel(f"unknown subsystem names {unknown}; state has {names}")
    n = len(names)
    if n == 0:
        return state
    keep_set = set(keep)
    kept = [i for i in range(n) if names[i] in keep_set]
    dims = list(state.dims)
    tensor = state.matrix.reshape(dims + dims)
    row = list(range(n))
    col = [n + i if i in set(kept) else i for i in range(n)]
    out = [i for i in kept] + [n + i for i in kept]
    reduced = np.einsum(tensor, row + col, out)
    d_keep = 1
    for i in kept:
        d_keep *= dims[i]
    return LabeledState(
        tuple(state.labels[i] for i in kept),
        reduced.reshape(d_keep, d_keep),
        subnormalized=state.subnormalized,
        validate=False,
    )


def eig_hermitian(matrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues in descending order with matching orthonormal columns.

    The input is symmetrized to (M + M†)/2 before decomposition.
    """
    m = _square_complex(matrix)
    m = (m + m.conj().T) / 2.0
    w, v = np.linalg.eigh(m)
    # stable sort keeps the original basis inside degenerate eigenspaces
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def entropy_bits(matrix) -> float:
    """Von Neumann entropy in bits of a (sub)normalized PSD matrix."""
    m = _square_complex(matrix)
    w = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    w = w[w > ENTROPY_CUTOFF]
    if w.size == 0:
        return 0.0
    s = float(-np.sum(w * np.log2(w)))
    return 0.0 if -1e-9 <= s < 0.0 else s


def von_neumann_entropy(state: LabeledState) -> float:
    """Entropy in bits; eigenvalues below 1e-12 count as exact zeros."""
    return entropy_bits(state.matrix)


def func_on_support(matrix, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply ``f`` to the spectrum on the support; the kernel maps to zero.

    Eigenvalues at or below 1e-10 are treated as kernel, so e.g.
    ``func_on_support(m, lambda x: x**-0.5)`` is the pseudo-inverse square
    root.  Raises :class:`NegativeEigenvalue` below -1e-8.
    """
    m = _square_complex(matrix)
    m = (m + m.conj().T) / 2.0
    w, v = np.linalg.eigh(m)
    if w.size and float(w[0]) < -1e-8:
        raise NegativeEigenvalue(f"min eigenvalue {w[0]:.3e} below -1e-8")
    fw = np.zeros_like(w)
    mask = w > SUPPORT_CUTOFF
    if np.any(mask):
        fw[mask] = f(w[mask])
    return (v * fw) @ v.conj().T


def support_projector(matrix) -> np.ndarray:
    """Orthogonal projector onto the support (eigenvalues above 1e-10)."""
    return func_on_support(matrix, lambda x: np.ones_like(x))
