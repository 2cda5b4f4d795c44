"""Node-centred fields on the unit square and the spatial operators.

A field of ``n`` nodes per side samples ``[0, 1]^2`` at ``x_i = i dx``,
``y_j = j dx`` with ``dx = 1/(n-1)``; ``data[j, i]`` holds the value at
``(x_i, y_j)`` so rows run along x.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GridMismatchError

MAGIC = b"CFLD"
VERSION = 1
_HEADER = struct.Struct("<4sIId")


@dataclass(frozen=True, eq=False)
class Field:
    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.float64, order="C")
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise GridMismatchError(f"field must be square, got shape {arr.shape}")
        if arr.shape[0] < 3:
            raise GridMismatchError("field needs at least 3 nodes per side")
        if not np.all(np.isfinite(arr)):
            raise DomainError("field contains NaN or Inf")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def dx(self) -> float:
        return 1.0 / (self.n - 1)

    @property
    def coords(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n)

    def mesh(self):
        """``(X, Y)`` coordinate arrays shaped like ``data``."""
        x = self.coords
        return np.meshgrid(x, x, indexing="xy")

    @classmethod
    def from_function(cls, n, func):
        x = np.linspace(0.0, 1.0, n)
        X, Y = np.meshgrid(x, x, indexing="xy")
        return cls(np.broadcast_to(func(X, Y), (n, n)))

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)


@dataclass(frozen=True)
class StateSnapshot:
    t: float
    u: Field
    v: Field
    c: Field

    def __post_init__(self):
        if not self.u.n == self.v.n == self.c.n:
            raise GridMismatchError("u, v, c live on different grids")
        if not self.t >= 0:
            raise DomainError("snapshot time must be non-negative")

    @property
    def n(self) -> int:
        return self.u.n


def _values(f):
    return f.data if isinstance(f, Field) else np.asarray(f, dtype=float)


def laplacian_neumann_array(a: np.ndarray, dx: float) -> np.ndarray:
    p = np.pad(a, 1, mode="reflect")
    return (p[1:-1, :-2] + p[1:-1, 2:] + p[:-2, 1:-1] + p[2:, 1:-1] - 4.0 * a) / (dx * dx)


def laplacian_neumann(f: Field) -> Field:
    """Five-point Laplacian with mirror ghost nodes (ghost = first interior value)."""
    return Field(laplacian_neumann_array(f.data, f.dx))


def chemotactic_divergence_array(u: np.ndarray, c: np.ndarray, chi0: float, dx: float) -> np.ndarray:
    # Face fluxes between neighbouring nodes; faces beyond the outermost
    # nodes carry zero flux so the node sum telescopes exactly.
    fx = np.zeros((u.shape[0], u.shape[1] + 1))
    fy = np.zeros((u.shape[0] + 1, u.shape[1]))
    fx[:, 1:-1] = 0.5 * (u[:, :-1] + u[:, 1:]) * (c[:, 1:] - c[:, :-1]) / dx
    fy[1:-1, :] = 0.5 * (u[:-1, :] + u[1:, :]) * (c[1:, :] - c[:-1, :]) / dx
    return chi0 * ((fx[:, 1:] - fx[:, :-1]) + (fy[1:, :] - fy[:-1, :])) / dx


def chemotactic_divergence(u: Field, c: Field, chi0: float) -> Field:
    """Flux-form ``chi0 div(u grad c)`` with arithmetic-mean face values of u."""
    if u.n != c.n:
        raise GridMismatchError(f"u has n={u.n}, c has n={c.n}")
    return Field(chemotactic_divergence_array(u.data, c.data, chi0, u.dx))


def trapezoid_weights(n: int) -> np.ndarray:
    w = np.ones(n)
    w[0] = w[-1] = 0.5
    return np.outer(w, w)


def cross_section(f: Field, axis: str, offset: float) -> np.ndarray:
    """Values along a grid line as an ``(n, 2)`` array of ``(coord, value)``.

    ``axis="x"`` walks along x at ``y = offset`` (a row); ``axis="y"``
    walks along y at ``x = offset``.  The offset snaps to the nearest line.
    """
    if not 0.0 <= offset <= 1.0:
        raise DomainError(f"offset {offset} outside [0, 1]")
    k = int(round(offset * (f.n - 1)))
    if axis == "x":
        values = f.data[k, :]
    elif axis == "y":
        values = f.data[:, k]
    else:
        raise DomainError(f"axis must be 'x' or 'y', got {axis!r}")
    return np.column_stack([f.coords, values])


def write_profile_csv(profile: np.ndarray, path) -> None:
    np.savetxt(path, profile, delimiter=",", header="coord,value", comments="", fmt="%.17g")


def read_profile_csv(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def write_field(fh, f: Field, t: float) -> None:
    fh.write(_HEADER.pack(MAGIC, VERSION, f.n, float(t)))
    fh.write(np.ascontiguousarray(f.data, dtype="<f8").tobytes())


def read_field(fh):
    """Read one field record; returns ``(Field, t)`` or ``None`` at EOF."""
    head = fh.read(_HEADER.size)
    if not head:
        return None
    if len(head) < _HEADER.size:
        raise ValueError("truncated field header")
    magic, version, n, t = _HEADER.unpack(head)
    if magic != MAGIC:
        raise ValueError(f"bad magic {magic!r}")
    if version != VERSION:
        raise ValueError(f"unsupported field version {version}")
    raw = fh.read(8 * n * n)
    if len(raw) != 8 * n * n:
        raise ValueError("truncated field payload")
    return Field(np.frombuffer(raw, dtype="<f8").reshape(n, n)), t


def save_snapshot(snap: StateSnapshot, path) -> None:
    """Write u, v, c as three consecutive field records."""
    with open(path, "wb") as fh:
        for f in (snap.u, snap.v, snap.c):
            write_field(fh, f, snap.t)


def load_snapshot(path) -> StateSnapshot:
    with open(path, "rb") as fh:
        records = []
        while (rec := read_field(fh)) is not None:
            records.append(rec)
    if len(records) != 3:
        raise ValueError(f"{path}: expected 3 field records, found {len(records)}")
    (u, t), (v, _), (c, _) = records
    return StateSnapshot(t=t, u=u, v=v, c=c)
