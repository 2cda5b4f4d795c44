"""Explicit Euler integration of the three-field system.

    u_t = Du Lap u + lam u (1-u)(u-u_star) + chi0 div(u grad c)
    v_t = Dv Lap v + beta v (1-v)(v-v_star)
    c_t = Lap c / 2 + delta v - c

All three right-hand sides are evaluated from the pre-step fields.  The
hot loop is a numba kernel parallelised over rows; every output node is
computed independently, so results do not depend on the thread count.
"""
from __future__ import annotations

import hashlib
import logging
import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numba
import numpy as np
from numba import njit, prange

from . import analytic
from .errors import BlowUpError, DomainError, WindowError
from .grid import (
    Field,
    StateSnapshot,
    chemotactic_divergence_array,
    laplacian_neumann_array,
    save_snapshot,
)
from .params import (
    COURANT_LIMIT,
    STIFFEST_DIFFUSIVITY,
    Parameters,
    RunConfig,
    serialize_config,
)

log = logging.getLogger(__name__)

SCAN_EVERY = 1000


@dataclass(frozen=True)
class StepperState:
    snapshot: StateSnapshot
    step_count: int
    dt: float
    params: Parameters

    def __post_init__(self):
        dx = self.snapshot.u.dx
        if STIFFEST_DIFFUSIVITY * self.dt / dx**2 > COURANT_LIMIT:
            raise DomainError(
                f"Courant guard violated: {STIFFEST_DIFFUSIVITY}*dt/dx^2 = "
                f"{STIFFEST_DIFFUSIVITY * self.dt / dx**2:.4g} > {COURANT_LIMIT}"
            )


def rhs(u, v, c, p: Parameters, dx):
    """Right-hand sides ``(du/dt, dv/dt, dc/dt)`` as plain arrays."""
    du = (p.Du * laplacian_neumann_array(u, dx)
          + p.lam * u * (1.0 - u) * (u - p.u_star)
          + chemotactic_divergence_array(u, c, p.chi0, dx))
    dv = p.Dv * laplacian_neumann_array(v, dx) + p.beta * v * (1.0 - v) * (v - p.v_star)
    dc = 0.5 * laplacian_neumann_array(c, dx) + p.delta * v - c
    return du, dv, dc


def _first_nonfinite(*arrays):
    for a in arrays:
        bad = np.argwhere(~np.isfinite(a))
        if len(bad):
            return tuple(int(i) for i in bad[0])
    return None


def step(s: StepperState) -> StepperState:
    """One explicit Euler step (numpy reference path)."""
    snap = s.snapshot
    u, v, c = snap.u.data, snap.v.data, snap.c.data
    with np.errstate(over="ignore", invalid="ignore"):
        du, dv, dc = rhs(u, v, c, s.params, snap.u.dx)
        un, vn, cn = u + s.dt * du, v + s.dt * dv, c + s.dt * dc
    bad = _first_nonfinite(un, vn, cn)
    if bad is not None:
        raise BlowUpError(f"non-finite value at step {s.step_count + 1}, node {bad}",
                          step=s.step_count + 1, node=bad)
    k = s.step_count + 1
    new = StateSnapshot(t=k * s.dt, u=Field(un), v=Field(vn), c=Field(cn))
    return StepperState(snapshot=new, step_count=k, dt=s.dt, params=s.params)


@njit(parallel=True, cache=True)
def _advance(u, v, c, nsteps, dt, dx, Du, Dv, lam, beta, delta, chi0, u_star, v_star):
    """Advance ``u, v, c`` in place by ``nsteps``.

    Returns -1 on success, otherwise the 0-based step after which a
    non-finite value showed up on the monitored middle row.
    """
    n = u.shape[0]
    inv_dx2 = 1.0 / (dx * dx)
    inv_dx = 1.0 / dx
    ua, va, ca = u, v, c
    ub = np.empty_like(u)
    vb = np.empty_like(v)
    cb = np.empty_like(c)
    mid = n // 2
    for k in range(nsteps):
        for j in prange(n):
            jn = j - 1 if j > 0 else 1
            js = j + 1 if j < n - 1 else n - 2
            for i in range(n):
                iw = i - 1 if i > 0 else 1
                ie = i + 1 if i < n - 1 else n - 2
                uc = ua[j, i]
                vc = va[j, i]
                cc = ca[j, i]
                lap_u = (ua[j, iw] + ua[j, ie] + ua[jn, i] + ua[js, i] - 4.0 * uc) * inv_dx2
                lap_v = (va[j, iw] + va[j, ie] + va[jn, i] + va[js, i] - 4.0 * vc) * inv_dx2
                lap_c = (ca[j, iw] + ca[j, ie] + ca[jn, i] + ca[js, i] - 4.0 * cc) * inv_dx2
                fe = 0.0
                fw = 0.0
                fn = 0.0
                fs = 0.0
                if i < n - 1:
                    fe = 0.5 * (uc + ua[j, i + 1]) * (ca[j, i + 1] - cc) * inv_dx
                if i > 0:
                    fw = 0.5 * (ua[j, i - 1] + uc) * (cc - ca[j, i - 1]) * inv_dx
                if j < n - 1:
                    fs = 0.5 * (uc + ua[j + 1, i]) * (ca[j + 1, i] - cc) * inv_dx
                if j > 0:
                    fn = 0.5 * (ua[j - 1, i] + uc) * (cc - ca[j - 1, i]) * inv_dx
                div = chi0 * ((fe - fw) + (fs - fn)) * inv_dx
                ub[j, i] = uc + dt * (Du * lap_u + lam * uc * (1.0 - uc) * (uc - u_star) + div)
                vb[j, i] = vc + dt * (Dv * lap_v + beta * vc * (1.0 - vc) * (vc - v_star))
                cb[j, i] = cc + dt * (0.5 * lap_c + delta * vc - cc)
        ua, ub = ub, ua
        va, vb = vb, va
        ca, cb = cb, ca
        for i in range(n):
            if not (np.isfinite(ua[mid, i]) and np.isfinite(va[mid, i]) and np.isfinite(ca[mid, i])):
                u[:, :] = ua
                v[:, :] = va
                c[:, :] = ca
                return k
    if nsteps % 2 == 1:
        u[:, :] = ua
        v[:, :] = va
        c[:, :] = ca
    return -1


class Stepper:
    """Mutable fast-path integrator owning its working arrays."""

    def __init__(self, ic: StateSnapshot, params: Parameters, dt: float, step_count: int = 0):
        StepperState(snapshot=ic, step_count=step_count, dt=dt, params=params)  # guard
        self.params = params
        self.dt = dt
        self.dx = ic.u.dx
        self.step_count = step_count
        self.u = np.array(ic.u.data)
        self.v = np.array(ic.v.data)
        self.c = np.array(ic.c.data)

    @property
    def t(self) -> float:
        return self.step_count * self.dt

    def advance(self, nsteps: int) -> None:
        p = self.params
        done = 0
        while done < nsteps:
            chunk = min(SCAN_EVERY, nsteps - done)
            bad_k = _advance(self.u, self.v, self.c, chunk, self.dt, self.dx,
                             p.Du, p.Dv, p.lam, p.beta, p.delta, p.chi0, p.u_star, p.v_star)
            if bad_k >= 0:
                self.step_count += bad_k + 1
                node = _first_nonfinite(self.u, self.v, self.c)
                raise BlowUpError(f"non-finite value at step {self.step_count}, node {node}",
                                  step=self.step_count, node=node)
            self.step_count += chunk
            done += chunk
            node = _first_nonfinite(self.u, self.v, self.c)
            if node is not None:
                raise BlowUpError(f"non-finite value by step {self.step_count}, node {node}",
                                  step=self.step_count, node=node)

    def snapshot(self) -> StateSnapshot:
        return StateSnapshot(t=self.t, u=Field(self.u), v=Field(self.v), c=Field(self.c))

    def state(self) -> StepperState:
        return StepperState(self.snapshot(), self.step_count, self.dt, self.params)


def set_threads(n: int | None) -> None:
    if n is not None:
        numba.set_num_threads(n)


def step_index(target: float, dt: float) -> int:
    """Last step whose time does not exceed ``target``."""
    return int(math.floor(target / dt * (1.0 + 1e-12)))


def snapshot_name(scenario: str, t: float) -> str:
    return f"{scenario.lower()}_t{t:.4f}.cfld"


def config_hash(cfg: RunConfig) -> str:
    text = serialize_config(cfg.replace(output_dir=""))
    return hashlib.sha256(text.encode()).hexdigest()


def field_digest(a: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(a, dtype="<f8").tobytes()).hexdigest()[:16]


def write_manifest(path, entries: dict) -> None:
    with open(path, "w") as fh:
        for k, v in entries.items():
            fh.write(f"{k}={v}\n")


def read_manifest(path) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line and "=" in line:
                k, v = line.split("=", 1)
                out[k] = v
    return out


def _snapshot_entries(idx, snap: StateSnapshot, fname):
    e = {f"snapshot.{idx}.t": repr(snap.t), f"snapshot.{idx}.file": fname}
    for name in ("u", "v", "c"):
        a = getattr(snap, name).data
        e[f"snapshot.{idx}.{name}_min"] = repr(float(a.min()))
        e[f"snapshot.{idx}.{name}_max"] = repr(float(a.max()))
        e[f"snapshot.{idx}.{name}_mean"] = repr(float(a.mean()))
        e[f"snapshot.{idx}.{name}_sha256"] = field_digest(a)
    return e


def run(config: RunConfig, ic: StateSnapshot, out_dir=None, threads=None, progress=None) -> dict:
    """Integrate ``ic`` to ``config.t_end`` writing snapshots and a manifest.

    Snapshots land at every requested time (snapped to the last step not
    past it) and always at ``t_end``.  Returns the manifest as a dict; it
    is also written to ``out_dir/manifest.txt``.
    """
    problems = config.problems()
    if problems:
        raise DomainError("; ".join(problems))
    if ic.n != config.grid_n:
        raise DomainError(f"initial condition has n={ic.n}, config wants {config.grid_n}")
    out = Path(out_dir if out_dir is not None else config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    set_threads(threads)

    dt = config.dt
    targets = sorted(set(step_index(t, dt) for t in config.snapshot_times)
                     | {step_index(config.t_end, dt)})
    p = config.params
    manifest = {
        "status": "running",
        "config_hash": config_hash(config),
        "scenario": config.scenario,
        "grid_n": config.grid_n,
        "dx": repr(config.dx),
        "dt": repr(dt),
        "dt_factor": repr(config.dt_factor),
        "courant": repr(config.courant),
        "t_end": repr(config.t_end),
    }
    for name in ("Du", "Dv", "lam", "beta", "delta", "chi0", "u_star", "v_star", "A", "omega"):
        manifest[f"param.{name}"] = repr(getattr(p, name))
    for name in ("u", "v", "c"):
        manifest[f"ic.{name}_sha256"] = field_digest(getattr(ic, name).data)
    manifest["snapshot_count"] = 0
    manifest_path = out / "manifest.txt"

    stepper = Stepper(ic, p, dt)
    start = time.perf_counter()
    last_good = None
    try:
        for idx, k in enumerate(targets):
            stepper.advance(k - stepper.step_count)
            snap = stepper.snapshot()
            fname = snapshot_name(config.scenario, snap.t)
            try:
                save_snapshot(snap, out / fname)
            except OSError as exc:
                manifest["status"] = "disk-failure"
                manifest["error"] = str(exc)
                manifest["last_complete_snapshot"] = last_good or ""
                write_manifest(manifest_path, manifest)
                raise
            last_good = fname
            manifest.update(_snapshot_entries(idx, snap, fname))
            manifest["snapshot_count"] = idx + 1
            if progress is not None:
                progress(snap.t)
            log.info("snapshot t=%.4f written to %s", snap.t, fname)
    except BlowUpError as exc:
        manifest["status"] = "blowup"
        manifest["error"] = str(exc)
        manifest["steps"] = stepper.step_count
        manifest["wall_time"] = f"{time.perf_counter() - start:.3f}"
        write_manifest(manifest_path, manifest)
        exc.manifest = manifest
        raise
    manifest["steps"] = stepper.step_count
    manifest["final_snapshot"] = last_good
    manifest["status"] = "ok"
    manifest["wall_time"] = f"{time.perf_counter() - start:.3f}"
    write_manifest(manifest_path, manifest)
    return manifest


class FrontSpeed(NamedTuple):
    speed: float
    residual: float


def front_speed_1d(params: Parameters, domain_length: float, n: int, t_measure: float,
                   delta_c: float = 0.0, samples: int = 41) -> FrontSpeed:
    """Measure the travelling-front speed of the 1D shifted Nagumo equation.

    Integrates ``u_t = Du u_xx + lam u (u1-u)(u-u2)`` from a step (``u1`` on
    the left half, 0 on the right) with Neumann ends and fits a line to the
    position of the ``(u1+u2)/2`` crossing over ``[t_measure/2, t_measure]``.
    The returned residual is the RMS deviation from that line.
    """
    u1, u2 = analytic.shifted_equilibria(delta_c, params.lam, params.chi0, params.u_star)
    x, dx = np.linspace(0.0, domain_length, n, retstep=True)
    dt = 0.2 * dx * dx / params.Du
    u = np.where(x < 0.5 * domain_length, u1, 0.0)
    level = 0.5 * (u1 + u2)
    margin = 10.0 * math.sqrt(params.Du / params.lam)
    sample_times = np.linspace(0.5 * t_measure, t_measure, samples)
    sample_steps = [step_index(t, dt) for t in sample_times]
    lam, Du = params.lam, params.Du
    times, positions = [], []
    k = 0
    for target in sample_steps:
        while k < target:
            p = np.pad(u, 1, mode="reflect")
            u = u + dt * (Du * (p[:-2] - 2.0 * u + p[2:]) / (dx * dx)
                          + lam * u * (u1 - u) * (u - u2))
            k += 1
        above = u >= level
        idx = np.flatnonzero(above[:-1] != above[1:])
        if len(idx) != 1:
            raise WindowError(f"expected one front crossing at t={k * dt:.4f}, found {len(idx)}")
        i = idx[0]
        xc = x[i] + dx * (u[i] - level) / (u[i] - u[i + 1])
        if not margin < xc < domain_length - margin:
            raise WindowError(f"front reached the boundary at t={k * dt:.4f}")
        times.append(k * dt)
        positions.append(xc)
    times = np.array(times)
    positions = np.array(positions)
    slope, intercept = np.polyfit(times, positions, 1)
    resid = positions - (slope * times + intercept)
    return FrontSpeed(float(slope), float(np.sqrt(np.mean(resid**2))))
