"""Fixed-step trapezoidal-rule transient solver for small lumped networks.

Branches stamp their trapezoidal companion models into a nodal
conductance matrix; the matrix is LU-factored once per (switch state,
saturation segment) combination and reused.  Saturable branches carry a
flux-linkage state and a monotone piecewise-linear current law, resolved
each step by segment iteration (the implicit equation is monotone, so
the containing-segment update converges).

An optional audit accumulates source, dissipated and stored energy so
passivity can be asserted per cycle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .saturation import FluxCurrentCurve

GROUND = -1
_LEAK_G = 1e-9  # node-to-ground leak keeps isolated nodes solvable


class SimulationFault(RuntimeError):
    """Integration produced a non-finite state."""


class Emf:
    """Voltage source e(t) = amp(t) cos(w t + phase) behind a resistance.

    Branch current flows a -> b and equals (v_a - v_b + e) / r.  An
    optional amplitude step (t_step, amp2) models source-side voltage
    changes without altering the conductance stamp.
    """

    def __init__(self, a, b, r, amp, phase, omega, amp2=None, t_step=None):
        if r <= 0:
            raise ValueError("source resistance must be positive")
        self.a, self.b, self.r = a, b, r
        self.amp, self.phase, self.omega = amp, phase, omega
        self.amp2, self.t_step = amp2, t_step
        self.i = 0.0
        self.e_now = 0.0

    def e(self, t):
        amp = self.amp
        if self.t_step is not None and t >= self.t_step:
            amp = self.amp2
        return amp * math.cos(self.omega * t + self.phase)

    def phasor(self):
        return self.amp * complex(math.cos(self.phase), math.sin(self.phase))


class Resistor:
    def __init__(self, a, b, r):
        if r <= 0:
            raise ValueError("resistance must be positive")
        self.a, self.b, self.r = a, b, r
        self.i = 0.0


class SwitchR:
    """Resistor in series with an ideal switch."""

    def __init__(self, a, b, r, t_close, t_open=None):
        if r <= 0:
            raise ValueError("resistance must be positive")
        self.a, self.b, self.r = a, b, r
        self.t_close = t_close
        self.t_open = t_open if t_open is not None else math.inf
        self.i = 0.0

    def closed(self, t):
        return (t >= self.t_close - 1e-12) and (t < self.t_open - 1e-12)


class Inductor:
    def __init__(self, a, b, l, r=0.0):
        if l <= 0:
            raise ValueError("inductance must be positive")
        self.a, self.b, self.l, self.r = a, b, l, r
        self.i = 0.0
        self.v = 0.0


class Coupled:
    """m mutually coupled coils; pairs[k] = (a_k, b_k); L is m x m, R the
    per-coil series resistance vector."""

    def __init__(self, pairs, L, R):
        self.pairs = list(pairs)
        self.L = np.asarray(L, dtype=float)
        self.R = np.asarray(R, dtype=float)
        m = len(self.pairs)
        if self.L.shape != (m, m) or len(self.R) != m:
            raise ValueError("coupled block shape mismatch")
        if np.any(self.R <= 0):
            raise ValueError("coupled coils need positive series resistance")
        self.i = np.zeros(m)
        self.v = np.zeros(m)

    def prepare(self, h):
        A = (2.0 / h) * self.L + np.diag(self.R)
        self.Gblk = np.linalg.inv(A)
        self.Bblk = self.Gblk @ ((2.0 / h) * self.L - np.diag(self.R))


class SatFlux:
    """Flux-state branch: d(lambda)/dt = v, i = f(lambda) piecewise linear.

    `lam_reset` = (t, value) overwrites the flux state once at time t;
    this is how remanence is applied at the energization instant (a
    single-valued curve cannot hold remanent flux against a parallel
    loss resistance while de-energized).
    """

    def __init__(self, a, b, curve: FluxCurrentCurve, lam0=0.0, lam_reset=None):
        self.a, self.b = a, b
        self.curve = curve
        self.lam = lam0
        self.lam0 = lam0
        self.lam_reset = lam_reset
        self._reset_done = False
        self.v = 0.0
        self.i = 0.0
        self.seg = (1.0, 0)

    def seg_of(self, lam):
        sign = 1.0 if lam >= 0 else -1.0
        return (sign, self.curve.segment_of(abs(lam)))

    def maybe_reset(self, t0, h):
        if self.lam_reset is None or self._reset_done:
            return
        if t0 >= self.lam_reset[0] - h / 4.0:
            self.lam = self.lam_reset[1]
            self.v = 0.0
            self.seg = self.seg_of(self.lam)
            self._reset_done = True


class Capacitor:
    def __init__(self, a, b, c):
        if c <= 0:
            raise ValueError("capacitance must be positive")
        self.a, self.b, self.c = a, b, c
        self.v = 0.0
        self.i = 0.0


class Network:
    def __init__(self, omega):
        self.omega = omega
        self.n_nodes = 0
        self.branches = []
        self.probes = {}   # name -> (branch, coil index | None)

    def node(self) -> int:
        self.n_nodes += 1
        return self.n_nodes - 1

    def add(self, branch):
        self.branches.append(branch)
        return branch

    def probe(self, name, branch, coil=None):
        self.probes[name] = (branch, coil)

    # -- helpers ---------------------------------------------------------

    def rl_series(self, a, b, r, l):
        """Resistive-inductive series path as a single branch."""
        return self.add(Inductor(a, b, l, r))

    def source(self, bus, r, l, amp, phase, amp2=None, t_step=None):
        """Grounded EMF behind (r, l); returns the EMF branch (probe-able)."""
        mid = self.node()
        emf = self.add(Emf(GROUND, mid, r, amp, phase, self.omega,
                           amp2=amp2, t_step=t_step))
        self.add(Inductor(mid, bus, l))
        return emf


class TransientSolver:
    def __init__(self, net: Network, h: float, audit: bool = False):
        self.net = net
        self.h = h
        self.audit = audit
        self._lu_cache = {}
        for br in net.branches:
            if isinstance(br, Coupled):
                br.prepare(h)
        self.energy = {"source": 0.0, "dissipated": 0.0}

    # -- phasor initialization -------------------------------------------

    def init_ac_steady_state(self):
        net = self.net
        w = net.omega
        n = net.n_nodes
        Y = np.zeros((n, n), dtype=complex)
        I = np.zeros(n, dtype=complex)
        np.fill_diagonal(Y, _LEAK_G)

        def stamp(a, b, y):
            if a != GROUND:
                Y[a, a] += y
            if b != GROUND:
                Y[b, b] += y
            if a != GROUND and b != GROUND:
                Y[a, b] -= y
                Y[b, a] -= y

        def inject(a, b, cur):
            # current `cur` pushed from a to b inside the branch
            if a != GROUND:
                I[a] -= cur
            if b != GROUND:
                I[b] += cur

        for br in net.branches:
            if isinstance(br, Resistor):
                stamp(br.a, br.b, 1.0 / br.r)
            elif isinstance(br, SwitchR):
                if br.closed(0.0) or br.t_close <= 0.0:
                    stamp(br.a, br.b, 1.0 / br.r)
            elif isinstance(br, Emf):
                stamp(br.a, br.b, 1.0 / br.r)
                inject(br.a, br.b, br.phasor() / br.r)
            elif isinstance(br, Inductor):
                stamp(br.a, br.b, 1.0 / (br.r + 1j * w * br.l))
            elif isinstance(br, Coupled):
                Yblk = np.linalg.inv(np.diag(br.R) + 1j * w * br.L)
                m = len(br.pairs)
                for j in range(m):
                    aj, bj = br.pairs[j]
                    for k in range(m):
                        ak, bk = br.pairs[k]
                        y = Yblk[j, k]
                        # current in coil j due to voltage across coil k
                        for (ni, si) in ((aj, 1.0), (bj, -1.0)):
                            if ni == GROUND:
                                continue
                            for (nk, sk) in ((ak, 1.0), (bk, -1.0)):
                                if nk == GROUND:
                                    continue
                                Y[ni, nk] += si * sk * y
            elif isinstance(br, SatFlux):
                l_u = 1.0 / br.curve.slopes[0]
                stamp(br.a, br.b, 1.0 / (1j * w * l_u))
            elif isinstance(br, Capacitor):
                stamp(br.a, br.b, 1j * w * br.c)

        V = np.linalg.solve(Y, I)

        def vb(a, b):
            va = V[a] if a != GROUND else 0.0
            return va - (V[b] if b != GROUND else 0.0)

        for br in net.branches:
            if isinstance(br, Emf):
                vbr = vb(br.a, br.b)
                br.i = float(np.real((br.phasor() + vbr) / br.r))
                br.e_now = br.e(0.0)
            elif isinstance(br, Resistor):
                br.i = float(np.real(vb(br.a, br.b) / br.r))
            elif isinstance(br, SwitchR):
                br.i = float(np.real(vb(br.a, br.b) / br.r)) if (br.closed(0.0) or br.t_close <= 0) else 0.0
            elif isinstance(br, Inductor):
                vbr = vb(br.a, br.b)
                br.i = float(np.real(vbr / (br.r + 1j * w * br.l)))
                br.v = float(np.real(vbr))
            elif isinstance(br, Coupled):
                Yblk = np.linalg.inv(np.diag(br.R) + 1j * w * br.L)
                vvec = np.array([vb(a, b) for a, b in br.pairs])
                ivec = Yblk @ vvec
                br.i = np.real(ivec).astype(float)
                br.v = np.real(vvec).astype(float)
            elif isinstance(br, SatFlux):
                vbr = vb(br.a, br.b)
                lam_ph = vbr / (1j * w)
                br.lam = float(np.real(lam_ph)) + br.lam0
                br.v = float(np.real(vbr))
                br.i = float(br.curve.current(br.lam))
                br.seg = br.seg_of(br.lam)
            elif isinstance(br, Capacitor):
                vbr = vb(br.a, br.b)
                br.v = float(np.real(vbr))
                br.i = float(np.real(1j * w * br.c * vbr))

    # -- transient stepping ----------------------------------------------

    def _state_key(self, t0):
        bits = []
        for br in self.net.branches:
            if isinstance(br, SwitchR):
                bits.append(br.closed(t0))
            elif isinstance(br, SatFlux):
                bits.append(br.seg)
        return tuple(bits)

    def _assemble(self, t0):
        key = self._state_key(t0)
        if key in self._lu_cache:
            return key, self._lu_cache[key]
        n = self.net.n_nodes
        h = self.h
        G = np.zeros((n, n))
        np.fill_diagonal(G, _LEAK_G)

        def stamp(a, b, g):
            if a != GROUND:
                G[a, a] += g
            if b != GROUND:
                G[b, b] += g
            if a != GROUND and b != GROUND:
                G[a, b] -= g
                G[b, a] -= g

        for br in self.net.branches:
            if isinstance(br, Resistor):
                stamp(br.a, br.b, 1.0 / br.r)
            elif isinstance(br, SwitchR):
                if br.closed(t0):
                    stamp(br.a, br.b, 1.0 / br.r)
            elif isinstance(br, Emf):
                stamp(br.a, br.b, 1.0 / br.r)
            elif isinstance(br, Inductor):
                stamp(br.a, br.b, 1.0 / (2.0 * br.l / h + br.r))
            elif isinstance(br, Coupled):
                m = len(br.pairs)
                for j in range(m):
                    aj, bj = br.pairs[j]
                    for k in range(m):
                        ak, bk = br.pairs[k]
                        g = br.Gblk[j, k]
                        for (ni, si) in ((aj, 1.0), (bj, -1.0)):
                            if ni == GROUND:
                                continue
                            for (nk, sk) in ((ak, 1.0), (bk, -1.0)):
                                if nk == GROUND:
                                    continue
                                G[ni, nk] += si * sk * g
            elif isinstance(br, SatFlux):
                sign, seg = br.seg
                g = br.curve.slopes[seg] * h / 2.0
                stamp(br.a, br.b, g)
            elif isinstance(br, Capacitor):
                stamp(br.a, br.b, 2.0 * br.c / h)
        lu = lu_factor(G)
        self._lu_cache[key] = lu
        return key, lu

    def _injections(self, t0, t1):
        n = self.net.n_nodes
        h = self.h
        I = np.zeros(n)

        def inject(a, b, cur):
            if a != GROUND:
                I[a] -= cur
            if b != GROUND:
                I[b] += cur

        for br in self.net.branches:
            if isinstance(br, Emf):
                inject(br.a, br.b, br.e(t1) / br.r)
            elif isinstance(br, Inductor):
                g = 1.0 / (2.0 * br.l / h + br.r)
                hist = g * (br.v + (2.0 * br.l / h - br.r) * br.i)
                inject(br.a, br.b, hist)
            elif isinstance(br, Coupled):
                hist = br.Gblk @ br.v + br.Bblk @ br.i
                for k, (a, b) in enumerate(br.pairs):
                    inject(a, b, hist[k])
            elif isinstance(br, SatFlux):
                sign, seg = br.seg
                slope = br.curve.slopes[seg]
                intercept = sign * br.curve.intercepts[seg]
                lam_pred = br.lam + (h / 2.0) * br.v
                inject(br.a, br.b, slope * lam_pred + intercept)
            elif isinstance(br, Capacitor):
                g = 2.0 * br.c / h
                inject(br.a, br.b, -g * br.v - br.i)
        return I

    def _node_v(self, v, a, b):
        va = v[a] if a != GROUND else 0.0
        return va - (v[b] if b != GROUND else 0.0)

    def step(self, t0):
        h = self.h
        t1 = t0 + h
        sat_branches = [b for b in self.net.branches if isinstance(b, SatFlux)]
        for br in sat_branches:
            br.maybe_reset(t0, h)
        for _ in range(40):
            _, lu = self._assemble(t0)
            I = self._injections(t0, t1)
            try:
                v = lu_solve(lu, I)
            except ValueError as exc:  # lu_solve rejects non-finite input
                raise SimulationFault(f"non-finite state at t={t1:.6f}s") from exc
            changed = False
            for br in sat_branches:
                lam1 = br.lam + (h / 2.0) * (br.v + self._node_v(v, br.a, br.b))
                new_seg = br.seg_of(lam1)
                if new_seg != br.seg:
                    br.seg = new_seg
                    changed = True
            if not changed:
                break
        else:
            raise SimulationFault(f"saturation segments did not settle at t={t1:.6f}s")
        if not np.all(np.isfinite(v)):
            raise SimulationFault(f"non-finite node voltage at t={t1:.6f}s")

        # commit branch states (and the energy audit)
        dE_src = 0.0
        dE_dis = 0.0
        for br in self.net.branches:
            if isinstance(br, Emf):
                vbr = self._node_v(v, br.a, br.b)
                e1 = br.e(t1)
                i1 = (vbr + e1) / br.r
                dE_src += (br.e_now * br.i + e1 * i1) / 2.0 * h
                dE_dis += (br.r * br.i ** 2 + br.r * i1 ** 2) / 2.0 * h
                br.i, br.e_now = i1, e1
            elif isinstance(br, Resistor):
                i1 = self._node_v(v, br.a, br.b) / br.r
                dE_dis += (br.r * br.i ** 2 + br.r * i1 ** 2) / 2.0 * h
                br.i = i1
            elif isinstance(br, SwitchR):
                i1 = self._node_v(v, br.a, br.b) / br.r if br.closed(t0) else 0.0
                dE_dis += (br.r * br.i ** 2 + br.r * i1 ** 2) / 2.0 * h
                br.i = i1
            elif isinstance(br, Inductor):
                vbr = self._node_v(v, br.a, br.b)
                g = 1.0 / (2.0 * br.l / h + br.r)
                i1 = g * (vbr + br.v + (2.0 * br.l / h - br.r) * br.i)
                dE_dis += (br.r * br.i ** 2 + br.r * i1 ** 2) / 2.0 * h
                br.i, br.v = i1, vbr
            elif isinstance(br, Coupled):
                vvec = np.array([self._node_v(v, a, b) for a, b in br.pairs])
                i1 = br.Gblk @ (vvec + br.v) + br.Bblk @ br.i
                dE_dis += float(np.sum(br.R * (br.i ** 2 + i1 ** 2)) / 2.0 * h)
                br.i, br.v = i1, vvec
            elif isinstance(br, SatFlux):
                vbr = self._node_v(v, br.a, br.b)
                br.lam = br.lam + (h / 2.0) * (br.v + vbr)
                br.v = vbr
                br.i = float(br.curve.current(br.lam))
            elif isinstance(br, Capacitor):
                vbr = self._node_v(v, br.a, br.b)
                g = 2.0 * br.c / h
                i1 = g * (vbr - br.v) - br.i
                br.i, br.v = i1, vbr
        if self.audit:
            self.energy["source"] += dE_src
            self.energy["dissipated"] += dE_dis

    def stored_energy(self):
        total = 0.0
        for br in self.net.branches:
            if isinstance(br, Inductor):
                total += 0.5 * br.l * br.i ** 2
            elif isinstance(br, Coupled):
                total += 0.5 * float(br.i @ br.L @ br.i)
            elif isinstance(br, SatFlux):
                total += br.curve.stored_energy(br.lam)
            elif isinstance(br, Capacitor):
                total += 0.5 * br.c * br.v ** 2
        return total

    # -- top-level run -----------------------------------------------------

    def run(self, t_end):
        """Integrate from the current state to t_end; returns probe arrays
        including the initial sample."""
        h = self.h
        n_steps = int(round(t_end / h))
        out = {name: np.empty(n_steps + 1) for name in self.net.probes}
        self._record(out, 0)
        for s in range(n_steps):
            self.step(s * h)
            self._record(out, s + 1)
        return out

    def _record(self, out, idx):
        for name, (branch, coil) in self.net.probes.items():
            cur = branch.i if coil is None else branch.i[coil]
            out[name][idx] = cur
