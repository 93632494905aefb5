"""Closed-loop multi-agent simulation engine.

One step advances the whole world deterministically:

  1. corrected position of every agent
  2. pair geometry of every declared edge, plus every undeclared agent
     couple (the latter interact by plain repulsion when their spheres
     overlap -- collision avoidance between agents that are not part of
     the formation graph)
  3. coupling state machine of every declared edge, with any uncouple
     commands that latched this step
  4. force of each unordered pair evaluated once and applied with opposite
     signs to its two agents, so pair contributions cancel exactly
  5. per-agent command sum clamped to the tilt saturation
  6. one Runge-Kutta step per agent under the held command

A run samples the world every `stride` steps into a Trace (the velocity
columns are the observed model output) and derives Metrics from it.
"""

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError, ModelValidityWarning, NumericDomainError, SimulationAbort
from .interaction import (PairState, corrected_position, force_repulsion,
                          pair_force, pair_geometry, saturate, update_pair)
from .plant import AgentState, rk4_step

TILT_LIMIT = 0.5  # rad; beyond this the small-angle model is suspect


@dataclass(frozen=True)
class EdgeLink:
    """A declared formation edge: agent indices (a < b), its interaction
    parameters and its coupling state."""

    a: int
    b: int
    params: object
    state: PairState


@dataclass(frozen=True)
class World:
    """Complete simulation state at one instant."""

    t: float
    agents: tuple
    radii: tuple
    edges: tuple
    gains: object
    plant: object
    params: object  # scenario-wide interaction bundle: undeclared-pair repulsion + command clamp
    dt: float

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ConfigurationError(f"world dt must be > 0, got {self.dt}")
        if len(self.radii) != len(self.agents):
            raise ConfigurationError("one interaction radius per agent required")
        n = len(self.agents)
        for e in self.edges:
            if not (0 <= e.a < n and 0 <= e.b < n and e.a < e.b):
                raise ConfigurationError(
                    f"edge ({e.a}, {e.b}) must reference distinct agents as a < b, n={n}")


def pair_slots(n_agents, edges):
    """Trace bookkeeping slots: declared edges first, then every unordered
    agent couple (monitored for range interactions)."""
    slots = [("edge", e.a, e.b) for e in edges]
    for i in range(n_agents):
        for j in range(i + 1, n_agents):
            slots.append(("range", i, j))
    return tuple(slots)


def _controls(world, active_commands, t):
    """Stages 1-5 of a step: pair bookkeeping and per-agent commands.

    Returns (commands, updated edges, slot separations, slot indicators,
    coupling events, uncoupling events).
    """
    agents = world.agents
    gains = world.gains
    n = len(agents)
    pstar = [corrected_position(s, gains) for s in agents]
    us = [0.0] * n
    slot_d = []
    slot_fen = []
    coupled = []
    uncoupled = []

    new_edges = []
    declared = set()
    for k, e in enumerate(world.edges):
        geom = pair_geometry(pstar[e.a], pstar[e.b], world.radii[e.a], world.radii[e.b],
                             e.params.d_t)
        state = update_pair(e.state, geom, e.params, k in active_commands, t)
        if state.f_en != e.state.f_en:
            (coupled if state.f_en else uncoupled).append((k, t))
        f = pair_force(geom, state, e.params)
        us[e.a] += f
        us[e.b] -= f
        new_edges.append(EdgeLink(e.a, e.b, e.params, state))
        slot_d.append(geom.d)
        slot_fen.append(float(state.f_en))
        declared.add((e.a, e.b))

    prm = world.params
    for i in range(n):
        for j in range(i + 1, n):
            geom = pair_geometry(pstar[i], pstar[j], world.radii[i], world.radii[j], prm.d_t)
            if (i, j) not in declared and abs(geom.d) < geom.r_sum:
                f = force_repulsion(geom, prm)
                us[i] += f
                us[j] -= f
            slot_d.append(geom.d)
            slot_fen.append(0.0)

    c_max = prm.c_max
    us = [saturate(u, c_max) for u in us]
    return us, tuple(new_edges), slot_d, slot_fen, coupled, uncoupled


def _integrate(world, us, t_next):
    new_agents = []
    for idx, (s, u) in enumerate(zip(world.agents, us)):
        s2 = rk4_step(s, u, world.dt, world.plant)
        if not (math.isfinite(s2.pos) and math.isfinite(s2.vel)
                and math.isfinite(s2.tilt) and math.isfinite(s2.tilt_rate)):
            raise SimulationAbort(t_next, idx, s2)
        new_agents.append(s2)
    return replace(world, t=t_next, agents=tuple(new_agents))


def step(world, active_commands=frozenset()):
    """Advance the world by one step.  `active_commands` holds the indices
    of edges whose uncouple command latches at this instant."""
    us, edges, _, _, _, _ = _controls(world, active_commands, world.t)
    return _integrate(replace(world, edges=edges), us, world.t + world.dt)


@dataclass(frozen=True)
class Trace:
    """Sampled time series of a run.

    Columns: t, then pos/vel/tilt/rate/u per agent, then separation and
    coupling indicator per pair slot, then the swarm RMS velocity.
    """

    columns: tuple
    data: np.ndarray
    dt: float
    stride: int
    n_agents: int
    slots: tuple
    slot_rsums: tuple

    def column(self, name):
        try:
            return self.data[:, self.columns.index(name)]
        except ValueError:
            raise KeyError(f"unknown trace column {name!r}; available: {', '.join(self.columns)}")

    @property
    def n_rows(self):
        return self.data.shape[0]


@dataclass(frozen=True)
class DeltaRmsResult:
    value: float | None
    rms_before: float
    rms_after: float
    reason: str | None = None


@dataclass(frozen=True)
class Metrics:
    rms_before: float
    rms_after: float
    delta_rms: float | None
    delta_reason: str | None
    coupling_events: tuple
    uncoupling_events: tuple
    velocity_sum_drift: float


def trace_columns(n_agents, n_slots):
    cols = ["t"]
    for i in range(n_agents):
        cols += [f"agent{i}_pos", f"agent{i}_vel", f"agent{i}_tilt",
                 f"agent{i}_rate", f"agent{i}_u"]
    for k in range(n_slots):
        cols += [f"pair{k}_d", f"pair{k}_fen"]
    cols.append("rms")
    return tuple(cols)


def rms_velocity(velocities):
    """Root of the mean squared agent velocity."""
    vals = list(velocities)
    if not vals:
        raise NumericDomainError("RMS velocity of an empty swarm is undefined")
    return math.sqrt(sum(v * v for v in vals) / len(vals))


def build_world(scenario):
    """Materialise a scenario into the initial World."""
    gains = scenario.resolved_gains()
    params = scenario.interaction_params(gains)
    agents = tuple(AgentState(a.pos, a.vel, a.tilt, a.rate) for a in scenario.agents)
    radii = tuple(a.radius for a in scenario.agents)
    edges = tuple(EdgeLink(a, b, params, PairState()) for a, b in scenario.edges)
    return World(0.0, agents, radii, edges, gains, scenario.plant, params, scenario.dt)


def run(scenario):
    """Execute a scenario from t = 0 to t_end.  Returns (Trace, Metrics)."""
    world = build_world(scenario)
    dt = scenario.dt
    stride = scenario.stride
    n_steps = int(round(scenario.t_end / dt))
    if n_steps < 1:
        raise ConfigurationError(f"t_end {scenario.t_end} shorter than one step dt={dt}")

    slots = pair_slots(len(world.agents), world.edges)
    slot_rsums = tuple(world.radii[i] + world.radii[j] for _, i, j in slots)
    columns = trace_columns(len(world.agents), len(slots))

    commands = scenario.commands
    fired = [False] * len(commands)
    rows = []
    coupling_events = []
    uncoupling_events = []
    tilt_warned = False

    for k in range(n_steps + 1):
        t_k = k * dt
        active = set()
        for ci, cmd in enumerate(commands):
            if not fired[ci] and t_k >= cmd.t - 1e-9:
                fired[ci] = True
                active.add(cmd.edge)

        us, edges, slot_d, slot_fen, coupled, uncoupled = _controls(world, active, t_k)
        world = replace(world, edges=edges)
        coupling_events += coupled
        uncoupling_events += uncoupled

        if k % stride == 0:
            row = [t_k]
            for s, u in zip(world.agents, us):
                row += [s.pos, s.vel, s.tilt, s.tilt_rate, u]
            for d, fen in zip(slot_d, slot_fen):
                row += [d, fen]
            row.append(rms_velocity(s.vel for s in world.agents))
            rows.append(row)

        if not tilt_warned and any(abs(s.tilt) > TILT_LIMIT for s in world.agents):
            tilt_warned = True
            warnings.warn(
                f"tilt exceeded {TILT_LIMIT} rad at t={t_k:.3f} s; "
                "small-angle model validity is doubtful", ModelValidityWarning)

        if k < n_steps:
            world = _integrate(world, us, (k + 1) * dt)

    trace = Trace(columns, np.asarray(rows, dtype=float), dt, stride,
                  len(world.agents), slots, slot_rsums)
    dres = delta_rms(trace)
    vel_idx = [columns.index(f"agent{i}_vel") for i in range(len(world.agents))]
    vsums = trace.data[:, vel_idx].sum(axis=1)
    drift = float(np.max(np.abs(vsums - vsums[0])))
    metrics = Metrics(dres.rms_before, dres.rms_after, dres.value, dres.reason,
                      tuple(coupling_events), tuple(uncoupling_events), drift)
    return trace, metrics


SETTLED_TILT = 1e-3  # rad; tilts below this count as settled flight
PRE_WINDOW = 0.5     # s of RMS history averaged right before first overlap
POST_WINDOW = 1.0    # s of settled, command-free flight averaged afterwards


def delta_rms(trace):
    """Relative change of the swarm RMS velocity across the interaction.

    Averages the RMS column over the last PRE_WINDOW seconds before any
    pair's spheres first overlap and over the first POST_WINDOW-second
    stretch afterwards in which every command is zero, every pair is
    uncoupled and every tilt has settled.  A trace without any overlap
    compares its first and last windows instead (zero for free flight).
    """
    sample_dt = trace.dt * trace.stride
    n_pre = max(1, int(round(PRE_WINDOW / sample_dt)))
    n_post = max(1, int(round(POST_WINDOW / sample_dt)))
    rms = trace.column("rms")
    n_rows = trace.n_rows

    overlap = np.zeros(n_rows, dtype=bool)
    for k, rsum in enumerate(trace.slot_rsums):
        overlap |= np.abs(trace.column(f"pair{k}_d")) < rsum

    if not overlap.any():
        before = float(rms[:n_pre].mean())
        after = float(rms[-n_post:].mean())
        return _finish(before, after)

    first = int(np.argmax(overlap))
    if first < n_pre:
        return DeltaRmsResult(None, math.nan, math.nan,
                              f"only {first} pre-contact samples, need {n_pre}")
    before = float(rms[first - n_pre:first].mean())

    settled = np.ones(n_rows, dtype=bool)
    for i in range(trace.n_agents):
        settled &= trace.column(f"agent{i}_u") == 0.0
        settled &= np.abs(trace.column(f"agent{i}_tilt")) < SETTLED_TILT
    for k in range(len(trace.slots)):
        settled &= trace.column(f"pair{k}_fen") == 0.0

    start = None
    run_len = 0
    for i in range(first, n_rows):
        run_len = run_len + 1 if settled[i] else 0
        if run_len >= n_post:
            start = i - n_post + 1
            break
    if start is None:
        return DeltaRmsResult(None, before, math.nan,
                              "no settled command-free window after the interaction")
    after = float(rms[start:start + n_post].mean())
    return _finish(before, after)


def _finish(before, after):
    if before <= 0.0:
        return DeltaRmsResult(None, before, after, "pre-interaction RMS velocity is zero")
    return DeltaRmsResult(abs(after - before) / before, before, after)
