"""Shared fixtures: scenario files and cached full-length runs.

The default two-agent runs take about a second each, so they are executed
once per session and shared by the engine, CLI and acceptance tests.
"""

from pathlib import Path

import pytest

from swarmform import engine, parse_scenario

REPO = Path(__file__).resolve().parents[1]
SCENARIOS = REPO / "scenarios"

VARIANTS = ("repulsion", "attraction", "switching_step", "switching_smooth")


def scenario_text(name):
    return (SCENARIOS / f"{name}.cfg").read_text()


@pytest.fixture(scope="session")
def default_run():
    """default_run(variant) -> (scenario, trace, metrics) for the shipped
    two-agent scenario of that variant, computed once."""
    cache = {}

    def get(variant):
        if variant not in cache:
            sc = parse_scenario(scenario_text(f"two_agent_{variant}"))
            trace, metrics = engine.run(sc)
            cache[variant] = (sc, trace, metrics)
        return cache[variant]

    return get


@pytest.fixture(scope="session")
def chain_run():
    sc = parse_scenario(scenario_text("three_agent_chain"))
    trace, metrics = engine.run(sc)
    return sc, trace, metrics
