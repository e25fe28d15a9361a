"""Spin-orbit quantum prisoner's dilemma: protocol, analysis and rendering."""

from ._core import (
    PORTS,
    AllDark,
    Outcome,
    PayoffTable,
    best_response,
    calibration,
    classical_minimum_check,
    classical_mixed,
    concurrence,
    disentangler_pipeline,
    entangler,
    intensities_to_probs,
    mode_converter,
    mz,
    nash_discrete,
    parse_strategy,
    payoffs,
    port_images,
    run_protocol,
    strategies,
    sweep,
)

__all__ = [
    "PORTS",
    "AllDark",
    "Outcome",
    "PayoffTable",
    "best_response",
    "calibration",
    "classical_minimum_check",
    "classical_mixed",
    "concurrence",
    "disentangler_pipeline",
    "entangler",
    "intensities_to_probs",
    "mode_converter",
    "mz",
    "nash_discrete",
    "parse_strategy",
    "payoffs",
    "port_images",
    "run_protocol",
    "strategies",
    "sweep",
]
