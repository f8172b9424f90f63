"""Facility location and pricing with logit-demand shippers."""

from ._core import (
    Error,
    Instance,
    Model,
    RhoTable,
    Solution,
    alpha_for_target_rho,
    alpha_sweep_values,
    build,
    enumerate_oracle,
    evaluate,
    fixture_instance,
    fixture_rho,
    generate,
    load_instance,
    logit_acceptance,
    profit_upper_bound,
    rho_closed_form,
    rho_constant,
    rho_saa,
    run_fixture_example,
    run_sweep,
    simulate,
    solve,
)

__all__ = [
    "Error",
    "Instance",
    "Model",
    "RhoTable",
    "Solution",
    "alpha_for_target_rho",
    "alpha_sweep_values",
    "build",
    "enumerate_oracle",
    "evaluate",
    "fixture_instance",
    "fixture_rho",
    "generate",
    "load_instance",
    "logit_acceptance",
    "profit_upper_bound",
    "rho_closed_form",
    "rho_constant",
    "rho_saa",
    "run_fixture_example",
    "run_sweep",
    "simulate",
    "solve",
]
