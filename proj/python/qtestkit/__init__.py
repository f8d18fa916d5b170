"""Unit testing and mutation experiments for quantum subroutines."""

import json

from ._qtestkit import (
    BenchError,
    ConfigError,
    PrepError,
    PreparedInput,
    benchmark_info,
    benchmarks,
    comp_sup,
    default_suite_yaml,
    dump,
    fidelity,
    generator,
    ket_x,
    mutate,
    pauli,
    scaq_check,
    spec_qft,
    two_value,
)
from . import _qtestkit

__all__ = [
    "BenchError",
    "ConfigError",
    "PrepError",
    "PreparedInput",
    "benchmark_info",
    "benchmarks",
    "comp_sup",
    "default_suite_yaml",
    "dump",
    "fidelity",
    "generator",
    "ket_x",
    "mutate",
    "pauli",
    "run_experiment",
    "run_suite",
    "scaq_check",
    "spec_qft",
    "stat_fit",
    "two_value",
]


def stat_fit(observed, expected, alpha=0.01):
    """Goodness of fit of observed counts to an expected distribution, as a dict."""
    return json.loads(_qtestkit.stat_fit(observed, expected, alpha))


def run_suite(yaml_text, seed=0):
    """Runs suite YAML against the catalog library and returns the summary dict."""
    return json.loads(_qtestkit.run_suite(yaml_text, seed))


def run_experiment(config_text):
    """Runs a trigger-rate campaign. Returns (csv_text, report_dict)."""
    csv, raw = _qtestkit.run_experiment(config_text)
    return csv, json.loads(raw)
