"""Odds and ends: error surfaces and the shipped problem files."""

import glob
import os

import pytest

from perturbkit.config import load_config
from perturbkit.core import resolvent_apply
from perturbkit.errors import NonIntegrable, UnrepresentableConvolution
from perturbkit.eigen import find_eigenvalues, verify_eigen, RealInterval
from perturbkit.krein import inverse_at_zero
from perturbkit.operators import LaplaceLine
from perturbkit.vectors import PowerLaw

CONFIG_DIR = os.path.join(os.path.dirname(__file__), "..", "configs")


def test_inverse_at_zero_needs_summable_pairing(ex4_pair):
    with pytest.raises(NonIntegrable):
        inverse_at_zero(ex4_pair.spec)


def test_line_has_no_power_law_kernel():
    with pytest.raises(UnrepresentableConvolution):
        resolvent_apply(LaplaceLine(), -1.0, PowerLaw(-2.0))


def test_verify_three_points(ex2_pair):
    pairs = find_eigenvalues(ex2_pair.spec, RealInterval(-2.0, -0.01))
    for pair in pairs:
        others = [z for z in (-2.0, -3.0 + 1.0j, -0.4 - 0.5j)
                  if abs(z - pair.lam) > 1e-6]
        assert verify_eigen(ex2_pair.spec, pair, others) < 1e-7


@pytest.mark.parametrize("path", sorted(glob.glob(
    os.path.join(CONFIG_DIR, "*.toml"))))
def test_shipped_configs_parse(path):
    cfg = load_config(path)
    assert cfg.task in ("resolve", "eigen", "inverse", "dualpair", "approx",
                        "scatter", "verify-examples")
