"""Oracle-equivalence and invariant suites run by ``cvmac selfcheck``."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gaussian as gs
from .capacity import ConstraintsA, i_scheme_a_closed, i_scheme_b_closed, n_max_a
from .channels import (
    SchemeAConfig,
    SchemeBConfig,
    output_mean_photons_a,
    simulate_scheme_a,
    simulate_scheme_b,
)

ORACLE_TOL = 1e-9


@dataclass(frozen=True)
class SuiteResult:
    name: str
    max_residual: float
    tolerance: float
    cases: int

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tolerance)


def oracle_grid_a(density: int):
    return (
        np.linspace(0.05, 1.5, density),
        np.linspace(0.0, 2.0, density),
        np.linspace(0.0, 1e3, density),
    )


def oracle_grid_b(density: int):
    return (
        np.linspace(0.0, 2.5, density),
        np.linspace(0.0, 2.5, density),
        np.linspace(0.0, 1e3, density),
    )


def check_scheme_a(density: int, *, mirror_kept_port: bool = False) -> SuiteResult:
    worst, count = 0.0, 0
    thetas, rs, s2s = oracle_grid_a(density)
    for theta in thetas:
        for r in rs:
            for s2 in s2s:
                sim = simulate_scheme_a(
                    SchemeAConfig(theta, r, s2), mirror_kept_port=mirror_kept_port
                )
                worst = max(worst, abs(sim - i_scheme_a_closed(theta, r, s2)))
                count += 1
    return SuiteResult("scheme_a_oracle", worst, ORACLE_TOL, count)


def check_scheme_b(density: int) -> SuiteResult:
    worst, count = 0.0, 0
    rs, Rs, s2s = oracle_grid_b(density)
    for r in rs:
        for R in Rs:
            for s2 in s2s:
                sim = simulate_scheme_b(SchemeBConfig(r, R, s2))
                worst = max(worst, abs(sim - i_scheme_b_closed(r, R, s2)))
                count += 1
    return SuiteResult("scheme_b_oracle", worst, ORACLE_TOL, count)


def random_symplectic(rng: np.random.Generator, num_modes: int, length: int = 4) -> gs.SymplecticOp:
    """Random word of squeezers, beam splitters, rotations and QND gates."""
    op = gs.identity(num_modes)
    for _ in range(length):
        kind = rng.integers(5 if num_modes >= 3 else 4)
        if kind == 0:
            g = gs.one_mode_squeezer(rng.uniform(-1.0, 1.0), int(rng.integers(num_modes)), num_modes)
        elif kind == 1:
            i, j = rng.choice(num_modes, 2, replace=False)
            g = gs.beam_splitter(rng.uniform(-math.pi / 2, math.pi / 2), (int(i), int(j)), num_modes)
        elif kind == 2:
            i, j = rng.choice(num_modes, 2, replace=False)
            g = gs.two_mode_squeezer(rng.uniform(0.0, 1.0), (int(i), int(j)), num_modes)
        elif kind == 3:
            g = gs.phase_rotation(rng.uniform(0, 2 * math.pi), int(rng.integers(num_modes)), num_modes)
        else:
            g = gs.qnd_triple_gate(tuple(int(k) for k in rng.permutation(num_modes)[:3]), num_modes)
        op = g @ op
    return op


def random_state(rng: np.random.Generator, num_modes: int, pure: bool = False) -> gs.GaussianState:
    """Symplectic image of a product of thermal (or vacuum) states, randomly displaced."""
    occupations = np.zeros(num_modes) if pure else rng.uniform(0.0, 3.0, num_modes)
    base = gs.tensor(*(gs.thermal(n) for n in occupations))
    shift = gs.SymplecticOp(np.eye(2 * num_modes), rng.normal(0.0, 2.0, 2 * num_modes))
    return gs.apply(shift @ random_symplectic(rng, num_modes), base)


def check_symplectic(rng: np.random.Generator, cases: int) -> SuiteResult:
    worst = 0.0
    omega = gs.symplectic_form(3)
    for _ in range(cases):
        S = random_symplectic(rng, 3).matrix
        worst = max(worst, np.max(np.abs(S @ omega @ S.T - omega)))
    return SuiteResult("symplectic_identity", worst, 1e-9, cases)


def check_entropy(rng: np.random.Generator, cases: int) -> tuple[SuiteResult, SuiteResult]:
    purity, invariance = 0.0, 0.0
    for _ in range(cases):
        pure = random_state(rng, 3, pure=True)
        purity = max(purity, abs(gs.entropy(pure)))
        mixed = random_state(rng, 3)
        moved = gs.apply(random_symplectic(rng, 3), mixed)
        invariance = max(invariance, abs(gs.entropy(moved) - gs.entropy(mixed)))
    return (
        SuiteResult("entropy_purity", purity, 1e-9, cases),
        SuiteResult("entropy_invariance", invariance, 1e-9, cases),
    )


def check_physicality(rng: np.random.Generator, cases: int) -> SuiteResult:
    """Largest violation of ``nu >= 1/2`` after evolution and reduction (0 when none)."""
    worst = 0.0
    for _ in range(cases):
        state = gs.apply(random_symplectic(rng, 3), random_state(rng, 3))
        keep = sorted(rng.choice(3, int(rng.integers(1, 4)), replace=False).tolist())
        for s in (state, gs.partial_trace(state, keep)):
            worst = max(worst, 0.5 - gs.symplectic_eigenvalues(s)[0])
    return SuiteResult("physicality", max(worst, 0.0), 1e-9, cases)


def check_output_photons(rng: np.random.Generator, cases: int) -> SuiteResult:
    """Excess of the scheme-A output photon number over its product-input bound."""
    worst = 0.0
    for _ in range(cases):
        n1, n2 = rng.uniform(0.0, 50.0, 2)
        theta = rng.uniform(0.0, math.pi / 2)
        if rng.uniform() < 0.5:
            # full budgets with aligned phases saturate the bound
            phase = np.exp(1j * rng.uniform(0, 2 * math.pi))
            a1, a2 = math.sqrt(n1) * phase, math.sqrt(2 * n2) * phase
        else:
            a1 = math.sqrt(n1 * rng.uniform()) * np.exp(1j * rng.uniform(0, 2 * math.pi))
            a2 = math.sqrt(2 * n2 * rng.uniform()) * np.exp(1j * rng.uniform(0, 2 * math.pi))
        n_out = output_mean_photons_a(theta, a1, gs.coherent(a2))
        worst = max(worst, n_out - n_max_a(theta, ConstraintsA(n1, n2)))
    return SuiteResult("output_photon_bound", max(worst, 0.0), 1e-12, cases)


def run_all(
    density: int = 10, cases: int = 1000, seed: int = 20240611, *, mirror_kept_port: bool = False
) -> list[SuiteResult]:
    if density < 2:
        raise ValueError("grid density must be at least 2")
    rng = np.random.default_rng(seed)
    return [
        check_scheme_a(density, mirror_kept_port=mirror_kept_port),
        check_scheme_b(density),
        check_symplectic(rng, cases),
        *check_entropy(rng, cases),
        check_physicality(rng, cases),
        check_output_photons(rng, cases),
    ]
