"""Internal consistency checks runnable without the test suite.

Each check exercises one invariant of the algebra engine, the two-level
oracle, or the discretized evaluator, and reports a pass/fail flag plus a
short diagnostic.  Randomized checks draw from a seeded generator so the
outcome is reproducible run to run.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from .grassmann import (
    GeneratorRegistry,
    GrassmannElement,
    add,
    berezin_integrate,
    coefficient,
    determinant,
    gaussian_integral_expand,
    integrate_pair,
    left_derivative,
    max_coefficient_difference,
    monomial,
    mul,
    one,
    register_generators,
    trace_functional,
)
from .oscillator import (
    density_matrix,
    hamiltonian,
    ladder_matrices,
    partition_trace,
    supertrace,
    thermal_observables,
)
from .path_integral import (
    BoundaryCondition,
    DiscretizedChain,
    SliceScheme,
    action_matrix,
    close_boundary,
    contract_chain,
    kernel_paper_form,
    paper_normalized,
    partition_via_determinant,
)

_BETAS = (0.1, 0.5, 1.0, 2.0)
_OMEGAS = (0.5, 1.0, 2.0)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a single named invariant check."""

    name: str
    passed: bool
    detail: str


def _random_element(
    registry: GeneratorRegistry,
    rng: random.Random,
    max_terms: int = 6,
    allow_constant: bool = True,
) -> GrassmannElement:
    n = registry.size
    lowest = 0 if allow_constant else 1
    out = GrassmannElement(registry, {})
    for _ in range(rng.randint(1, max_terms)):
        mask = rng.randint(lowest, (1 << n) - 1)
        indices = [i for i in range(n) if mask >> i & 1]
        out = add(out, monomial(registry, indices, rng.uniform(-1.0, 1.0)))
    return out


def _check_anticommutation() -> Tuple[bool, str]:
    registry = register_generators(["a", "b", "c", "d"])
    worst = 0.0
    for i in range(registry.size):
        for j in range(registry.size):
            gi = monomial(registry, [i])
            gj = monomial(registry, [j])
            s = add(mul(gi, gj), mul(gj, gi))
            for coeff in s.terms.values():
                worst = max(worst, abs(coeff))
    return worst == 0.0, "max |g_i g_j + g_j g_i| coefficient = %.3g" % worst


def _check_nilpotency(rng: random.Random) -> Tuple[bool, str]:
    registry = register_generators(["g%d" % k for k in range(5)])
    for i in range(registry.size):
        g = monomial(registry, [i])
        if not mul(g, g).is_zero:
            return False, "generator %d squared is nonzero" % i
    for _ in range(50):
        a = _random_element(registry, rng, allow_constant=False)
        power = a
        for _ in range(registry.size):
            power = mul(power, a)
        if not power.is_zero:
            return False, "constant-free element to power %d survived" % (
                registry.size + 1
            )
    return True, "generator squares and high powers all vanish exactly"


def _check_associativity(rng: random.Random) -> Tuple[bool, str]:
    registry = register_generators(["g%d" % k for k in range(6)])
    worst = 0.0
    for _ in range(200):
        a = _random_element(registry, rng)
        b = _random_element(registry, rng)
        c = _random_element(registry, rng)
        left = mul(mul(a, b), c)
        right = mul(a, mul(b, c))
        worst = max(worst, max_coefficient_difference(left, right))
    return worst <= 1e-12, "max |(ab)c - a(bc)| coefficient = %.3g" % worst


def _check_derivative_squared(rng: random.Random) -> Tuple[bool, str]:
    registry = register_generators(["g%d" % k for k in range(5)])
    for _ in range(100):
        a = _random_element(registry, rng)
        for g in range(registry.size):
            twice = left_derivative(left_derivative(a, g), g)
            if not twice.is_zero:
                return False, "second derivative in generator %d nonzero" % g
    return True, "d/dg applied twice annihilates 100 random elements"


def _check_integration_is_differentiation(rng: random.Random) -> Tuple[bool, str]:
    registry = register_generators(["g%d" % k for k in range(5)])
    for _ in range(100):
        a = _random_element(registry, rng)
        for g in range(registry.size):
            if berezin_integrate(a, g).terms != left_derivative(a, g).terms:
                return False, "integral and derivative disagree on generator %d" % g
    return True, "single-variable integral matches left derivative exactly"


def _check_gaussian_identity(rng: random.Random) -> Tuple[bool, str]:
    worst = 0.0
    np_rng = np.random.default_rng(rng.getrandbits(32))
    for n in range(1, 5):
        for _ in range(25):
            m = np_rng.uniform(-2.0, 2.0, size=(n, n))
            ref = determinant(m)
            got = gaussian_integral_expand(m)
            worst = max(worst, abs(got - ref) / max(1.0, abs(ref)))
    return worst <= 1e-10, "max relative |integral - det| = %.3g" % worst


def _check_trace_normalization() -> Tuple[bool, str]:
    registry = register_generators(["c", "c*", "c'"], pairs=[("c", "c*")])
    kernel = add(one(registry), monomial(registry, [1, 2], 1.0))
    value = trace_functional(kernel, (1, 0), prime=2)
    return abs(value - 2.0) <= 1e-14, "trace of the zero-beta kernel = %.17g" % value


def _check_canonical_anticommutation() -> Tuple[bool, str]:
    c_dag, c = ladder_matrices()
    car = c @ c_dag + c_dag @ c
    if not np.array_equal(car, np.eye(2)):
        return False, "c c† + c† c deviates from the identity"
    if np.any(c @ c != 0.0) or np.any(c_dag @ c_dag != 0.0):
        return False, "a ladder operator fails to square to zero"
    return True, "ladder matrices satisfy the anticommutation relations exactly"


def _check_density_spectrum() -> Tuple[bool, str]:
    worst = 0.0
    for beta in _BETAS:
        for omega in _OMEGAS:
            rho = density_matrix(beta, omega)
            h = hamiltonian(omega)
            if not np.array_equal(rho @ h, h @ rho):
                return False, "density matrix does not commute with H"
            eigs = np.sort(np.linalg.eigvalsh(rho))
            expect = np.sort([math.exp(-beta * omega), 1.0])
            worst = max(worst, float(np.max(np.abs(eigs - expect))))
    return worst <= 1e-12, "max eigenvalue deviation = %.3g" % worst


def _check_partition_closed_form() -> Tuple[bool, str]:
    worst = 0.0
    for beta in _BETAS:
        for omega in _OMEGAS:
            ref = 1.0 + math.exp(-beta * omega)
            got = partition_trace(density_matrix(beta, omega))
            worst = max(worst, abs(got - ref) / ref)
    return worst <= 1e-15, "max relative deviation from 1 + e^(-bw) = %.3g" % worst


def _check_trace_supertrace_sum() -> Tuple[bool, str]:
    worst = 0.0
    for beta in _BETAS:
        for omega in _OMEGAS:
            rho = density_matrix(beta, omega)
            total = partition_trace(rho) + supertrace(rho)
            worst = max(worst, abs(total - 2.0))
    return worst <= 1e-14, "max |trace + supertrace - 2| = %.3g" % worst


def _check_density_semigroup() -> Tuple[bool, str]:
    worst = 0.0
    for beta_1 in _BETAS:
        for beta_2 in _BETAS:
            for omega in _OMEGAS:
                combined = density_matrix(beta_1 + beta_2, omega)
                product = density_matrix(beta_1, omega) @ density_matrix(
                    beta_2, omega
                )
                worst = max(worst, float(np.max(np.abs(combined - product))))
    return worst <= 1e-14, "max entrywise semigroup defect = %.3g" % worst


def _check_mean_energy_derivative() -> Tuple[bool, str]:
    worst = 0.0
    step = 1e-5
    for beta in _BETAS:
        for omega in _OMEGAS:
            point = thermal_observables(beta, omega)
            up = math.log(partition_trace(density_matrix(beta + step, omega)))
            down = math.log(partition_trace(density_matrix(beta - step, omega)))
            numeric = -(up - down) / (2.0 * step)
            worst = max(worst, abs(point.mean_energy - numeric))
    return worst <= 1e-8, "max |<E> + dlnZ/dbeta| = %.3g" % worst


def _check_route_equivalence(tolerance: float) -> Tuple[bool, str]:
    worst = 0.0
    for scheme in SliceScheme:
        for beta in _BETAS:
            for omega in _OMEGAS:
                for n_steps in (1, 2, 4, 8):
                    chain = DiscretizedChain(n_steps, beta, omega, scheme)
                    kernel = paper_normalized(contract_chain(chain))
                    for bc in BoundaryCondition:
                        symbolic = close_boundary(kernel, bc)
                        direct = partition_via_determinant(chain, bc)
                        worst = max(worst, abs(symbolic - direct))
    return worst <= tolerance, "max |chain route - determinant route| = %.3g" % worst


def _check_antiperiodic_oracle() -> Tuple[bool, str]:
    worst = 0.0
    for beta in _BETAS + (5.0,):
        for omega in _OMEGAS:
            ref = partition_trace(density_matrix(beta, omega))
            got = close_boundary(
                kernel_paper_form(beta, omega), BoundaryCondition.ANTIPERIODIC
            )
            worst = max(worst, abs(got - ref) / abs(ref))
    return worst <= 1e-12, "max relative closure/trace mismatch = %.3g" % worst


def _check_periodic_oracle() -> Tuple[bool, str]:
    worst = 0.0
    for beta in _BETAS + (5.0,):
        for omega in _OMEGAS:
            ref = supertrace(density_matrix(beta, omega))
            got = close_boundary(
                kernel_paper_form(beta, omega), BoundaryCondition.PERIODIC
            )
            worst = max(worst, abs(got - ref) / abs(ref))
    return worst <= 1e-12, "max relative closure/supertrace mismatch = %.3g" % worst


def _check_graded_duality() -> Tuple[bool, str]:
    worst = 0.0
    for beta in _BETAS:
        for omega in _OMEGAS:
            z_plus = supertrace(density_matrix(beta, omega))
            cutoff = int(math.ceil(40.0 / (beta * omega)))
            bosonic = math.fsum(
                math.exp(-beta * omega * n) for n in range(cutoff + 1)
            )
            worst = max(worst, abs(z_plus * bosonic - 1.0))
    return worst <= 1e-12, "max |Z+ * sum_n e^(-bwn) - 1| = %.3g" % worst


def _check_chain_coefficient() -> Tuple[bool, str]:
    beta, omega = 1.0, 1.0
    worst = 0.0
    diag_signs = set()
    prop_signs = set()
    for n_steps in range(1, 65):
        exact = contract_chain(DiscretizedChain(n_steps, beta, omega))
        worst = max(worst, abs(abs(exact.coeff_prop) - math.exp(-beta * omega)))
        first = contract_chain(
            DiscretizedChain(n_steps, beta, omega, SliceScheme.FIRST_ORDER)
        )
        expect = 1.0
        for _ in range(n_steps):
            expect *= 1.0 - beta * omega / n_steps
        worst = max(worst, abs(abs(first.coeff_prop) - abs(expect)))
        for kernel in (exact, first):
            diag_signs.add(math.copysign(1.0, kernel.coeff_diag))
            if kernel.coeff_prop != 0.0:
                prop_signs.add(math.copysign(1.0, kernel.coeff_prop))
    if len(diag_signs) != 1 or len(prop_signs) != 1:
        return False, "extracted coefficient signs drift with step count"
    return worst <= 1e-13, "max coefficient defect over N = 1..64 is %.3g" % worst


def _check_contraction_idempotence() -> Tuple[bool, str]:
    lam = 0.75
    # beta = n_steps makes eps = 1, so the first-order coefficient is exact
    chain = DiscretizedChain(2, 2.0, 1.0 - lam, SliceScheme.FIRST_ORDER)
    registry = chain.registry
    piece = one(registry)
    for k in (1, 2):
        step = add(
            one(registry),
            monomial(
                registry,
                [chain.cstar_index(k), chain.c_index(k - 1)],
                chain.step_coefficient,
            ),
        )
        piece = mul(piece, step)
    weight = add(
        one(registry),
        monomial(registry, [chain.cstar_index(1), chain.c_index(1)], -1.0),
    )
    reduced = integrate_pair(
        mul(piece, weight), chain.cstar_index(1), chain.c_index(1)
    )
    expect_mask = (1 << chain.cstar_index(2)) | (1 << chain.c_index(0))
    extra = {
        mask: coeff
        for mask, coeff in reduced.terms.items()
        if mask not in (0, expect_mask)
    }
    if extra:
        return False, "pair integration left %d stray monomials" % len(extra)
    # signed coefficient of the written-order monomial c2* c0
    prop = coefficient(reduced, [chain.cstar_index(2), chain.c_index(0)])
    const = reduced.terms.get(0, 0.0)
    ok = const == 1.0 and prop == lam * lam
    return ok, "reduced kernel = %.17g + %.17g * (c2* c0)" % (const, prop)


def _check_action_matrix_routes() -> Tuple[bool, str]:
    worst = 0.0
    cases = [(1.0, 1.0, SliceScheme.EXACT), (0.5, 2.0, SliceScheme.EXACT),
             (2.0, 2.0, SliceScheme.FIRST_ORDER), (1e-9, 1.0, SliceScheme.EXACT)]
    for beta, omega, scheme in cases:
        for n_steps in range(1, 5):
            chain = DiscretizedChain(n_steps, beta, omega, scheme)
            for bc in BoundaryCondition:
                m = action_matrix(chain, bc)
                ref = determinant(m)
                got = gaussian_integral_expand(m)
                worst = max(worst, abs(got - ref))
    return worst <= 1e-10, "max |integral - det| over action matrices = %.3g" % worst


def run_selftest(tolerance: float = 1e-10, seed: int = 1173) -> List[CheckResult]:
    """Run every invariant check and return one result per check.

    tolerance bounds the route-equivalence comparison; the remaining
    checks pin their own tighter bounds.
    """
    rng = random.Random(seed)
    plan: List[Tuple[str, Callable[[], Tuple[bool, str]]]] = [
        ("generator-anticommutation", _check_anticommutation),
        ("generator-nilpotency", lambda: _check_nilpotency(rng)),
        ("product-associativity", lambda: _check_associativity(rng)),
        ("derivative-squares-to-zero", lambda: _check_derivative_squared(rng)),
        ("integration-is-differentiation",
         lambda: _check_integration_is_differentiation(rng)),
        ("gaussian-determinant-identity", lambda: _check_gaussian_identity(rng)),
        ("trace-normalization", _check_trace_normalization),
        ("canonical-anticommutation", _check_canonical_anticommutation),
        ("density-matrix-spectrum", _check_density_spectrum),
        ("partition-closed-form", _check_partition_closed_form),
        ("trace-supertrace-sum", _check_trace_supertrace_sum),
        ("density-semigroup", _check_density_semigroup),
        ("mean-energy-derivative", _check_mean_energy_derivative),
        ("route-equivalence", lambda: _check_route_equivalence(tolerance)),
        ("antiperiodic-matches-trace", _check_antiperiodic_oracle),
        ("periodic-matches-supertrace", _check_periodic_oracle),
        ("graded-partition-duality", _check_graded_duality),
        ("chain-coefficient-exactness", _check_chain_coefficient),
        ("contraction-idempotence", _check_contraction_idempotence),
        ("action-matrix-routes", _check_action_matrix_routes),
    ]
    results = []
    for name, check in plan:
        passed, detail = check()
        results.append(CheckResult(name, passed, detail))
    return results
