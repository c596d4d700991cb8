from __future__ import annotations

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

CRITERIA = {
    1: "rank-1 Meixner-Pollaczek equivalence (n <= 20)",
    2: "recurrence residuals exactly zero on the sweep",
    3: "difference-equation residuals exactly zero; rank-1 display reproduced",
    4: "gen_binom(m, m - gamma_k) equals the closed-form step binomial",
    5: "Euler recursion: exactly one coefficient variant is an identity",
    6: "rank-1 Laguerre equals n! times the classical Laguerre polynomial",
    7: "Haar Monte-Carlo agrees with psi_m within 3 standard errors",
    8: "Laplace transform of the Riesz measure within 1e-6",
    9: "Laplace transform of Laguerre functions within 1e-5",
    10: "Laguerre Gram off-diagonal < 1e-6 with node-doubling stability",
    11: "rank-1 branching Gram off-diagonal < 1e-4 with tail bound < 1e-3",
    12: "suite quick is byte-identical; mutated recurrence exits 1",
}

# Filled by tests/test_acceptance.py; printed once at the end of the session.
ACCEPTANCE_RESULTS: dict = {}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, title in CRITERIA.items():
        status = ACCEPTANCE_RESULTS.get(num, "NOT RUN")
        terminalreporter.write_line(f"criterion {num:>2}: {status:<7} {title}")
