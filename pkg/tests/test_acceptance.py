"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run as `pytest tests/test_acceptance.py -v -s` for the per-criterion report.
"""

import math
import random
import time
from fractions import Fraction

from twistorflow.canonical import (MetricParams, einstein_solve_canonical,
                                   kahler_criterion, contact_check, ricci_canonical)
from twistorflow.coeff import Coeff
from twistorflow.flow import (CANONICAL, Z, FlowState, classify, closed_form_z,
                              entropy_series, integrate, scalar_curvature)
from twistorflow.liealg import (build_sp_basis, exact_rank, hpn_curvature,
                                jacobi_residual, sectional, structure_constants,
                                verify_block_equations)
from twistorflow.zmetric import (einstein_solve_z, hat_alpha_derivatives, ricci_z,
                                 z_geometry)


def report(criterion: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {criterion}" + (f": {detail}" if detail else ""))
    assert ok, f"{criterion} failed: {detail}"


def test_criterion_1_lie_algebra():
    t0 = time.time()
    ok = True
    for n in (2, 3):
        L = build_sp_basis(n)
        ok = ok and L.dim() == (n + 1) * (2 * n + 3) == exact_rank(L.basis)
        sc = structure_constants(L)          # raises unless closure holds
        ok = ok and jacobi_residual(sc) is None
        ok = ok and verify_block_equations(n)["all_pass"]
    elapsed = time.time() - t0
    report("1. Lie algebra dims, Jacobi, Maurer-Cartan blocks (n=2,3)",
           ok and elapsed < 30, f"{elapsed:.1f}s")


def test_criterion_2_hpn_constants():
    ok = True
    for n in (2, 3):
        T = hpn_curvature(n, route="both")
        m = 4 * n
        secs = {sectional(T, A, B) for A in range(1, m + 1)
                for B in range(1, m + 1) if A != B}
        ok = ok and secs == {Fraction(1), Fraction(4)}
        ric = T.ricci_matrix()
        ok = ok and all(ric[i][j] == (4 * (n + 2) if i == j else 0)
                        for i in range(m) for j in range(m))
        ok = ok and T.scalar() == 16 * n * (n + 2)
    report("2. Quaternion projective space constants: 1/4-pinched, Ric=4(n+2)id, "
           "Scal=16n(n+2)", ok)


def test_criterion_3_canonical_ricci():
    ok = True
    times = []
    for n in (2, 3, 4):
        t0 = time.time()
        rd = ricci_canonical(MetricParams(n))
        times.append(time.time() - t0)
        ok = ok and rd.fiber == Coeff({(-2, ()): Fraction(4), (2, ()): Fraction(4 * n)})
        ok = ok and rd.base == Coeff({(0, ()): Fraction(4 * n + 8), (2, ()): Fraction(-4)})
        ok = ok and rd.off_diagonal_zero
        ok = ok and einstein_solve_canonical(n) == {Fraction(1), Fraction(1, n + 1)}
        ok = ok and times[-1] < 60
    report("3. Canonical Ricci = (4/L^2+4nL^2, 4n+8-4L^2) exact, roots {1,1/(n+1)} "
           "(n=2,3,4)", ok, "runtimes " + ", ".join(f"{t:.1f}s" for t in times))


def test_criterion_4_kahler_contact():
    ok = True
    for n in (2, 3):
        grid = sorted(einstein_solve_canonical(n)) + [Fraction(1, n + 2), Fraction(2),
                                                      Fraction(5, 9), Fraction(7, 2)]
        for mu in grid:
            ok = ok and kahler_criterion(MetricParams(n, lambda2=mu)) == (mu == 1)
        ok = ok and contact_check(n, None)["holds"]
    report("4. Complex-basis connection skew-Hermitian iff lambda^2=1; contact "
           "identity symbolic in S/S~", ok)


def test_criterion_5_z_ricci():
    ok = True
    for n in (2, 3):
        rd = ricci_z(MetricParams(n))          # asserts unknown-freedom internally
        ok = ok and rd.fiber == Coeff({(-2, ()): Fraction(4)})
        ok = ok and rd.base == Coeff.rational(4 * n + 8)
        ok = ok and rd.off_diagonal_zero
        ok = ok and einstein_solve_z(n) == Fraction(1, n + 2)
        rep = hat_alpha_derivatives(n)
        ok = ok and rep["holds"]
    # independence diagnostics at n=2: free p,q,r,s/fiber values and nilpotent
    # rule ambiguity leave the values untouched
    geo = z_geometry(MetricParams(2), free_gamma_fiber=True)
    ric = geo.ricci()
    ok = ok and ric[0][0].grade_part(0) == Coeff({(-2, ()): Fraction(4)})
    rd1 = ricci_z(MetricParams(2), ambiguity="grade1")
    ok = ok and rd1.fiber == Coeff({(-2, ()): Fraction(4)}) and rd1.base == Coeff.rational(16)
    report("5. Z-metric Ricci = (4/L^2, 4n+8) exact and unknown-free, root 1/(n+2), "
           "derivation formulas verified (n=2,3)", ok)


def test_criterion_6_flow_oracle():
    rng = random.Random(20260808)
    worst = 0.0
    worst_drift_z = 0.0
    for _ in range(20):
        n = rng.randint(2, 5)
        rho0 = 0.5 + 1.5 * rng.random()
        mu0 = 0.05 + 1.45 * rng.random()
        init = FlowState(0.0, rho0, mu0, Z, n)
        T = classify(init)["time"]
        traj = integrate(init, 1e-4, 0.9 * T)
        worst_drift_z = max(worst_drift_z, traj.max_invariant_drift())
        for s in traj.samples:
            cf = closed_form_z(rho0, mu0, n, s.t)
            worst = max(worst, abs(s.rho - cf.rho) / cf.rho, abs(s.mu - cf.mu) / cf.mu)
    init = FlowState(0.0, 1.0, 1.6, CANONICAL, 2)
    drift_c = integrate(init, 1e-4, 0.004).max_invariant_drift()
    ok = worst <= 1e-8 and worst_drift_z <= 1e-9 and drift_c <= 1e-8
    report("6. RK4 vs closed form <= 1e-8 over 20 random cases; invariant drifts "
           "<= 1e-9 (Z) and 1e-8 (canonical)", ok,
           f"err {worst:.2e}, drifts {worst_drift_z:.2e}/{drift_c:.2e}")


def test_criterion_7_classification():
    ok = True
    for n in (2, 3):
        rho0, mu0 = Fraction(3, 2), Fraction(1, 2)
        c = classify(FlowState(0.0, rho0, mu0, Z, n))
        ok = ok and c["mode"] == "extinction" and c["time"] == rho0 / (8 * (n + 2))
        ok = ok and c["mu_limit"] == math.inf
        mu0 = Fraction(1, 8 * n)
        c = classify(FlowState(0.0, rho0, mu0, Z, n))
        ok = ok and c["mode"] == "collapse" and c["time"] == rho0 * mu0 / 8
        want_rho = rho0 * (1 - (n + 2) * mu0)
        ok = ok and abs(c["rho_limit"] - want_rho) <= 1e-8 * want_rho
        cf = closed_form_z(float(rho0), float(mu0), n, float(c["time"]) * (1 - 1e-10))
        ok = ok and abs(cf.rho - want_rho) <= 1e-8 * float(want_rho)
        gaps = [abs(closed_form_z(1.0, 0.5, n, -(2.0 ** k)).mu - 1.0 / (n + 2))
                for k in range(-3, 30)]
        ok = ok and all(a > b for a, b in zip(gaps, gaps[1:])) and gaps[-1] < 1e-8
    report("7. Extinction at rho0/(8(n+2)), collapse at rho0 mu0/8 with "
           "rho -> rho0(1-(n+2)mu0); ancient limit mu -> 1/(n+2) monotone", ok)


def test_criterion_8_stability_contrast():
    n = 2
    ok = True
    for mu0, target, toward in ((1.01, 1.0, True), (0.99, 1.0, True),
                                (1 / 3 + 0.01, 1 / 3, False), (1 / 3 - 0.01, 1 / 3, False)):
        init = FlowState(0.0, 1.0, mu0, CANONICAL, n)
        traj = integrate(init, 1e-5, 0.002)
        mus = [s.mu for s in traj.samples]
        monotone = all(a >= b for a, b in zip(mus, mus[1:])) or \
            all(a <= b for a, b in zip(mus, mus[1:]))
        moved_toward = abs(mus[-1] - target) < abs(mus[0] - target)
        ok = ok and monotone and (moved_toward == toward)
    report("8. Canonical flow: mu0 = 1 +- 0.01 monotone toward 1; "
           "mu0 = 1/(n+1) +- 0.01 moves away", ok)


def test_criterion_9_entropy():
    init = FlowState(0.0, 1.0, 0.5, Z, 2)
    recs = entropy_series(init, 200)
    ws = [r.w for r in recs]
    mono = all(a <= b + 1e-12 for a, b in zip(ws, ws[1:]))
    scal = scalar_curvature(Fraction(1), Fraction(1, 4), 2)
    ok = mono and scal == (4 * 2 + 2) * (4 * 2 + 8) == 160
    report("9. W nondecreasing along the Z-trajectory (n=2, rho0=1, mu0=1/2, "
           "200 samples); Scal(Einstein) = (4n+2)(4n+8)", ok)
