"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Every tolerance is pinned here.  Four sub-checks are expected to fail and
are asserted anyway rather than weakened: the self-adjointness defect with
the gauge switched off, the first-order intertwining residuals of both
chains, the truncated-domain spectrum match of the wall-singular potential,
and the tabulated Morse-chain energy formula against shooting.  Each failure
is a reproducible property of the formulas themselves (see the verification
report for the passing counterparts that certify the corrected forms);
details live in the repository notes.
"""

import subprocess
import sys
import warnings

import numpy as np
import pytest

from torusdirac import analytic, fields, geometry, numerics, operators, pseudoherm
from torusdirac.grids import Grid, band_limited, compact_test_functions

warnings.filterwarnings("ignore", message="c <= a")


def report(criterion, name, ok, detail):
    line = f"[criterion {criterion}] {'PASS' if ok else 'FAIL'}: {name} ({detail})"
    print(line)
    return ok, line


def finish(results):
    bad = [line for ok, line in results if not ok]
    assert not bad, "failed sub-checks:\n" + "\n".join(bad)


def test_criterion_01_geometry_identities():
    p = geometry.TorusParams(a=0.5, c=2.0)
    xs = np.linspace(0, 2 * np.pi, 181)
    worst = max(
        float(np.max(np.abs(geometry.metric_at(p, x)
                            - geometry.vierbein_at(p, x) @ geometry.ETA
                            @ geometry.vierbein_at(p, x).T)))
        for x in xs
    )
    results = [report(1, "frame identity", worst < 1e-13, f"max gap {worst:.2e}")]
    errs = []
    for h in (1e-3, 5e-4):
        worst_h = 0.0
        for x in xs[1:-1]:
            ex = geometry.christoffel_at(p, x)
            orc = geometry.christoffel_fd_oracle(p, x, h)
            worst_h = max(worst_h, abs(ex.gamma_2_12 - orc.gamma_2_12),
                          abs(ex.gamma_1_22 - orc.gamma_1_22))
        errs.append(worst_h)
    order = float(np.log2(errs[0] / errs[1]))
    results.append(report(1, "christoffel oracle order", order >= 1.9, f"order {order:.2f}"))
    finish(results)


def test_criterion_02_squaring_oracle():
    p = geometry.TorusParams(a=0.25, c=2.0)
    f = fields.quadratic_ring_field(C2=0.2, e=1.0, k=1)
    g = Grid(1024)
    worst = max(
        operators.squaring_discrepancy(
            p, f, 1, g, operators.SpinorGF(*band_limited(g, [5, 6, 7, 8], rng=s,
                                                         n_functions=2)))
        for s in range(20)
    )
    results = [report(2, "squared kernel matches decoupled operators @1024",
                      worst < 1e-6, f"worst rel {worst:.2e}")]
    g2 = g.refined()
    d1 = operators.squaring_discrepancy(
        p, f, 1, g, operators.SpinorGF(*band_limited(g, [5, 6, 7, 8], rng=0, n_functions=2)))
    d2 = operators.squaring_discrepancy(
        p, f, 1, g2, operators.SpinorGF(*band_limited(g2, [5, 6, 7, 8], rng=0, n_functions=2)))
    results.append(report(2, "improves under refinement", d2 < d1,
                          f"{d1:.2e} -> {d2:.2e}"))
    finish(results)


def test_criterion_03_hermiticity_switch():
    p = geometry.TorusParams(a=0.5, c=2.0)
    g = Grid(512)
    pairs = [
        (operators.SpinorGF(*band_limited(g, [1, 2, 3], rng=s, n_functions=2)),
         operators.SpinorGF(*band_limited(g, [2, 4], rng=90 + s, n_functions=2)))
        for s in range(6)
    ]
    d_zero = operators.hermiticity_defect(p, fields.zero_field(), 1, g, pairs)
    d_herm = operators.hermiticity_defect(
        p, fields.hermitizing_quadratic_field(0.4, e=1.0, k=1), 1, g, pairs)
    real_ax = fields.GaugeField(kind="tabulated", grid=g, e=1.0, k=1,
                                ax_samples=tuple(np.cos(g.points)),
                                au_samples=tuple(np.zeros(g.n)))
    d_real = operators.hermiticity_defect(p, real_ax, 1, g, pairs)
    results = [
        # expected red: the geometric sine term obstructs flat self-adjointness
        # for every assembly that also reproduces the decoupled equations
        report(3, "defect < 1e-10 with gauge off", d_zero < 1e-10, f"defect {d_zero:.2e}"),
        report(3, "defect < 1e-10 with hermitizing imaginary gauge",
               d_herm < 1e-10, f"defect {d_herm:.2e}"),
        report(3, "defect > 1e-3 with real unit gauge", d_real > 1e-3,
               f"defect {d_real:.2e}"),
    ]
    finish(results)


def test_criterion_04_factorization_identities():
    a = 0.5
    p = geometry.TorusParams(a=a, c=2.0)
    g = Grid(10000)
    x = g.points
    s = pseudoherm.sqrt_am1(a)
    w = -1j * s / a * np.sin(x) + 1j * (a - 2) / (2 * a)
    wp = -1j * s / a * np.cos(x)
    v, v1 = pseudoherm.partner_potentials_case1(p, g)
    defect = max(float(np.max(np.abs(w ** 2 - wp - v.v))),
                 float(np.max(np.abs(w ** 2 + wp - v1.v))))
    results = [report(4, "W^2 -+ W' equals the closed-form partners",
                      defect < 1e-12, f"pointwise {defect:.2e} on 1e4 points")]
    perturbed = max(float(np.max(np.abs((1.01 * w) ** 2 - wp - v.v))),
                    float(np.max(np.abs((1.01 * w) ** 2 + wp - v1.v))))
    ratio = perturbed / max(defect, 1e-16)
    results.append(report(4, "1% negative control amplifies defect >= 1e3",
                          ratio >= 1e3, f"ratio {ratio:.1e}"))
    finish(results)


def test_criterion_05_intertwining_residuals():
    p = geometry.TorusParams(a=0.5, c=2.0)
    g = Grid(2048)
    phis = compact_test_functions(g, [3, 4, 6], rng=5, n_functions=4)

    herm = fields.hermitizing_quadratic_field(C2=0.4, e=1.0, k=1)
    plus, _ = operators.decouple_constant_vf(p, herm, 1, 1.0, g)
    h_s = pseudoherm.SchrodingerOp(g, plus.rho)
    eta2 = pseudoherm.eta2_case1(p, 0.0, g)
    r1 = pseudoherm.intertwining_residual(eta2, h_s, pseudoherm.AdjointOf(h_s), phis)

    gd = Grid(2048, -np.pi / 2 + 0.2, np.pi / 2 - 0.2, "dirichlet")
    phis_d = compact_test_functions(gd, [3, 5], rng=6, n_functions=4, margin=0.35)
    lin = fields.linear_ring_field(a2=0.2, e=1.0, k=1)
    plus_p, _ = operators.decouple_pdfv(p, lin, 1, 1.0, fields.cosine_velocity(), gd)

    class Pdfv:
        def apply(self, gf):
            return plus_p.apply(gf)

        def apply_adjoint(self, gf):
            from torusdirac.grids import diff1, diff2
            v = gf.values
            from torusdirac.grids import GridFunction
            return GridFunction(gd, -diff2(v, gd) - diff1(np.conj(plus_p.sigma) * v, gd)
                                + np.conj(plus_p.rho) * v)

    eta2b = pseudoherm.eta2_case2(p, 0.0, gd)
    h_p = Pdfv()
    r2 = pseudoherm.intertwining_residual(eta2b, h_p, pseudoherm.AdjointOf(h_p), phis_d)

    results = [
        # expected red: a first-order intertwiner to adjoint form requires the
        # drift to vanish and the potentials to be a derivative-shift pair,
        # which the tabulated coefficients do not satisfy
        report(5, "constant-velocity intertwiner residual < 1e-6 @2048",
               r1 < 1e-6, f"residual {r1:.2e}"),
        report(5, "position-dependent intertwiner residual < 1e-6 @2048",
               r2 < 1e-6, f"residual {r2:.2e}"),
    ]
    finish(results)


def test_criterion_06_rosen_morse_equivalence():
    p = geometry.TorusParams(a=0.5, c=2.0)
    g = Grid(2000, -np.pi / 2 + 0.1, np.pi / 2 - 0.1, "dirichlet")
    f = fields.linear_ring_field(a2=0.2, e=1.0, k=1)
    ve = pseudoherm.veff_case2(p, f, 1, 1.0, fields.cosine_velocity(), g)
    gap = float(np.max(np.abs(ve.v - pseudoherm.rosen_morse_form(p, 0.2, 1.0, g.points))))
    results = [report(6, "effective potential equals the closed form",
                      gap < 1e-10, f"max gap {gap:.2e}")]
    finish(results)


def test_criterion_07_case2_spectrum():
    alpha, e, a = 1.0, 1.0, 0.5
    p = geometry.TorusParams(a=a, c=2.0)
    vf = fields.cosine_velocity()
    delta = 1e-3
    g = Grid(8000, -np.pi / 2 + delta, np.pi / 2 - delta, "dirichlet")
    worst_fd = 0.0
    for n in range(4):
        c1n = alpha ** 2 * (n + 0.5) ** 2 - 0.5
        sol = analytic.case2_quantize(n, alpha, c1n)
        gauge_n = fields.linear_ring_field(a2=alpha * (n + 0.5) / (e * a), e=e, k=1)
        ve = pseudoherm.veff_case2(p, gauge_n, 1, e, vf, g)
        m = numerics.discretize_schrodinger(np.real(ve.v), g)
        fd = numerics.eig_sym_tridiag(m, n + 1, with_vectors=False).eigenvalues[n]
        worst_fd = max(worst_fd, abs(fd - sol.epsilon_n ** 2) / max(1.0, sol.epsilon_n ** 2))
    worst_ode = max(analytic.case2_ode_residual(n, 1.0, 0.0) for n in range(3))
    results = [
        # expected red: the wall coupling sits exactly at the critical value,
        # so truncating the domain shifts eigenvalues by O(1/log(1/delta));
        # the convergent partner-potential oracle in `verify` certifies the
        # same levels to ~1e-7
        report(7, "quantized levels vs truncated-domain spectrum @8000",
               worst_fd < 1e-3, f"worst rel {worst_fd:.2e}"),
        report(7, "wavefunction equation residual < 1e-6 (n=0..2)",
               worst_ode < 1e-6, f"worst {worst_ode:.2e}"),
    ]
    finish(results)


def test_criterion_08_case1_spectrum():
    a, e, alpha = 0.5, 1.0, 1.0
    c = 0.5 * a ** 2 / np.sqrt(1 - a)
    p = geometry.TorusParams(a=a, c=c)
    c2_rot = 1j * np.sqrt(1 - a) / (a ** 4 * e)
    mf = pseudoherm.mathieu_form(p, e, c2_rot)
    mf0 = pseudoherm.MathieuParams(A_m=mf.A_m, B_m=mf.B_m, C_m=0.0, D_m=mf.D_m)
    sp = analytic.morse_shooting_problem(mf0, alpha, t_min=-4.0, t_max=50.0, n=16001)
    worst_tab = 0.0
    shot = {}
    for n in range(3):
        lam, rho, exists = analytic.morse_energy_exact(n, mf0)
        if not exists:
            shot[n] = None
            continue
        en, _ = numerics.shoot_bound_state(sp, n)
        shot[n] = en
        tab = analytic.case1_energy(n, alpha, mf0)[0].real
        worst_tab = max(worst_tab, abs(tab - en) / abs(en))
    chain = analytic.case1_transform_chain(mf0, alpha)
    n_exist = [n for n, v in shot.items() if v is not None]
    worst_derived = max(
        abs(shot[n] - analytic.morse_energy_exact(n, mf0)[0].real)
        / abs(shot[n]) for n in n_exist
    )
    results = [
        # expected red: the tabulated energy display is alpha-dependent while
        # the transformed equation's spectrum is not; the derived closed form
        # (reported below) is the one shooting confirms
        report(8, "tabulated energies vs shooting rel < 1e-4",
               worst_tab < 1e-4 and len(n_exist) == 3,
               f"worst rel {worst_tab:.2e}; bound levels found: {n_exist}"),
        report(8, "derived closed form vs shooting rel < 1e-4",
               worst_derived < 1e-4, f"worst rel {worst_derived:.2e}"),
        report(8, "truncation-error report emitted", np.isfinite(chain.truncation_error),
               f"expansion gap {chain.truncation_error:.3e} (reported, no threshold)"),
    ]
    finish(results)


def test_criterion_09_special_functions():
    rng = np.random.default_rng(3)
    worst = 0.0
    for n in range(21):
        al = complex(rng.uniform(-0.5, 2.0), 0.3 * rng.uniform(-1, 1))
        xx = complex(rng.uniform(0.0, 1.5), 0.3 * rng.uniform(-1, 1))
        d = analytic.laguerre_gen(n, al, xx)
        r = analytic.laguerre_recurrence(n, al, xx)
        worst = max(worst, abs(d - r) / max(1.0, abs(r)))
        b = rng.uniform(0.5, 3)
        cc = rng.uniform(0.5, 3)
        rad, ang = rng.uniform(0, 0.9), rng.uniform(0, 2 * np.pi)
        ss = rad * complex(np.cos(ang), np.sin(ang))
        total, term = 1.0 + 0j, 1.0 + 0j
        for m in range(n):
            term *= (-n + m) * (b + m) / ((cc + m) * (m + 1)) * ss
            total += term
        worst = max(worst, abs(analytic.gauss_2f1(-n, b, cc, ss) - total)
                    / max(1.0, abs(total)))
    results = [report(9, "terminating 2F1 and Laguerre vs brute-force oracles",
                      worst < 1e-13, f"worst rel {worst:.2e}")]
    finish(results)


def test_criterion_10_solver_self_tests():
    g = Grid(4000, 0.0, np.pi, "dirichlet")
    w = numerics.eig_sym_tridiag(
        numerics.discretize_schrodinger(lambda x: np.zeros_like(x), g), 4,
        with_vectors=False).eigenvalues
    box = max(abs(w[i] - (i + 1) ** 2) / (i + 1) ** 2 for i in range(4))
    g2 = Grid(6000, -10.0, 10.0, "dirichlet")
    w2 = numerics.eig_sym_tridiag(
        numerics.discretize_schrodinger(lambda x: x ** 2, g2), 3,
        with_vectors=False).eigenvalues
    ho = max(abs(w2[i] - (2 * i + 1)) / (2 * i + 1) for i in range(3))
    errs = []
    for n in (101, 201, 401):
        t = np.linspace(0.0, np.pi, n)
        errs.append(abs(numerics.integrate_simpson(np.sin(t), t[1] - t[0]) - 2.0))
    slope = float(np.mean([np.log2(errs[i] / errs[i + 1]) for i in range(2)]))
    results = [
        report(10, "particle-in-a-box rel 1e-5", box < 1e-5, f"worst {box:.2e}"),
        report(10, "harmonic oscillator rel 1e-5", ho < 1e-5, f"worst {ho:.2e}"),
        report(10, "simpson slope in [3.8, 4.2]", 3.8 < slope < 4.2, f"slope {slope:.2f}"),
    ]
    finish(results)


def test_criterion_11_cli_determinism(tmp_path):
    base = [sys.executable, "-m", "torusdirac.cli"]

    def run(*args):
        return subprocess.run(base + list(args), capture_output=True, text=True)

    r = run("--out", str(tmp_path / "v"), "--no-timestamp", "verify")
    results = [report(11, "verify exits 0 on the default config",
                      r.returncode == 0, f"exit {r.returncode}")]
    rn = run("--out", str(tmp_path / "vn"), "--no-timestamp", "--negative-control",
             "verify")
    results.append(report(11, "negative control exits nonzero",
                          rn.returncode != 0, f"exit {rn.returncode}"))
    d1, d2 = tmp_path / "d1", tmp_path / "d2"
    for d in (d1, d2):
        d.mkdir()
        assert run("--out", str(d), "--no-timestamp", "analytic").returncode == 0
    identical = all(
        (d1 / name).read_bytes() == (d2 / name).read_bytes()
        for name in ("case1_spectrum.csv", "case2_spectrum.csv",
                     "case2_wavefunctions.csv")
    )
    results.append(report(11, "identical configs give byte-identical CSVs",
                          identical, "3 tables compared"))
    finish(results)
