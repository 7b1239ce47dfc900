//! End-to-end acceptance checks. Runs as a plain program (no libtest harness)
//! so that every criterion prints its own PASS/FAIL line; exits nonzero if
//! any criterion fails.

use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use divspline::cases::{
    error_norms, max_divergence, run_cavity, run_convergence_study, run_pressure_robustness, run_reynolds_robustness,
    run_taylor_green, CavityCase, ManufacturedCase, Stabilization,
};
use divspline::forms::{assemble_skeleton, assemble_viscous_parts, facet_skeleton_energy, StabParams};
use divspline::mesh::{facet_quadrature, gauss_rule, Axis};
use divspline::solver::{newton_steady, NewtonConfig, TimeConfig};
use divspline::space::facet_normal_derivative_jump;
use divspline::{DivConformingPair, KnotVector, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MESHES: [usize; 4] = [4, 8, 16, 32];

/// Reference errors on h = 1/4, 1/8, 1/16, 1/32 at Re = 10 with the default gamma per degree.
const REF_L2: [[f64; 4]; 3] = [
    [4.110e-3, 1.048e-3, 2.629e-4, 6.579e-5],
    [3.873e-4, 4.444e-5, 5.396e-6, 6.691e-7],
    [3.281e-5, 2.354e-6, 1.586e-7, 1.027e-8],
];
const REF_H1: [[f64; 4]; 3] = [
    [5.546e-2, 2.788e-2, 1.395e-2, 6.978e-3],
    [9.237e-3, 2.244e-3, 5.556e-4, 1.385e-4],
    [9.096e-4, 1.228e-4, 1.619e-5, 2.085e-6],
];

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: String) -> Self {
        Self { pass, detail }
    }
}

/// A converged velocity kept for the mass-conservation sweep.
struct Converged {
    label: String,
    pair: DivConformingPair,
    u: Vec<f64>,
}

fn l2_norm(pair: &DivConformingPair, u: &[f64]) -> f64 {
    error_norms(pair, u, |_| [0.0, 0.0], |_| [[0.0; 2]; 2]).l2
}

fn factor(a: f64, b: f64) -> f64 {
    (a / b).max(b / a)
}

fn random_vec(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn convergence(store: &mut Vec<Converged>) -> Verdict {
    let cfg = NewtonConfig::default();
    let mut pass = true;
    let mut notes = Vec::new();
    for kp in 1..=3 {
        let study = match run_convergence_study(kp, &Stabilization::default(), &MESHES, 10.0, &cfg) {
            Ok(s) => s,
            Err(e) => return Verdict::new(false, format!("k'={kp}: {e}")),
        };
        let mut worst: f64 = 1.0;
        for (i, row) in study.rows.iter().enumerate() {
            worst = worst.max(factor(row.l2, REF_L2[kp - 1][i])).max(factor(row.h1, REF_H1[kp - 1][i]));
        }
        let last = study.rows.last().expect("four meshes");
        let (l2o, h1o) = (last.l2_order.unwrap_or(0.0), last.h1_order.unwrap_or(0.0));
        let ok = worst < 1.5 && l2o >= kp as f64 + 0.9 && h1o >= kp as f64 - 0.1;
        pass &= ok;
        notes.push(format!("k'={kp} worst factor {worst:.3}, orders L2 {l2o:.3} H1 {h1o:.3}"));
        store.push(Converged {
            label: format!("manufactured k'={kp} h=1/32"),
            pair: study.last_pair,
            u: study.last_state.u,
        });
    }
    Verdict::new(pass, notes.join("; "))
}

fn pressure_robustness(store: &mut Vec<Converged>) -> Verdict {
    let r = match run_pressure_robustness(1, 16, 10.0, &Stabilization::default(), &NewtonConfig::default()) {
        Ok(r) => r,
        Err(e) => return Verdict::new(false, e.to_string()),
    };
    let (dl2, rel) = (r.l2_abs_diff(), r.coefficient_rel_diff());
    let pair = DivConformingPair::uniform(16, 1, (0.0, 1.0)).expect("valid mesh");
    store.push(Converged {
        label: "manufactured f".into(),
        pair: pair.clone(),
        u: r.base_u,
    });
    store.push(Converged {
        label: "manufactured f + grad phi".into(),
        pair,
        u: r.perturbed_u,
    });
    Verdict::new(
        dl2 < 1e-9 && rel < 1e-8,
        format!("L2 {:.12e} vs {:.12e}, |dL2| {dl2:.2e}, coefficient change {rel:.2e}", r.base.l2, r.perturbed.l2),
    )
}

fn reynolds_robustness() -> Verdict {
    let mut pass = true;
    let mut notes = Vec::new();
    for kp in 1..=3 {
        match run_reynolds_robustness(kp, 16, &[1.0, 10.0, 100.0, 1000.0], &Stabilization::default(), &NewtonConfig::default()) {
            Ok(rows) => {
                let max = rows.iter().map(|r| r.l2).fold(0.0, f64::max);
                let min = rows.iter().map(|r| r.l2).fold(f64::INFINITY, f64::min);
                pass &= max / min <= 2.0;
                notes.push(format!("k'={kp} max/min {:.4}", max / min));
            }
            Err(e) => return Verdict::new(false, format!("k'={kp}: {e}")),
        }
    }
    Verdict::new(pass, notes.join("; "))
}

fn mass_conservation(store: &mut Vec<Converged>) -> Verdict {
    let cfg = NewtonConfig::default();
    for kp in 1..=3 {
        let problem = ManufacturedCase::new(1000.0).problem(8, kp, &Stabilization::default()).expect("valid case");
        match newton_steady(&problem, &StateVector::zeros(&problem.pair), &cfg) {
            Ok(out) => store.push(Converged {
                label: format!("manufactured Re=1000 k'={kp}"),
                pair: problem.pair.clone(),
                u: out.state.u,
            }),
            Err(e) => return Verdict::new(false, e.to_string()),
        }
        let problem = CavityCase { reynolds: 100.0 }.problem(8, kp, &Stabilization::default()).expect("valid case");
        match newton_steady(&problem, &StateVector::zeros(&problem.pair), &cfg) {
            Ok(out) => store.push(Converged {
                label: format!("cavity Re=100 k'={kp}"),
                pair: problem.pair.clone(),
                u: out.state.u,
            }),
            Err(e) => return Verdict::new(false, e.to_string()),
        }
    }
    let tg = match run_taylor_green(1, 8, 100.0, &Stabilization::default(), &TimeConfig::new(0.05, 0.5, 0.5)) {
        Ok(r) => r,
        Err(e) => return Verdict::new(false, e.to_string()),
    };
    for s in &tg.history {
        store.push(Converged {
            label: format!("Taylor-Green t={:.2}", s.time),
            pair: tg.problem.pair.clone(),
            u: s.u.clone(),
        });
    }
    let mut worst = (0.0, String::new());
    for c in store.iter() {
        let ratio = max_divergence(&c.pair, &c.u) / l2_norm(&c.pair, &c.u);
        if ratio >= worst.0 {
            worst = (ratio, c.label.clone());
        }
    }
    Verdict::new(
        worst.0 < 1e-10,
        format!("{} states, worst max|div u|/|u| = {:.2e} ({})", store.len(), worst.0, worst.1),
    )
}

/// Random stream-function velocity with `u . n = 0` on the boundary.
fn random_solenoidal(pair: &DivConformingPair, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let (nx, ny) = pair.potential_dims();
    let mut psi = random_vec(nx * ny, rng);
    for iy in 0..ny {
        for ix in 0..nx {
            if ix == 0 || iy == 0 || ix == nx - 1 || iy == ny - 1 {
                psi[ix + nx * iy] = 0.0;
            }
        }
    }
    pair.curl_of_potential(&psi)
}

fn coercivity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = f64::INFINITY;
    for kp in 1..=3 {
        let pair = DivConformingPair::uniform(8, kp, (0.0, 1.0)).expect("valid mesh");
        for nu in [1.0, 1e-2, 1e-4] {
            let params = StabParams::new(kp, nu);
            let parts = assemble_viscous_parts(&pair, &params, true);
            let a = parts.total();
            let w = random_solenoidal(&pair, &mut rng);
            let j = assemble_skeleton(&pair, &w, &params);
            for _ in 0..100 {
                let mut u = random_vec(pair.num_velocity(), &mut rng);
                for &d in &pair.normal_boundary_dofs {
                    u[d] = 0.0;
                }
                let juu = j.bilinear(&u, &u);
                let triple = parts.volume.bilinear(&u, &u) + parts.penalty.bilinear(&u, &u) + juu;
                worst = worst.min((a.bilinear(&u, &u) + juu) / triple);
            }
        }
    }
    Verdict::new(worst >= 0.5, format!("min (A+J)(u,u)/|||u|||^2 = {worst:.4} over 900 samples"))
}

fn tangential_only() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst_jump: f64 = 0.0;
    let mut worst_energy: f64 = 0.0;
    let mut min_tangential = f64::INFINITY;
    for kp in 1..=3 {
        let pair = DivConformingPair::uniform(4, kp, (0.0, 1.0)).expect("valid mesh");
        let params = StabParams::new(kp, 1e-3);
        let order = pair.alpha_prime + 1;
        let rule = gauss_rule(kp + 2).expect("valid rule");
        let w = random_vec(pair.num_velocity(), &mut rng);
        for sample in 0..100 {
            let u = random_vec(pair.num_velocity(), &mut rng);
            for f in pair.mesh.interior_facets() {
                let c = f.normal_axis.index();
                for (x, _) in facet_quadrature(f, &rule) {
                    let j = facet_normal_derivative_jump(&pair, &u, f, x, order).expect("interior facet");
                    worst_jump = worst_jump.max(j[c].abs());
                }
            }
            if sample < 5 {
                // zero the tangential component everywhere: no facet sees a contribution
                let nvx = pair.num_vx();
                for f in pair.mesh.interior_facets() {
                    let mut v = u.clone();
                    let (tangential, normal) = match f.normal_axis {
                        Axis::X => (nvx..v.len(), 0..nvx),
                        Axis::Y => (0..nvx, nvx..v.len()),
                    };
                    v[tangential].iter_mut().for_each(|c| *c = 0.0);
                    worst_energy = worst_energy.max(facet_skeleton_energy(&pair, &v, &w, &params, f));
                    let mut t = u.clone();
                    t[normal].iter_mut().for_each(|c| *c = 0.0);
                    min_tangential = min_tangential.min(facet_skeleton_energy(&pair, &t, &w, &params, f));
                }
            }
        }
    }
    Verdict::new(
        worst_jump < 1e-11 && worst_energy < 1e-24 && min_tangential > 0.0,
        format!(
            "max |normal jump| {worst_jump:.2e}, max facet J with tangential part removed {worst_energy:.2e}, \
             min facet J of tangential part {min_tangential:.2e}"
        ),
    )
}

fn energy_stability() -> Verdict {
    let mut pass = true;
    let mut notes = Vec::new();
    for kp in 1..=2 {
        let time = TimeConfig::new(1e-2, 2.0, 0.5);
        let res = match run_taylor_green(kp, 32, 100.0, &Stabilization::default(), &time) {
            Ok(r) => r,
            Err(e) => return Verdict::new(false, format!("k'={kp}: {e}")),
        };
        let d = &res.diagnostics;
        let e0 = d[0].kinetic_energy;
        let max_increase = d
            .windows(2)
            .map(|w| w[1].kinetic_energy - w[0].kinetic_energy)
            .fold(f64::NEG_INFINITY, f64::max);
        let peak = d.iter().map(|r| r.eps_total).fold(0.0, f64::max);
        let imbalance = d
            .iter()
            .map(|r| (r.eps_total - r.eps_resolved - r.eps_model).abs())
            .fold(0.0, f64::max);
        let ok = max_increase <= 1e-12 * e0 && imbalance < 0.02 * peak;
        pass &= ok;
        notes.push(format!(
            "k'={kp} max step change in E_k {:.2e} E0, balance error {:.2e} of peak eps",
            max_increase / e0,
            imbalance / peak
        ));
    }
    Verdict::new(pass, notes.join("; "))
}

fn jacobian_and_derivatives() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst_jac: f64 = 0.0;
    for kp in 1..=3 {
        for (re, n) in [(10.0, 4), (1000.0, 6)] {
            let problem = CavityCase { reynolds: re }.problem(n, kp, &Stabilization::default()).expect("valid case");
            let nv = problem.pair.num_velocity();
            let mut u = random_vec(nv, &mut rng);
            for &d in problem.fixed_dofs() {
                u[d] = 0.0;
            }
            let p = random_vec(problem.pair.num_pressure(), &mut rng);
            let jac = problem.jacobian(&u);
            let (r0, _) = problem.residual_frozen(&u, &p, &u);
            for _ in 0..5 {
                let v = random_vec(nv, &mut rng);
                let eps = 1e-7;
                let up: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + eps * b).collect();
                let (r1, _) = problem.residual_frozen(&up, &p, &u);
                let jv = jac.mul_vec(&v);
                let num: f64 = (0..nv).map(|i| ((r1[i] - r0[i]) / eps - jv[i]).powi(2)).sum::<f64>().sqrt();
                let den: f64 = jv.iter().map(|x| x * x).sum::<f64>().sqrt();
                worst_jac = worst_jac.max(num / den);
            }
        }
    }

    let mut worst_spline: f64 = 0.0;
    for degree in 1..=4 {
        // one repeated interior knot where the degree allows it
        let mut knots = vec![0.0; degree + 1];
        knots.extend([0.21, 0.5]);
        if degree >= 2 {
            knots.push(0.5);
        }
        knots.push(0.77);
        knots.extend(vec![1.0; degree + 1]);
        let kv = KnotVector::new(degree, knots).expect("valid knots");
        let h = 1e-5;
        for _ in 0..100 {
            let x: f64 = rng.gen_range(0.0..1.0);
            let (a, b) = (x - h, x + h);
            if a < 0.0 || b > 1.0 || kv.find_element(a).ok() != kv.find_element(b).ok() {
                continue;
            }
            let ev = kv.eval_nonzero_basis(x, 3).expect("in range");
            let lo = kv.eval_nonzero_basis(a, 3).expect("in range");
            let hi = kv.eval_nonzero_basis(b, 3).expect("in range");
            for d in 1..=3.min(degree) {
                let scale = ev.values[d].iter().fold(1.0f64, |m, v| m.max(v.abs()));
                for j in 0..=degree {
                    let fd = (hi.get(d - 1, j) - lo.get(d - 1, j)) / (2.0 * h);
                    worst_spline = worst_spline.max((fd - ev.get(d, j)).abs() / scale);
                }
            }
        }
    }
    Verdict::new(
        worst_jac < 1e-5 && worst_spline < 1e-6,
        format!("Jacobian relative mismatch {worst_jac:.2e}, spline derivative relative mismatch {worst_spline:.2e}"),
    )
}

fn stabilization_effect() -> Verdict {
    let cfg = NewtonConfig::default();
    let stab = match run_cavity(1, 16, 7500.0, &Stabilization::default(), &cfg) {
        Ok(r) => r,
        Err(e) => return Verdict::new(false, format!("stabilized run: {e}")),
    };
    let stable_ok = stab.outcome.residual < 1e-9 && stab.skeleton_energy > 0.0;
    let mut detail = format!(
        "stabilized: residual {:.2e} after {} iterations, J(u,u) {:.3e}, |grad_s u| {:.4}",
        stab.outcome.residual, stab.outcome.iterations, stab.skeleton_energy, stab.strain_norm
    );
    let galerkin_ok = match run_cavity(1, 16, 7500.0, &Stabilization::unstabilized(), &cfg) {
        Ok(g) => {
            detail.push_str(&format!("; gamma=0: |grad_s u| {:.4}", g.strain_norm));
            g.strain_norm > stab.strain_norm
        }
        Err(e) => {
            detail.push_str(&format!("; gamma=0 did not converge ({e})"));
            true
        }
    };
    Verdict::new(stable_ok && galerkin_ok, detail)
}

fn main() {
    let mut store = Vec::new();
    type Criterion<'a> = Box<dyn FnOnce(&mut Vec<Converged>) -> Verdict + 'a>;
    let criteria: Vec<(&str, Criterion)> = vec![
        ("convergence", Box::new(convergence)),
        ("pressure robustness", Box::new(pressure_robustness)),
        ("Reynolds robustness", Box::new(|_| reynolds_robustness())),
        ("mass conservation", Box::new(mass_conservation)),
        ("coercivity", Box::new(|_| coercivity())),
        ("tangential-only action", Box::new(|_| tangential_only())),
        ("energy stability", Box::new(|_| energy_stability())),
        ("Jacobian and derivative oracles", Box::new(|_| jacobian_and_derivatives())),
        ("stabilization effect", Box::new(|_| stabilization_effect())),
    ];
    let mut failed = 0;
    let mut out = std::io::stdout();
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let verdict = panic::catch_unwind(AssertUnwindSafe(|| run(&mut store)))
            .unwrap_or_else(|_| Verdict::new(false, "panicked".into()));
        let tag = if verdict.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!verdict.pass);
        writeln!(
            out,
            "[{tag}] {}. {name}: {} ({:.1} s)",
            i + 1,
            verdict.detail,
            start.elapsed().as_secs_f64()
        )
        .expect("stdout");
        out.flush().expect("stdout");
    }
    if failed > 0 {
        writeln!(out, "acceptance: {failed} of 9 criteria failed").expect("stdout");
        std::process::exit(1);
    }
    writeln!(out, "acceptance: all 9 criteria passed").expect("stdout");
}
