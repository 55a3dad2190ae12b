//! Batch property suites behind `charvar verify`.

use std::f64::consts::PI;

use clap::ValueEnum;
use serde_json::{json, Value};

use charvar::groups::{
    conjugate_tuple, quaternion_matrix, random_sl, random_traceless_hermitian, sample_tuple,
    seeded_rng, Quaternion, SeededRng,
};
use charvar::invariants::{
    fricke_check, pq, relation_residual, rst, su2_rank2_coords, su2_rank3_coords, su3_minors,
    su3_traces, trace_word, transpose_tuple, u_coords, SU2Rank2Coords, Word,
};
use charvar::kempfness::{kn_flow, kn_functional, moment_residual, DEFAULT_MAX_ITER};
use charvar::linalg::{c, exp_herm, haar_su};
use charvar::poincare::{baird_poly, surface_counterexample_polys, IntPolynomial};
use charvar::reconstruct::{su2_rank2_lift, su2_rank3_lift, unitary_conjugacy};
use charvar::retraction::{phi, retract_tuple};
use charvar::semialgebraic::{
    alcove_grid, in_su2_rank2_image, sigma, su3_delta, su3_quartic, tetrahedron_boundary,
};
use charvar::{CMat, GroupDescriptor, RepTuple, C64};
use rand::Rng;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Retraction,
    Fricke,
    SigmaBall,
    TwoSheet,
    Su3Membership,
    Su3Example,
    Transpose,
    Minors,
    KempfNess,
    Baird,
    Figures,
    All,
}

const SUITES: [Suite; 11] = [
    Suite::Retraction,
    Suite::Fricke,
    Suite::SigmaBall,
    Suite::TwoSheet,
    Suite::Su3Membership,
    Suite::Su3Example,
    Suite::Transpose,
    Suite::Minors,
    Suite::KempfNess,
    Suite::Baird,
    Suite::Figures,
];

pub struct Report {
    pub suite: &'static str,
    pub pass: bool,
    /// Suite-specific measurements.
    pub data: Value,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({ "suite": self.suite, "pass": self.pass, "data": self.data })
    }
}

pub fn run(suite: Suite, samples: Option<u64>, seed: u64, tol: f64) -> Vec<Report> {
    let list: Vec<Suite> = if suite == Suite::All {
        SUITES.to_vec()
    } else {
        vec![suite]
    };
    list.into_iter()
        .map(|s| {
            let mut rng = seeded_rng(seed);
            let n = |default: usize| samples.map_or(default, |v| v as usize);
            match s {
                Suite::Retraction => retraction(n(1000), &mut rng),
                Suite::Fricke => fricke(n(10_000), &mut rng),
                Suite::SigmaBall => sigma_ball(n(100_000), &mut rng),
                Suite::TwoSheet => two_sheet(n(10_000), &mut rng, tol),
                Suite::Su3Membership => su3_membership(n(100_000), &mut rng, tol),
                Suite::Su3Example => su3_example(),
                Suite::Transpose => transpose(n(10_000), &mut rng),
                Suite::Minors => minors(n(10_000), &mut rng),
                Suite::KempfNess => kempf_ness(n(100), &mut rng),
                Suite::Baird => baird(),
                Suite::Figures => figures(),
                Suite::All => unreachable!("expanded above"),
            }
        })
        .collect()
}

fn retraction(samples: usize, rng: &mut SeededRng) -> Report {
    let ts = [0.0, 0.25, 0.5, 0.75, 1.0];
    let (mut validity, mut equiv, mut fixed) = (0.0f64, 0.0f64, 0.0f64);
    for n in [2, 3] {
        for _ in 0..samples {
            let rho = sample_tuple(GroupDescriptor::sl(n), 2, rng);
            let one = retract_tuple(&rho, 1.0).expect("SL input");
            for m in one.matrices() {
                validity = validity
                    .max(m.unitary_residual())
                    .max((m.det() - c(1.0, 0.0)).norm());
            }
            let k = haar_su(n, rng);
            let moved = conjugate_tuple(&k, &rho).expect("square sizes match");
            for t in ts {
                let a = retract_tuple(&moved, t).expect("SL input");
                let b = conjugate_tuple(&k, &retract_tuple(&rho, t).expect("SL input"))
                    .expect("square sizes match");
                for (x, y) in a.matrices().iter().zip(b.matrices()) {
                    equiv = equiv.max(x.dist(y));
                }
            }
            let su = sample_tuple(GroupDescriptor::su(n), 2, rng);
            for t in ts {
                for m in su.matrices() {
                    fixed = fixed.max(phi(m, t).expect("SU input").dist(m));
                }
            }
        }
    }
    Report {
        suite: "retraction",
        pass: validity < 1e-10 && equiv < 1e-9 && fixed < 1e-12,
        data: json!({
            "samples": samples,
            "su_residual": validity,
            "equivariance": equiv,
            "fixed_point": fixed,
        }),
    }
}

fn fricke(samples: usize, rng: &mut SeededRng) -> Report {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let rho = sample_tuple(GroupDescriptor::su(2), 2, rng);
        let (l, r) = fricke_check(&rho).expect("SU(2) pair");
        worst = worst.max((l - r).abs());
    }
    Report {
        suite: "fricke",
        pass: worst < 1e-12,
        data: json!({ "samples": samples, "max_residual": worst }),
    }
}

fn sigma_ball(samples: usize, rng: &mut SeededRng) -> Report {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..samples {
        let rho = sample_tuple(GroupDescriptor::su(2), 2, rng);
        let s = sigma(&su2_rank2_coords(&rho).expect("SU(2) pair"));
        lo = lo.min(s);
        hi = hi.max(s);
    }
    let lifts = (samples / 10).max(1);
    let (mut trips, mut err) = (0, 0.0f64);
    while trips < lifts {
        let a = SU2Rank2Coords::new(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        );
        if !in_su2_rank2_image(&a, 0.0).inside {
            continue;
        }
        trips += 1;
        let lift = su2_rank2_lift(&a, 1e-9).expect("admissible triple");
        err = err.max(su2_rank2_coords(&lift.tuples[0]).expect("SU(2) pair").max_diff(&a));
    }
    Report {
        suite: "sigma-ball",
        pass: lo >= -1e-9 && hi <= 1.0 + 1e-9 && err < 1e-10,
        data: json!({
            "samples": samples,
            "sigma_min": lo,
            "sigma_max": hi,
            "lifts": lifts,
            "lift_round_trip": err,
        }),
    }
}

fn coplanar_triple(angles: [(f64, f64); 3]) -> RepTuple {
    let ms = angles
        .iter()
        .map(|&(len, dir)| {
            let q = Quaternion::new(len.cos(), len.sin() * dir.cos(), len.sin() * dir.sin(), 0.0);
            quaternion_matrix(q)
        })
        .collect();
    RepTuple::new(GroupDescriptor::su(2), ms).expect("unit quaternions")
}

fn two_sheet(samples: usize, rng: &mut SeededRng, tol: f64) -> Report {
    let mut trip = 0.0f64;
    let (mut generic, mut separated) = (0, 0);
    for _ in 0..samples {
        let rho = sample_tuple(GroupDescriptor::su(2), 3, rng);
        let c3 = su2_rank3_coords(&rho).expect("SU(2) triple");
        let lift = su2_rank3_lift(&c3, None, tol).expect("image point");
        let best = lift
            .tuples
            .iter()
            .map(|t| su2_rank3_coords(t).expect("SU(2) triple").max_diff(&c3))
            .fold(f64::INFINITY, f64::min);
        trip = trip.max(best);
        if rst(&c3).t123 > 1e-4 {
            generic += 1;
            if lift.tuples.len() == 2
                && unitary_conjugacy(&lift.tuples[0], &lift.tuples[1], tol)
                    .expect("same shape")
                    .is_none()
            {
                separated += 1;
            }
        }
    }
    let planar = [
        [(0.7, 0.0), (1.1, 0.9), (2.0, 2.3)],
        [(0.4, 0.3), (1.9, -1.0), (0.8, 2.9)],
        [(1.3, 0.0), (0.6, 1.5), (2.5, -0.7)],
        [(2.2, 1.0), (1.0, 1.0), (0.5, 2.0)],
    ];
    let mut planar_ok = 0;
    for angles in planar {
        let c3 = su2_rank3_coords(&coplanar_triple(angles)).expect("SU(2) triple");
        let lift = su2_rank3_lift(&c3, None, tol).expect("image point");
        let conj = match lift.tuples.as_slice() {
            [_] => true,
            [a, b] => unitary_conjugacy(a, b, 1e-8).expect("same shape").is_some(),
            _ => false,
        };
        if conj {
            planar_ok += 1;
        }
    }
    Report {
        suite: "two-sheet",
        pass: trip < 1e-9 && separated == generic && planar_ok == planar.len(),
        data: json!({
            "samples": samples,
            "round_trip": trip,
            "generic": generic,
            "generic_distinct": separated,
            "planar_conjugate": planar_ok,
            "planar": planar.len(),
        }),
    }
}

fn su3_membership(samples: usize, rng: &mut SeededRng, tol: f64) -> Report {
    let h = 1.5 * 3f64.sqrt();
    let (mut quartic, mut delta) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut outside = 0;
    for _ in 0..samples {
        let rho = sample_tuple(GroupDescriptor::su(3), 2, rng);
        let t = su3_traces(&rho).expect("SU(3) pair");
        quartic = quartic.max(su3_quartic(t.t(1))).max(su3_quartic(t.t(2)));
        let Ok(p) = pq(&t).realify() else {
            outside += 1;
            continue;
        };
        delta = delta.max(su3_delta(p.p.re, p.q.re));
        let Ok(u) = u_coords(&t).realify() else {
            outside += 1;
            continue;
        };
        let boxed = u
            .pairs
            .iter()
            .all(|(a, b)| (-1.5 - tol..=3.0 + tol).contains(&a.re) && b.re.abs() <= h + tol)
            && u.u5.re.abs() <= h + tol;
        if !boxed {
            outside += 1;
        }
    }
    Report {
        suite: "su3-membership",
        pass: quartic <= tol && delta <= tol && outside == 0,
        data: json!({
            "samples": samples,
            "max_quartic": quartic,
            "max_delta": delta,
            "outside_box": outside,
        }),
    }
}

fn su3_example() -> Report {
    let omega = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let x1 = CMat::from_real_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]])
        .expect("square rows");
    let x2 = CMat::from_diag(&[omega.conj(), omega, c(1.0, 0.0)]);
    let rho = RepTuple::new(GroupDescriptor::su(3), vec![x1, x2]).expect("SU(3) pair");
    let t = su3_traces(&rho).expect("SU(3) pair");
    let u = u_coords(&t).realify().expect("unitary input");
    let p = pq(&t).realify().expect("unitary input");
    let eight = u
        .pairs
        .iter()
        .map(|(a, b)| a.norm().max(b.norm()))
        .fold(0.0, f64::max);
    let target = 1.5 * 3f64.sqrt();
    let disc = p.discriminant().re;
    let delta = su3_delta(p.p.re, p.q.re);
    Report {
        suite: "su3-example",
        pass: eight < 1e-12
            && (u.u5.re - target).abs() < 1e-12
            && (disc + 27.0).abs() < 1e-12
            && delta.abs() < 1e-12,
        data: json!({
            "max_first_eight": eight,
            "u5": u.u5.re,
            "u5_expected": target,
            "discriminant": disc,
            "delta": delta,
        }),
    }
}

fn transpose(samples: usize, rng: &mut SeededRng) -> Report {
    let (mut fixed, mut flipped) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let rho = sample_tuple(GroupDescriptor::su(3), 2, rng);
        let u = u_coords(&su3_traces(&rho).expect("SU(3) pair"));
        let v = u_coords(&su3_traces(&transpose_tuple(&rho)).expect("SU(3) pair"));
        for (a, b) in u.pairs.iter().zip(&v.pairs) {
            fixed = fixed.max((a.0 - b.0).norm()).max((a.1 - b.1).norm());
        }
        flipped = flipped.max((u.u5 + v.u5).norm());
    }
    Report {
        suite: "transpose",
        pass: fixed < 1e-10 && flipped < 1e-10,
        data: json!({ "samples": samples, "first_eight_moved": fixed, "u5_sum": flipped }),
    }
}

/// Residual relative to the sixth power of the largest entry, since the
/// relation has degree 6.
fn minors(samples: usize, rng: &mut SeededRng) -> Report {
    let (mut abs, mut rel) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let x = random_sl(3, rng);
        let r = relation_residual(&su3_minors(&x).expect("3x3")).norm();
        abs = abs.max(r);
        rel = rel.max(r / x.max_abs().max(1.0).powi(6));
    }
    let at_identity = relation_residual(&su3_minors(&CMat::identity(3)).expect("3x3")).norm();
    Report {
        suite: "minors",
        pass: rel < 1e-9 && at_identity == 0.0,
        data: json!({
            "samples": samples,
            "relative_residual": rel,
            "absolute_residual": abs,
            "at_identity": at_identity,
        }),
    }
}

fn kempf_ness(samples: usize, rng: &mut SeededRng) -> Report {
    let mut moment = 0.0f64;
    for i in 0..samples * 100 {
        let rho = sample_tuple(GroupDescriptor::su(2 + i % 2), 1 + i % 3, rng);
        moment = moment.max(moment_residual(&rho).expect("SU input").norm);
    }
    let h = 1e-5;
    let mut grad = 0.0f64;
    for _ in 0..samples {
        let rho = sample_tuple(GroupDescriptor::sl(3), 2, rng);
        let dir = random_traceless_hermitian(3, rng);
        let m = moment_residual(&rho).expect("SL input");
        let exact = 2.0 * (&dir * &m.m).trace().re;
        let at = |s: f64| {
            let g = exp_herm(&dir, s).expect("Hermitian direction");
            kn_functional(&conjugate_tuple(&g, &rho).expect("square sizes match"))
                .expect("SL input")
        };
        let fd = (at(h) - at(-h)) / (2.0 * h);
        grad = grad.max((fd - exact).abs() / exact.abs().max(1.0));
    }
    let words = Word::positive_necklaces(2, 3);
    let (mut p_err, mut drift, mut converged) = (0.0f64, 0.0f64, 0);
    for i in 0..samples {
        let n = 2 + i % 2;
        let ks = sample_tuple(GroupDescriptor::su(n), 2, rng);
        let g = random_sl(n, rng);
        let rho = conjugate_tuple(&g, &ks).expect("square sizes match");
        let out = kn_flow(&rho, DEFAULT_MAX_ITER, 1e-10).expect("SL input");
        if out.trace.converged {
            converged += 1;
        }
        p_err = p_err.max((out.trace.last().p - (2 * n) as f64).abs());
        for w in &words {
            let a = trace_word(&rho, w).expect("word in range");
            let b = trace_word(&out.tuple, w).expect("word in range");
            drift = drift.max((a - b).norm());
        }
    }
    Report {
        suite: "kempf-ness",
        pass: moment < 1e-12 && grad < 1e-3 && converged == samples && p_err < 1e-6 && drift < 1e-8,
        data: json!({
            "samples": samples,
            "moment_on_unitary": moment,
            "gradient_rel_error": grad,
            "flows_converged": converged,
            "functional_error": p_err,
            "trace_drift": drift,
        }),
    }
}

fn baird() -> Report {
    let mut polys = Vec::new();
    let mut ok = true;
    for r in 1..=8 {
        match baird_poly(r) {
            Ok(p) => polys.push(json!({ "r": r, "polynomial": p.to_string() })),
            Err(e) => {
                ok = false;
                polys.push(json!({ "r": r, "error": e.to_string() }));
            }
        }
    }
    let low_ok = baird_poly(3).ok() == Some(IntPolynomial::from_i64(&[1, 0, 0, 0, 0, 0, 1]));
    let (n, m, differ) = surface_counterexample_polys();
    Report {
        suite: "baird",
        pass: ok && low_ok && differ,
        data: json!({
            "polynomials": polys,
            "surface": [n.to_string(), m.to_string()],
        }),
    }
}

fn figures() -> Report {
    let grid = alcove_grid(64).expect("resolution in range");
    let h = 1.5 * 3f64.sqrt();
    let corners = [(3.0, 0.0), (-1.5, h), (-1.5, -h)];
    let corner_hits = corners
        .iter()
        .filter(|&&(x, y)| {
            grid.iter()
                .any(|r| (r[0] - x).abs() < 1e-12 && (r[1] - y).abs() < 1e-12 && r[2].abs() < 1e-9)
        })
        .count();
    let surface = tetrahedron_boundary(64).expect("resolution in range");
    let vertices = [[1.0, 1.0, 1.0], [-1.0, -1.0, 1.0], [-1.0, 1.0, -1.0], [1.0, -1.0, -1.0]];
    let vertex_hits = vertices
        .iter()
        .filter(|v| surface.iter().any(|r| r[0] == v[0] && r[1] == v[1] && r[2] == v[2]))
        .count();
    Report {
        suite: "figures",
        pass: corner_hits == 3 && vertex_hits == 4,
        data: json!({ "alcove_corners": corner_hits, "tetrahedron_vertices": vertex_hits }),
    }
}
