//! End-to-end acceptance checks. Each criterion prints one `PASS`/`FAIL`
//! line straight to stdout, so the lines show up even when the harness
//! captures test output.

use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use charvar::groups::{
    conjugate_tuple, quaternion_matrix, random_sl, random_traceless_hermitian, sample_tuple,
    seeded_rng, Quaternion,
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

const TS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(start: Instant, limit: Duration) -> (bool, String) {
    let t = start.elapsed();
    (t <= limit, format!("{:.2}s of {}s", t.as_secs_f64(), limit.as_secs()))
}

fn retraction() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded_rng(101);
    let (mut validity, mut equiv, mut fixed) = (0.0f64, 0.0f64, 0.0f64);
    for n in [2, 3] {
        for _ in 0..1000 {
            let rho = sample_tuple(GroupDescriptor::sl(n), 2, &mut rng);
            let one = retract_tuple(&rho, 1.0).unwrap();
            for m in one.matrices() {
                validity = validity
                    .max(m.unitary_residual())
                    .max((m.det() - c(1.0, 0.0)).norm());
            }
            let k = haar_su(n, &mut rng);
            let moved = conjugate_tuple(&k, &rho).unwrap();
            for t in TS {
                let a = retract_tuple(&moved, t).unwrap();
                let b = conjugate_tuple(&k, &retract_tuple(&rho, t).unwrap()).unwrap();
                for (x, y) in a.matrices().iter().zip(b.matrices()) {
                    equiv = equiv.max(x.dist(y));
                }
            }
            let su = sample_tuple(GroupDescriptor::su(n), 2, &mut rng);
            for t in TS {
                for m in su.matrices() {
                    fixed = fixed.max(phi(m, t).unwrap().dist(m));
                }
            }
        }
    }
    let (fast, time) = within(start, Duration::from_secs(10));
    outcome(
        validity < 1e-10 && equiv < 1e-9 && fixed < 1e-12 && fast,
        format!("SU residual {validity:.1e}, equivariance {equiv:.1e}, fixed {fixed:.1e}, {time}"),
    )
}

fn fricke() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded_rng(102);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let rho = sample_tuple(GroupDescriptor::su(2), 2, &mut rng);
        let (l, r) = fricke_check(&rho).unwrap();
        worst = worst.max((l - r).abs());
    }
    let (fast, time) = within(start, Duration::from_secs(5));
    outcome(worst < 1e-12 && fast, format!("max |lhs - rhs| {worst:.1e}, {time}"))
}

fn sigma_ball() -> Outcome {
    let mut rng = seeded_rng(103);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..100_000 {
        let rho = sample_tuple(GroupDescriptor::su(2), 2, &mut rng);
        let s = sigma(&su2_rank2_coords(&rho).unwrap());
        lo = lo.min(s);
        hi = hi.max(s);
    }
    let mut trips = 0;
    let mut err = 0.0f64;
    while trips < 10_000 {
        let a = SU2Rank2Coords::new(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        );
        if !in_su2_rank2_image(&a, 0.0).inside {
            continue;
        }
        trips += 1;
        let lift = su2_rank2_lift(&a, 1e-9).unwrap();
        err = err.max(su2_rank2_coords(&lift.tuples[0]).unwrap().max_diff(&a));
    }
    outcome(
        lo >= -1e-9 && hi <= 1.0 + 1e-9 && err < 1e-10,
        format!("sigma in [{lo:.3e}, {hi:.6}], lift round trip {err:.1e} over {trips} triples"),
    )
}

/// A triple whose imaginary parts lie in the `i, j` plane, so `t₁₂₃ = 0`.
fn coplanar_triple(angles: [(f64, f64); 3]) -> RepTuple {
    let ms = angles
        .iter()
        .map(|&(len, dir)| {
            let q = Quaternion::new(len.cos(), len.sin() * dir.cos(), len.sin() * dir.sin(), 0.0);
            quaternion_matrix(q)
        })
        .collect();
    RepTuple::new(GroupDescriptor::su(2), ms).unwrap()
}

fn two_sheets() -> Outcome {
    let mut rng = seeded_rng(104);
    let mut trip = 0.0f64;
    let (mut generic, mut separated) = (0, 0);
    for _ in 0..10_000 {
        let rho = sample_tuple(GroupDescriptor::su(2), 3, &mut rng);
        let c3 = su2_rank3_coords(&rho).unwrap();
        let lift = su2_rank3_lift(&c3, None, 1e-9).unwrap();
        let best = lift
            .tuples
            .iter()
            .map(|t| su2_rank3_coords(t).unwrap().max_diff(&c3))
            .fold(f64::INFINITY, f64::min);
        trip = trip.max(best);
        if rst(&c3).t123 > 1e-4 {
            generic += 1;
            if lift.tuples.len() == 2
                && unitary_conjugacy(&lift.tuples[0], &lift.tuples[1], 1e-9)
                    .unwrap()
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
        let rho = coplanar_triple(angles);
        let c3 = su2_rank3_coords(&rho).unwrap();
        let lift = su2_rank3_lift(&c3, None, 1e-9).unwrap();
        let conj = match lift.tuples.as_slice() {
            [_] => true,
            [a, b] => unitary_conjugacy(a, b, 1e-8).unwrap().is_some(),
            _ => false,
        };
        if conj && rst(&c3).t123.abs() < 1e-12 {
            planar_ok += 1;
        }
    }
    outcome(
        trip < 1e-9 && separated == generic && planar_ok == planar.len(),
        format!(
            "round trip {trip:.1e}, {separated}/{generic} generic lifts distinct, {planar_ok}/{} planar lifts conjugate",
            planar.len()
        ),
    )
}

fn su3_membership() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded_rng(105);
    let h = 1.5 * 3f64.sqrt();
    let (mut quartic, mut delta) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut outside_box = 0;
    for _ in 0..100_000 {
        let rho = sample_tuple(GroupDescriptor::su(3), 2, &mut rng);
        let t = su3_traces(&rho).unwrap();
        quartic = quartic.max(su3_quartic(t.t(1))).max(su3_quartic(t.t(2)));
        let p = pq(&t).realify().unwrap();
        delta = delta.max(su3_delta(p.p.re, p.q.re));
        let u = u_coords(&t).realify().unwrap();
        let boxed = u.pairs.iter().all(|(a, b)| {
            (-1.5 - 1e-12..=3.0 + 1e-12).contains(&a.re) && b.re.abs() <= h + 1e-12
        }) && u.u5.re.abs() <= h + 1e-12;
        if !boxed {
            outside_box += 1;
        }
    }
    let (fast, time) = within(start, Duration::from_secs(60));
    outcome(
        quartic <= 1e-9 && delta <= 1e-9 && outside_box == 0 && fast,
        format!("max quartic {quartic:.1e}, max Delta {delta:.1e}, {outside_box} outside the box, {time}"),
    )
}

fn omega() -> C64 {
    C64::from_polar(1.0, 2.0 * PI / 3.0)
}

fn explicit_su3() -> Outcome {
    let x1 = CMat::from_real_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]).unwrap();
    let x2 = CMat::from_diag(&[omega().conj(), omega(), c(1.0, 0.0)]);
    let rho = RepTuple::new(GroupDescriptor::su(3), vec![x1, x2]).unwrap();
    let t = su3_traces(&rho).unwrap();
    let u = u_coords(&t).realify().unwrap();
    let p = pq(&t).realify().unwrap();
    let eight = u
        .pairs
        .iter()
        .map(|(a, b)| a.norm().max(b.norm()))
        .fold(0.0, f64::max);
    let target = 1.5 * 3f64.sqrt();
    let disc = p.discriminant().re;
    let delta = su3_delta(p.p.re, p.q.re);
    outcome(
        eight < 1e-12
            && (u.u5.re - target).abs() < 1e-12
            && (disc + 27.0).abs() < 1e-12
            && delta.abs() < 1e-12,
        format!(
            "max |u| {eight:.1e}, u5 {:.12} (expected {target:.12}), P2-4Q {disc:.12}, Delta {delta:.1e}",
            u.u5.re
        ),
    )
}

fn transpose() -> Outcome {
    let mut rng = seeded_rng(107);
    let (mut fixed, mut flipped) = (0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let rho = sample_tuple(GroupDescriptor::su(3), 2, &mut rng);
        let u = u_coords(&su3_traces(&rho).unwrap());
        let v = u_coords(&su3_traces(&transpose_tuple(&rho)).unwrap());
        for (a, b) in u.pairs.iter().zip(&v.pairs) {
            fixed = fixed.max((a.0 - b.0).norm()).max((a.1 - b.1).norm());
        }
        flipped = flipped.max((u.u5 + v.u5).norm());
    }
    outcome(
        fixed < 1e-10 && flipped < 1e-10,
        format!("first eight moved {fixed:.1e}, u5 + u5' {flipped:.1e}"),
    )
}

/// The relation is degree 6 in the entries, so its rounding error grows like
/// the sixth power of the entry size; the residual is reported relative to
/// that.
fn minors() -> Outcome {
    let mut rng = seeded_rng(108);
    let (mut abs, mut rel) = (0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let x = random_sl(3, &mut rng);
        let r = relation_residual(&su3_minors(&x).unwrap()).norm();
        abs = abs.max(r);
        rel = rel.max(r / x.max_abs().max(1.0).powi(6));
    }
    let at_identity = relation_residual(&su3_minors(&CMat::identity(3)).unwrap());
    outcome(
        rel < 1e-9 && at_identity == c(0.0, 0.0),
        format!("relative residual {rel:.1e} (absolute {abs:.1e}), at I {at_identity}"),
    )
}

fn kempf_ness() -> Outcome {
    let mut rng = seeded_rng(109);
    let mut moment = 0.0f64;
    for i in 0..10_000 {
        let n = 2 + i % 2;
        let rho = sample_tuple(GroupDescriptor::su(n), 1 + i % 3, &mut rng);
        moment = moment.max(moment_residual(&rho).unwrap().norm);
    }
    let mut grad = 0.0f64;
    let h = 1e-5;
    for _ in 0..100 {
        let rho = sample_tuple(GroupDescriptor::sl(3), 2, &mut rng);
        let dir = random_traceless_hermitian(3, &mut rng);
        let m = moment_residual(&rho).unwrap();
        let exact = 2.0 * (&dir * &m.m).trace().re;
        let at = |s: f64| {
            let g = exp_herm(&dir, s).unwrap();
            kn_functional(&conjugate_tuple(&g, &rho).unwrap()).unwrap()
        };
        let fd = (at(h) - at(-h)) / (2.0 * h);
        grad = grad.max((fd - exact).abs() / exact.abs().max(1.0));
    }
    let words = Word::positive_necklaces(2, 3);
    let (mut p_err, mut word_err, mut converged) = (0.0f64, 0.0f64, 0);
    for i in 0..100 {
        let n = 2 + i % 2;
        let ks = sample_tuple(GroupDescriptor::su(n), 2, &mut rng);
        let g = random_sl(n, &mut rng);
        let rho = conjugate_tuple(&g, &ks).unwrap();
        let out = kn_flow(&rho, DEFAULT_MAX_ITER, 1e-10).unwrap();
        if out.trace.converged {
            converged += 1;
        }
        p_err = p_err.max((out.trace.last().p - (2 * n) as f64).abs());
        for w in &words {
            let a = trace_word(&rho, w).unwrap();
            let b = trace_word(&out.tuple, w).unwrap();
            word_err = word_err.max((a - b).norm());
        }
    }
    outcome(
        moment < 1e-12 && grad < 1e-3 && converged == 100 && p_err < 1e-6 && word_err < 1e-8,
        format!(
            "moment {moment:.1e}, gradient rel error {grad:.1e}, {converged}/100 flows converged, functional error {p_err:.1e}, trace drift {word_err:.1e}"
        ),
    )
}

fn baird() -> Outcome {
    let start = Instant::now();
    let low = [
        IntPolynomial::from_i64(&[1]),
        IntPolynomial::from_i64(&[1]),
        IntPolynomial::from_i64(&[1, 0, 0, 0, 0, 0, 1]),
    ];
    let low_ok = (1..=3).all(|r| baird_poly(r).ok().as_ref() == Some(&low[r as usize - 1]));
    let all_ok = (1..=10).all(|r| baird_poly(r).is_ok());
    let (n, m, differ) = surface_counterexample_polys();
    let changed: Vec<usize> = (0..=6).filter(|&k| n.coeff(k) != m.coeff(k)).collect();
    let printed = n == IntPolynomial::from_i64(&[1, 0, 1, 4, 1, 0, 1])
        && m == IntPolynomial::from_i64(&[1, 0, 1, 4, 2, 34, 2]);
    let (fast, time) = within(start, Duration::from_secs(1));
    outcome(
        low_ok && all_ok && differ && printed && changed == [4, 5, 6] && fast,
        format!("r = 3 gives {}, ranks 1..10 divide exactly: {all_ok}, surface polynomials differ at {changed:?}, {time}", baird_poly(3).unwrap()),
    )
}

fn figures() -> Outcome {
    let grid = alcove_grid(64).unwrap();
    let h = 1.5 * 3f64.sqrt();
    let corners = [(3.0, 0.0), (-1.5, h), (-1.5, -h)];
    let corner_hits = corners
        .iter()
        .filter(|&&(x, y)| {
            grid.iter()
                .any(|r| (r[0] - x).abs() < 1e-12 && (r[1] - y).abs() < 1e-12 && r[2].abs() < 1e-9)
        })
        .count();
    let surface = tetrahedron_boundary(64).unwrap();
    let vertices = [[1.0, 1.0, 1.0], [-1.0, -1.0, 1.0], [-1.0, 1.0, -1.0], [1.0, -1.0, -1.0]];
    let vertex_hits = vertices
        .iter()
        .filter(|v| surface.iter().any(|r| r[0] == v[0] && r[1] == v[1] && r[2] == v[2]))
        .count();
    outcome(
        corner_hits == 3 && vertex_hits == 4,
        format!("{corner_hits}/3 alcove corners, {vertex_hits}/4 tetrahedron vertices"),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("retraction correctness", retraction),
        ("Fricke identity", fricke),
        ("sigma ball and rank-2 lift", sigma_ball),
        ("rank-3 two-sheet law", two_sheets),
        ("SU(3) membership", su3_membership),
        ("explicit SU(3) example", explicit_su3),
        ("transpose involution", transpose),
        ("minors relation", minors),
        ("Kempf-Ness flow", kempf_ness),
        ("Poincare polynomials", baird),
        ("figure data", figures),
    ];
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        writeln!(out, "acceptance {:>2} {tag}: {name}: {}", i + 1, o.detail).unwrap();
        if !o.pass {
            failed.push(i + 1);
        }
    }
    out.flush().unwrap();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
