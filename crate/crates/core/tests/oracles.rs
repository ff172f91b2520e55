//! Closed-form oracles computed independently of the library formulas.

use std::f64::consts::PI;

use kplane_core::fields::{ellipsoid_section_volume, make_star_set, Domain, FieldKind, ScalarField, StarKind};
use kplane_core::functionals::{grassmannian_integral, sphere_integral};
use kplane_core::grassmann::{haar_subspace, pole_cos, AffinePlane, OrthonormalFrame};
use kplane_core::rng::Stream;
use kplane_core::special::{ball_volume, sharp_constant, ConstantKind};
use kplane_core::transforms::{kplane_transform, Quadrature};
use kplane_core::Sequential;

fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

fn b(m: usize) -> f64 {
    PI.powf(m as f64 / 2.0) / gamma(m as f64 / 2.0 + 1.0)
}

fn random_plane(n: usize, k: usize, stream: &Stream, i: u64, spread: f64) -> AffinePlane {
    let mut rng = stream.sample(i);
    let dir = haar_subspace(n, k, &mut rng).unwrap();
    let mut x = vec![0.0; n];
    rng.fill_normal(&mut x);
    x.iter_mut().for_each(|v| *v *= spread);
    AffinePlane::through(dir, &x).unwrap()
}

fn dist2(tau: &AffinePlane) -> f64 {
    tau.offset.iter().map(|v| v * v).sum()
}

#[test]
fn ball_volume_matches_gamma_formula() {
    for m in 0..12 {
        assert!((ball_volume(m) / b(m) - 1.0).abs() < 1e-13, "m={m}");
    }
}

#[test]
fn gardner_constant_closes_on_the_ball() {
    // ∫ V_k(B∩τ)^{n+1} dτ = π^{(n−k)/2} b_k^{n+1} Γ(k(n+1)/2+1) / Γ(n(k+1)/2+1).
    for n in 2..8 {
        for k in 1..n {
            let (nf, kf) = (n as f64, k as f64);
            let lhs = PI.powf((nf - kf) / 2.0) * b(k).powi(n as i32 + 1) * gamma(kf * (nf + 1.0) / 2.0 + 1.0)
                / gamma(nf * (kf + 1.0) / 2.0 + 1.0);
            let c = sharp_constant(ConstantKind::GardnerC { n, k }).unwrap();
            let rhs = c * b(n).powi(k as i32 + 1);
            assert!((lhs / rhs - 1.0).abs() < 1e-12, "n={n} k={k}");
        }
    }
}

#[test]
fn big_omega_one_in_the_plane() {
    let v = sharp_constant(ConstantKind::BigOmegaK { n: 2, k: 1 }).unwrap();
    assert!((v - (PI / 2.0).powf(1.0 / 3.0)).abs() < 1e-12);
    assert!((v - 1.16245).abs() < 1e-5);
}

#[test]
fn kplane_gaussian_ball_and_extremizer_closed_forms() {
    let stream = Stream::new(3, "oracle-planes");
    let q = Quadrature::tensor_tan(64);
    for n in 2..=3 {
        for k in 1..n {
            let gauss = ScalarField::new(Domain::Euclidean(n), FieldKind::Gaussian { center: None }).unwrap();
            let ball = ScalarField::new(
                Domain::Euclidean(n),
                FieldKind::Indicator { body: make_star_set(n, StarKind::Ball { radius: 1.0 }).unwrap() },
            )
            .unwrap();
            let ext = ScalarField::new(Domain::Euclidean(n), FieldKind::Extremizer { k, map: None }).unwrap();
            let kf = k as f64;
            let lambda = PI.powf((kf + 1.0) / 2.0) / gamma((kf + 1.0) / 2.0);
            for i in 0..25 {
                let tau = random_plane(n, k, &stream, (n * 100 + k * 10) as u64 + i, 0.6);
                let d2 = dist2(&tau);
                let g = kplane_transform(&gauss, &tau, &q).unwrap().value;
                assert!((g - PI.powf(kf / 2.0) * (-d2).exp()).abs() < 1e-3, "gaussian n={n} k={k}");
                let bl = kplane_transform(&ball, &tau, &q).unwrap().value;
                let exact = if d2 < 1.0 { b(k) * (1.0 - d2).powf(kf / 2.0) } else { 0.0 };
                assert!((bl - exact).abs() < 1e-3, "ball n={n} k={k}: {bl} vs {exact}");
                let e = kplane_transform(&ext, &tau, &q).unwrap().value;
                assert!(
                    (e - lambda / (1.0 + d2).sqrt()).abs() < 1e-3,
                    "extremizer n={n} k={k}: {e} vs {}",
                    lambda / (1.0 + d2).sqrt()
                );
            }
        }
    }
}

#[test]
fn coordinate_sections_of_a_diagonal_ellipsoid() {
    let diag = [1.0, 0.25, 4.0, 2.0];
    let StarKind::Ellipsoid { matrix } = StarKind::diagonal_ellipsoid(&diag) else { unreachable!() };
    for axes in [vec![0usize], vec![1, 2], vec![0, 1, 3]] {
        let frame = OrthonormalFrame::coordinate(4, &axes).unwrap();
        let v = ellipsoid_section_volume(&matrix, &frame).unwrap();
        let prod: f64 = axes.iter().map(|&a| diag[a]).product();
        assert!((v - b(axes.len()) / prod.sqrt()).abs() < 1e-12, "{axes:?}");
    }
}

#[test]
fn haar_pole_moment_is_k_over_n() {
    // E |P_ξ e_n|² = k/n over the Haar measure.
    for (n, k) in [(3, 1), (3, 2), (4, 2)] {
        let q = Quadrature::monte_carlo(40_000, 17);
        let e = grassmannian_integral(&Sequential, n, k, 0.0, 0.0, &q, &|f: &OrthonormalFrame| pole_cos(f).powi(2)).unwrap();
        let exact = k as f64 / n as f64;
        assert!((e.value - exact).abs() < 4.0 * e.stderr, "n={n} k={k}: {e:?}");
        assert!(e.stderr < 0.01);
    }
}

#[test]
fn sphere_weight_against_beta_integral() {
    // ∫ (1−θ_n²)^{a/2} |θ_n|^b d*θ = Γ(n/2)Γ((a+n−1)/2)Γ((b+1)/2) / (Γ((n−1)/2)Γ((a+b+n)/2)Γ(1/2)).
    let n = 3;
    let (a, bb) = (1.0, -0.5);
    let nf = n as f64;
    let exact = gamma(nf / 2.0) * gamma((a + nf - 1.0) / 2.0) * gamma((bb + 1.0) / 2.0)
        / (gamma((nf - 1.0) / 2.0) * gamma((a + bb + nf) / 2.0) * gamma(0.5));
    let q = Quadrature::monte_carlo(40_000, 5);
    let e = sphere_integral(&Sequential, n, a, bb, &q, &|_: &[f64]| 1.0).unwrap();
    assert!((e.value - exact).abs() < 4.0 * e.stderr.max(1e-12), "{e:?} vs {exact}");
}
