use std::f64::consts::TAU;
use std::sync::Arc;

use proptest::prelude::*;

use panharmonic::analysis::{
    condition_margin, log_laplacian_indicator, prop21_fit, random_probes, superharmonicity_probe, varadhan_error,
    varadhan_estimate,
};
use panharmonic::geometry::{Domain, Point2};
use panharmonic::mesh::{refine_uniform, triangulate};
use panharmonic::solver::sparse::{solve_spd_system, CsrMatrix, SpdSystem};
use panharmonic::solver::{gradient_field, solve_dirichlet, Problem, ScalarField};
use panharmonic::special::DiscSolution;

static L: std::sync::LazyLock<Domain> = std::sync::LazyLock::new(Domain::l_shape);

fn point_in(domain: &Domain) -> impl Strategy<Value = Point2> + '_ {
    (0.0..2.0f64, 0.0..2.0f64)
        .prop_map(|(x, y)| Point2::new(x, y))
        .prop_filter("inside", move |p| domain.contains_point(*p))
}

/// Star-shaped polygon with `n` vertices at angles `2 pi k / n` and radii in
/// `[0.4, 1]`; always simple.
fn star_polygon() -> impl Strategy<Value = Domain> {
    (5usize..10).prop_flat_map(|n| {
        prop::collection::vec(0.4..1.0f64, n).prop_map(move |radii| {
            let vertices = radii
                .iter()
                .enumerate()
                .map(|(k, r)| {
                    let t = TAU * k as f64 / radii.len() as f64;
                    Point2::new(r * t.cos(), r * t.sin())
                })
                .collect();
            Domain::polygon(vertices).unwrap()
        })
    })
}

fn segment_inside(domain: &Domain, p: Point2, q: Point2) -> bool {
    (0..=200).all(|k| {
        let t = k as f64 / 200.0;
        domain.contains_point(p + t * (q - p))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_one_lipschitz(p in point_in(&L), q in point_in(&L)) {
        prop_assume!(segment_inside(&L, p, q));
        let dp = L.distance_to_boundary(p).unwrap();
        let dq = L.distance_to_boundary(q).unwrap();
        prop_assert!((dp - dq).abs() <= p.distance(q) + 1e-12);
    }

    #[test]
    fn distance_scales_with_domain(p in point_in(&L), s in 0.01..100.0f64) {
        let scaled = L.scaled(s).unwrap();
        let d = L.distance_to_boundary(p).unwrap();
        let ds = scaled.distance_to_boundary(s * p).unwrap();
        prop_assert!((ds - s * d).abs() <= 1e-13 * s * d);
    }

    #[test]
    fn inward_offsets_have_distance_epsilon(domain in star_polygon(), k in 0usize..9, t in 0.1..0.9f64) {
        let v = domain.vertices();
        let (a, b) = (v[k % v.len()], v[(k + 1) % v.len()]);
        let e = b - a;
        let normal = (1.0 / e.norm()) * Point2::new(-e.x2, e.x1);
        let eps = 1e-6;
        let p = a + t * e + eps * normal;
        prop_assume!(domain.contains_point(p));
        prop_assert!((domain.distance_to_boundary(p).unwrap() - eps).abs() < 1e-9);
    }

    #[test]
    fn convex_domains_pass_the_mean_value_test(n in 3usize..12, seed in any::<u64>()) {
        let polygon = Domain::regular_polygon(n, 1.0).unwrap();
        let probes = random_probes(&polygon, 5, seed).unwrap();
        for r in superharmonicity_probe(&polygon, &probes).unwrap() {
            prop_assert!(r.mean <= r.center_value + 1e-6);
            prop_assert!(!r.violated);
        }
    }

    #[test]
    fn refinement_preserves_area_and_conformity(domain in star_polygon(), h in 0.15..0.4f64) {
        let mesh = triangulate(&domain, h).unwrap();
        prop_assert!((mesh.total_area() - domain.area()).abs() < 1e-9);
        mesh.validate(Some(&domain)).unwrap();
        let fine = refine_uniform(&mesh, &domain).unwrap();
        prop_assert_eq!(fine.num_triangles(), 4 * mesh.num_triangles());
        prop_assert!((fine.total_area() - domain.area()).abs() < 1e-9);
        fine.validate(Some(&domain)).unwrap();
    }

    #[test]
    fn margin_and_log_laplacian_classify_alike(
        values in prop::collection::vec(1e-6..1.0f64, 41),
        mu in 0.5..50.0f64,
    ) {
        let mesh = Arc::new(triangulate(&Domain::unit_square(), 0.3).unwrap());
        prop_assume!(mesh.num_nodes() <= values.len());
        let field = ScalarField::sampled(Arc::clone(&mesh), mu, Problem::Dirichlet, |p| {
            let i = mesh.nodes.iter().position(|q| *q == p).unwrap();
            values[i]
        });
        let grads = gradient_field(&field);
        let result = condition_margin(&field, &grads).unwrap();
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let mean = tri.iter().map(|&i| field.values[i]).sum::<f64>() / 3.0;
            let indicator = log_laplacian_indicator(mu, mean, grads.gradients[t].norm());
            let margin = result.margins[t];
            if margin.abs() > 1e-12 {
                prop_assert_eq!(margin >= 0.0, indicator <= 0.0);
            }
        }
        let lowest = result.margins.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert_eq!(result.min_margin, lowest);
        prop_assert_eq!(result.argmin_centroid, mesh.centroid(result.argmin_triangle));
    }

    #[test]
    fn cg_agrees_with_tridiagonal_elimination(
        n in 2usize..30,
        couplings in prop::collection::vec(0.0..1.0f64, 29),
        extra in prop::collection::vec(0.01..2.0f64, 30),
        rhs in prop::collection::vec(-1.0..1.0f64, 30),
    ) {
        // tridiagonal, strictly diagonally dominant
        let mut triplets = Vec::new();
        let mut diag = vec![0.0; n];
        for i in 0..n - 1 {
            triplets.push((i, i + 1, -couplings[i]));
            triplets.push((i + 1, i, -couplings[i]));
            diag[i] += couplings[i];
            diag[i + 1] += couplings[i];
        }
        for i in 0..n {
            triplets.push((i, i, diag[i] + extra[i]));
        }
        let a = CsrMatrix::from_triplets(n, triplets).unwrap();
        let b = rhs[..n].to_vec();
        let x = solve_spd_system(&SpdSystem::new(a.clone(), b.clone()).unwrap(), 1e-12).unwrap().x;
        // Thomas algorithm as the reference
        let lower: Vec<f64> = (0..n).map(|i| if i > 0 { a.get(i, i - 1) } else { 0.0 }).collect();
        let upper: Vec<f64> = (0..n).map(|i| if i + 1 < n { a.get(i, i + 1) } else { 0.0 }).collect();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        for i in 0..n {
            let m = a.get(i, i) - if i > 0 { lower[i] * c[i - 1] } else { 0.0 };
            c[i] = upper[i] / m;
            d[i] = (b[i] - if i > 0 { lower[i] * d[i - 1] } else { 0.0 }) / m;
        }
        let mut exact = vec![0.0; n];
        for i in (0..n).rev() {
            exact[i] = d[i] - if i + 1 < n { c[i] * exact[i + 1] } else { 0.0 };
        }
        let scale = exact.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        for (xi, ei) in x.iter().zip(&exact) {
            prop_assert!((xi - ei).abs() <= 1e-9 * scale);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn dirichlet_solutions_obey_the_maximum_principle(n in 3usize..9, mu in 1.0..15.0f64) {
        let domain = Domain::regular_polygon(n, 1.0).unwrap();
        let mesh = Arc::new(triangulate(&domain, (0.5 / mu).min(0.2)).unwrap());
        let field = solve_dirichlet(mesh, mu).unwrap();
        prop_assert!(field.values.iter().all(|&v| v > 0.0 && v <= 1.0 + 1e-10));
        let est = varadhan_estimate(&field).unwrap();
        for (e, &b) in est.iter().zip(&field.mesh.boundary_node) {
            if b {
                prop_assert_eq!(e.to_bits(), 0.0f64.to_bits());
            }
        }
    }

    #[test]
    fn computed_fields_satisfy_the_log_lower_bound(mu in 2.0..12.0f64) {
        let square = Domain::unit_square();
        let mesh = Arc::new(triangulate(&square, 0.04).unwrap());
        let field = solve_dirichlet(mesh, mu).unwrap();
        let fit = prop21_fit(&[&field], &square, 0.25).unwrap();
        prop_assert!(fit.c_rho >= 1.0);
        prop_assert!(fit.lower_bound_holds);
        for (v, p) in field.values.iter().zip(&field.mesh.nodes) {
            let d = square.boundary_distance(*p);
            prop_assert!(-v.ln() / mu >= -fit.c_rho.ln() / mu + 0.75 * d - 1e-9);
        }
    }
}

#[test]
fn analytic_disc_error_decreases_in_mu() {
    let mesh = Arc::new(triangulate(&Domain::unit_disc(), 0.05).unwrap());
    let errors: Vec<f64> = [25.0, 50.0, 100.0, 200.0]
        .iter()
        .map(|&mu| {
            let sol = DiscSolution::new(1.0, mu).unwrap();
            let field =
                ScalarField::sampled(Arc::clone(&mesh), mu, Problem::Dirichlet, |p| sol.log_value_at(p.norm()).exp());
            varadhan_error(&field, &Domain::unit_disc()).unwrap().sup_error
        })
        .collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
    let frozen = [0.10093, 0.057448, 0.032203, 0.017837];
    for (e, f) in errors.iter().zip(frozen) {
        assert!((e - f).abs() < 5e-6, "{e} vs {f}");
    }
}
