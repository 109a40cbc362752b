//! Acceptance gate: one test per shipped guarantee, each ending with a
//! single PASS line. Tolerances are pinned here and nowhere else.

use focal::oracle::oracle_points_fn;
use focal::poly2::{rat, rat_int, rational_from_f64, Poly2};
use focal::families::{
    cartesian_oval, ellipse, erdos_mordell, fermat_torricelli, hyperbola, parabola, trifocal,
};
use focal::{
    hausdorff, trace_implicit, trace_residual, verify_derivation, Directrix, FamilyInstance,
    FocalScene, Focus, OvalBranch, Window,
};
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Residual bound for kept arc vertices.
const W_TOL: f64 = 1e-6;
/// Residual magnitude the oracle bisects each locus point down to.
const ORACLE_TOL: f64 = 1e-9;
/// Gradient-normalized implicit bound and constraint slack when checking
/// oracle points against a derivation.
const VERIFY_TOL: f64 = 1e-6;
/// Agreement between the Weiszfeld minimum and the closed form 2*sqrt(3).
const S0_TOL: f64 = 1e-8;
/// Grid resolution for the numeric criteria.
const GRID: usize = 512;
/// Kept arcs and oracle points must agree within this many cell diagonals.
const HAUSDORFF_CELLS: f64 = 2.0;

fn win10() -> Window {
    Window::new(-10.0, 10.0, -10.0, 10.0, GRID, GRID).unwrap()
}

fn normalized_text(p: &Poly2) -> String {
    p.normalize().unwrap().to_string()
}

#[test]
fn criterion_01_ellipse_closed_form() {
    let fam = ellipse(rat_int(5), rat_int(4)).unwrap();
    let d = fam.derive().unwrap();
    assert!(
        Poly2::equal_up_to_scale(&d.implicit, fam.expected_implicit.as_ref().unwrap()).unwrap()
    );
    assert_eq!(normalized_text(&d.implicit), "16*x^2 + 25*y^2 - 400");
    assert_eq!(d.constraints.len(), 1);
    assert_eq!(d.constraints[0].to_string(), "41 - x^2 - y^2 >= 0");
    assert!(d.constraints[0].matches(&fam.expected_constraints.as_ref().unwrap()[0]));
    println!("criterion 01 PASS: ellipse(5,4) canonical implicit and circumscribed-circle bound");
}

#[test]
fn criterion_02_parabola_closed_form() {
    let fam = parabola(rat_int(2)).unwrap();
    let d = fam.derive().unwrap();
    assert_eq!(normalized_text(&d.implicit), "y^2 - 4*x");
    assert_eq!(d.constraints.len(), 1);
    assert_eq!(d.constraints[0].to_string(), "x + 1 >= 0");
    assert!(
        Poly2::equal_up_to_scale(&d.implicit, fam.expected_implicit.as_ref().unwrap()).unwrap()
    );
    println!("criterion 02 PASS: parabola(2) implicit and focus-side half plane");
}

#[test]
fn criterion_03_hyperbola_closed_form_and_trace() {
    let fam = hyperbola(rat_int(4), rat_int(3)).unwrap();
    let d = fam.derive().unwrap();
    assert_eq!(normalized_text(&d.implicit), "9*x^2 - 16*y^2 - 144");
    assert_eq!(d.constraints.len(), 1);
    assert_eq!(d.constraints[0].to_string(), "x^2 + y^2 - 7 >= 0");

    let win = win10();
    let arcs = trace_implicit(&d, |x, y| fam.residual(x, y), &win, W_TOL).unwrap();
    let verts = arcs.vertices();
    assert!(!verts.is_empty());
    for &(x, y) in &verts {
        assert!(fam.residual(x, y).abs() <= W_TOL, "residual at ({x}, {y})");
        assert!(d.constraints[0].satisfied_at(x, y, 1e-9), "constraint at ({x}, {y})");
    }
    // Both branches survive: the defining relation keeps them, the
    // constraint alone would too.
    assert!(verts.iter().any(|&(x, _)| x > 3.9));
    assert!(verts.iter().any(|&(x, _)| x < -3.9));
    println!(
        "criterion 03 PASS: hyperbola(4,3) implicit, exterior constraint, {} traced vertices",
        verts.len()
    );
}

#[test]
fn criterion_04_cartesian_oval_branches() {
    let plus = cartesian_oval(rat_int(1), 2, 1, rat_int(5), OvalBranch::Plus).unwrap();
    let minus = cartesian_oval(rat_int(1), 2, 1, rat_int(5), OvalBranch::Minus).unwrap();
    let dp = plus.derive().unwrap();
    let dm = minus.derive().unwrap();

    // Both sign branches land on the same normalized quartic, which equals
    // the independent expansion frozen in the family table.
    let np = dp.implicit.normalize().unwrap();
    assert_eq!(np, dm.implicit.normalize().unwrap());
    assert!(
        Poly2::equal_up_to_scale(&np, plus.expected_implicit.as_ref().unwrap()).unwrap()
    );
    assert_eq!(np.degree(), 4);

    // The single constraint of each branch is the same circle with opposite
    // senses. Read center and radius off the canonical form
    // a(x^2 + y^2) + bx + d >= 0.
    assert_eq!(dp.constraints.len(), 1);
    assert_eq!(dm.constraints.len(), 1);
    for d in [&dp, &dm] {
        let g = d.constraints[0].canonical_geq();
        let a = g.coeff(2, 0);
        assert_eq!(a, g.coeff(0, 2));
        assert!(g.coeff(1, 1).is_zero() && g.coeff(0, 1).is_zero());
        let cx = -g.coeff(1, 0) / (rat_int(2) * &a);
        let r2 = &cx * &cx - g.coeff(0, 0) / &a;
        assert_eq!(cx, rat(3, 5));
        assert_eq!(r2, rat(109, 25));
    }
    // Interior sense for the plus branch, exterior for the minus.
    let inside = (0.6, 0.0);
    let outside = (10.0, 0.0);
    assert!(dp.constraints[0].satisfied_at(inside.0, inside.1, 0.0));
    assert!(!dp.constraints[0].satisfied_at(outside.0, outside.1, 0.0));
    assert!(!dm.constraints[0].satisfied_at(inside.0, inside.1, 0.0));
    assert!(dm.constraints[0].satisfied_at(outside.0, outside.1, 0.0));
    assert!(dp.constraints[0].matches(&plus.expected_constraints.as_ref().unwrap()[0]));
    assert!(dm.constraints[0].matches(&minus.expected_constraints.as_ref().unwrap()[0]));
    println!(
        "criterion 04 PASS: oval branches share one quartic; splitting circle (3/5, 0), r^2 = 109/25"
    );
}

#[test]
fn criterion_05_trifocal_octic() {
    let fam = trifocal(rat_int(-1), rat_int(1), rat_int(1), rat_int(5)).unwrap();
    let d = fam.derive().unwrap();
    assert_eq!(d.implicit.degree(), 8);
    assert!(
        Poly2::equal_up_to_scale(&d.implicit, fam.expected_implicit.as_ref().unwrap()).unwrap()
    );
    let expected = fam.expected_constraints.as_ref().unwrap();
    assert_eq!(d.constraints.len(), 3);
    assert_eq!(expected.len(), 3);
    for (got, want) in d.constraints.iter().zip(expected) {
        assert!(got.matches(want), "constraint {got} vs {want}");
    }
    println!("criterion 05 PASS: trifocal(-1,1,1,5) octic matches the direct expansion");
}

#[test]
fn criterion_06_oracle_agreement_all_families() {
    let instances: Vec<FamilyInstance> = vec![
        parabola(rat_int(2)).unwrap(),
        ellipse(rat_int(5), rat_int(4)).unwrap(),
        hyperbola(rat_int(4), rat_int(3)).unwrap(),
        cartesian_oval(rat_int(1), 2, 1, rat_int(5), OvalBranch::Plus).unwrap(),
        cartesian_oval(rat_int(1), 2, 1, rat_int(5), OvalBranch::Minus).unwrap(),
        trifocal(rat_int(-1), rat_int(1), rat_int(1), rat_int(5)).unwrap(),
    ];
    let win = win10();
    let bound = HAUSDORFF_CELLS * win.cell_diagonal();
    for (idx, fam) in instances.iter().enumerate() {
        let label = format!("{} #{idx}", fam.name);
        let d = fam.derive().unwrap();
        let w = |x: f64, y: f64| fam.residual(x, y);

        let oracle = oracle_points_fn(w, &win, ORACLE_TOL);
        assert!(!oracle.points.is_empty(), "{label}: oracle found nothing");
        let report = verify_derivation(&d, &oracle, VERIFY_TOL).unwrap();
        assert!(
            report.pass && report.implicit_failures == 0 && report.constraint_failures == 0,
            "{label}: {report}"
        );

        let arcs = trace_implicit(&d, w, &win, W_TOL).unwrap();
        let verts = arcs.vertices();
        assert!(!verts.is_empty(), "{label}: no kept arcs");
        let gap = hausdorff(&verts, &oracle.coordinates()).unwrap();
        assert!(gap <= bound, "{label}: hausdorff {gap} > {bound}");
    }
    println!(
        "criterion 06 PASS: 6 families, 100% oracle agreement, hausdorff <= {HAUSDORFF_CELLS} cells"
    );
}

#[test]
fn criterion_07_existence_threshold() {
    let h = 3.0_f64.sqrt();
    let ((fx, fy), s0) = fermat_torricelli(-1.0, 1.0, h);
    assert!((s0 - 2.0 * h).abs() <= S0_TOL, "s0 = {s0}");
    assert!(fx.abs() <= 1e-7 && (fy - h / 3.0).abs() <= 1e-7, "minimizer ({fx}, {fy})");

    let scene_at = |s: f64| {
        FocalScene::from_foci(
            vec![
                Focus::from_f64(-1.0, 0.0).unwrap(),
                Focus::from_f64(1.0, 0.0).unwrap(),
                Focus::from_f64(0.0, h).unwrap(),
            ],
            vec![rat_int(1), rat_int(1), rat_int(1)],
            rational_from_f64(s).unwrap(),
        )
        .unwrap()
    };
    let win = Window::new(-2.0, 2.0, -1.0, 2.5, 256, 256).unwrap();

    let below = trace_residual(&scene_at(0.95 * s0), &win, W_TOL).unwrap();
    assert!(below.arcs.is_empty(), "locus below the threshold must be empty");
    assert!(below.zariski_rejects.is_empty());

    let above = trace_residual(&scene_at(1.05 * s0), &win, W_TOL).unwrap();
    assert_eq!(above.stats.arc_count, 1, "expected a single egg contour");
    assert!(above.arcs[0].closed);
    assert!(above.stats.max_abs_w <= W_TOL);
    println!("criterion 07 PASS: S0 = 2*sqrt(3) within {S0_TOL}; empty below, one egg above");
}

#[test]
fn criterion_08_erdos_mordell_region() {
    let fam = erdos_mordell([
        (rat_int(0), rat_int(0)),
        (rat_int(4), rat_int(0)),
        (rat_int(0), rat_int(3)),
    ])
    .unwrap();
    assert_eq!(fam.equations.len(), 8, "rational sides carry all region equations");

    // Uniform interior samples by folded barycentric coordinates.
    let mut rng = StdRng::seed_from_u64(0x0e2d_05);
    for _ in 0..10_000 {
        let (mut u, mut v) = (rng.gen::<f64>(), rng.gen::<f64>());
        if u + v > 1.0 {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        let (x, y) = (4.0 * u, 3.0 * v);
        let w = fam.residual(x, y);
        assert!(w > 0.0, "inequality violated at ({x}, {y}): {w}");
    }

    let win = Window::new(-12.0, 12.0, -12.0, 12.0, GRID, GRID).unwrap();
    let arcs = trace_residual(&fam.scene, &win, W_TOL).unwrap();
    assert!(!arcs.arcs.is_empty());
    for &(x, y) in &arcs.vertices() {
        assert!(fam.residual(x, y).abs() <= W_TOL, "vertex ({x}, {y})");
    }
    println!(
        "criterion 08 PASS: 10000 interior samples nonnegative; {} equality arcs within {W_TOL}",
        arcs.stats.arc_count
    );
}

#[test]
fn criterion_09_zariski_separation() {
    // Single sign branch R1 - R2 = 8 of the (4,3) hyperbola: the locus is
    // the branch around the far focus only, yet squaring yields both.
    let fam = hyperbola(rat_int(4), rat_int(3)).unwrap();
    let eq = &fam.equations[0];
    let d = focal::eliminate(eq).unwrap();
    let win = win10();
    let arcs = trace_implicit(&d, |x, y| eq.residual(x, y), &win, W_TOL).unwrap();

    let verts = arcs.vertices();
    assert!(!verts.is_empty());
    for &(x, y) in &verts {
        let r1 = (x - 5.0).hypot(y);
        let r2 = (x + 5.0).hypot(y);
        assert!(r1 - r2 > 0.0, "kept vertex on the wrong branch: ({x}, {y})");
        assert!((r1 - r2 - 8.0).abs() <= W_TOL);
    }
    assert!(!arcs.zariski_rejects.is_empty(), "mirror branch must be rejected");
    for r in &arcs.zariski_rejects {
        assert!(r.x > 0.0, "reject ({}, {}) is not on the mirror branch", r.x, r.y);
        assert!(r.w_abs > 1.0);
    }
    println!(
        "criterion 09 PASS: {} kept vertices on the true branch, {} Zariski rejects",
        verts.len(),
        arcs.zariski_rejects.len()
    );
}

/// Halving the cell size must not lose curve length and keeps residuals
/// at the vertex tolerance.
#[test]
fn trace_resolution_convergence() {
    let fam = ellipse(rat_int(5), rat_int(4)).unwrap();
    let trace_at = |n: usize| {
        let win = Window::new(-10.0, 10.0, -10.0, 10.0, n, n).unwrap();
        trace_residual(&fam.scene, &win, W_TOL).unwrap()
    };
    let coarse = trace_at(256);
    let fine = trace_at(512);
    assert_eq!(coarse.stats.arc_count, 1);
    assert_eq!(fine.stats.arc_count, 1);
    assert!(coarse.stats.max_abs_w <= W_TOL && fine.stats.max_abs_w <= W_TOL);
    assert!(
        fine.stats.total_length >= 0.99 * coarse.stats.total_length,
        "length regressed: {} -> {}",
        coarse.stats.total_length,
        fine.stats.total_length
    );
}

/// The equilateral equality locus is one closed curve whose six arches
/// visit all six exterior sign regions and avoid the interior.
#[test]
fn erdos_mordell_equilateral_arches() {
    let h = rational_from_f64(3.0_f64.sqrt()).unwrap();
    let scene = FocalScene::new(
        vec![
            Focus::from_f64(-1.0, 0.0).unwrap(),
            Focus::from_f64(1.0, 0.0).unwrap(),
            Focus::new(rat_int(0), h.clone()),
        ],
        vec![rat_int(1), rat_int(1), rat_int(1)],
        vec![
            Directrix::new(rat_int(0), rat_int(1), rat_int(0)).unwrap(),
            Directrix::new(-h.clone(), rat_int(-1), h.clone()).unwrap(),
            Directrix::new(h.clone(), rat_int(-1), h.clone()).unwrap(),
        ],
        vec![rat_int(-2), rat_int(-2), rat_int(-2)],
        rat_int(0),
    )
    .unwrap();
    assert!(!scene.is_symbolically_derivable(), "side norms are irrational here");

    let win = Window::new(-2.0, 2.0, -1.0, 2.5, 256, 256).unwrap();
    let arcs = trace_residual(&scene, &win, W_TOL).unwrap();
    assert_eq!(arcs.stats.arc_count, 1);
    assert!(arcs.arcs[0].closed);

    let mut regions = std::collections::BTreeSet::new();
    for &(x, y) in &arcs.vertices() {
        let eps = scene.sign_vector(x, y).unwrap();
        if eps.iter().all(|&e| e != 0) {
            regions.insert(eps);
        }
    }
    assert_eq!(regions.len(), 6, "regions visited: {regions:?}");
    assert!(!regions.contains(&vec![1, 1, 1]), "no equality points inside the triangle");
}

/// The erdos_mordell constructor orients every side inward.
#[test]
fn erdos_mordell_interior_signs() {
    let fam = erdos_mordell([
        (rat_int(0), rat_int(0)),
        (rat_int(4), rat_int(0)),
        (rat_int(0), rat_int(3)),
    ])
    .unwrap();
    assert_eq!(fam.scene.sign_vector(1.0, 0.75).unwrap(), vec![1, 1, 1]);
    let w00 = fam.scene.residual(0.0, 0.0);
    assert!((w00 - 11.0 / 5.0).abs() < 1e-12, "corner value {w00}");
}
