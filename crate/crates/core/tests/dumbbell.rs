//! The two-vertex dumbbell over Sym(3): loops at `u` and `v` carrying
//! `g = (2 3)` and `h = (1 2)`, joined by an edge with trivial voltage.

use std::sync::Arc;

use liftspec::characters::{
    apply_character, coefficient_of_identity, power_sums_to_roots, regular_spectrum_via_characters,
};
use liftspec::irreps::{subgroup_sum, DEFAULT_RANK_TOL};
use liftspec::linalg::nearest_multiset_distance;
use liftspec::spectral::{build_sh, lift_eigenvectors, rho_image};
use liftspec::voltage::{local_group_is_transitive, power_traces};
use liftspec::{
    build_base_matrix, build_lift, builtin_irreps, lift_spectrum, BaseMatrix, FiniteGroup,
    GroupAlgebraElement, GroupFamily, IrrepSet, Permutation, SubgroupContext, Tolerances,
    VoltageGraph,
};
use num_complex::Complex64;

struct Dumbbell {
    group: Arc<FiniteGroup>,
    irreps: IrrepSet,
    graph: VoltageGraph,
    b: BaseMatrix,
    stabilizer: SubgroupContext,
}

fn element(group: &FiniteGroup, text: &str) -> usize {
    group
        .index_of(&Permutation::parse(text, 3).unwrap())
        .unwrap()
}

fn dumbbell() -> Dumbbell {
    let (group, irreps) = builtin_irreps(GroupFamily::Sym3, 0).unwrap();
    let edges = [
        (0, 0, element(&group, "(2 3)")),
        (0, 1, 0),
        (1, 1, element(&group, "(1 2)")),
    ];
    let graph = VoltageGraph::undirected(vec!["u".into(), "v".into()], &edges, &group).unwrap();
    let b = build_base_matrix(&graph);
    let stabilizer = SubgroupContext::new(group.clone(), &group.stabilizer(1).unwrap()).unwrap();
    Dumbbell {
        group,
        irreps,
        graph,
        b,
        stabilizer,
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn reals(xs: &[f64]) -> Vec<Complex64> {
    xs.iter().copied().map(real).collect()
}

#[test]
fn cosets_follow_generator_order() {
    let d = dumbbell();
    // H, H(12), H(13) with H = {e, (2 3)}
    for (j, rep) in ["()", "(1 2)", "(1 3)"].iter().enumerate() {
        assert_eq!(d.stabilizer.coset_of(element(&d.group, rep)), j);
    }
    assert!(local_group_is_transitive(&d.graph, &d.group).unwrap());
}

#[test]
fn relative_lift_is_cubic_on_six_vertices() {
    let d = dumbbell();
    let lift = build_lift(&d.graph, &d.stabilizer);
    assert_eq!(lift.vertex_count(), 6);
    assert!(lift.is_symmetric());
    assert!(lift.row_sums().iter().all(|&s| s == 3));
}

#[test]
fn relative_spectrum() {
    let d = dumbbell();
    let report = lift_spectrum(&d.b, &d.irreps, &d.stabilizer, &Tolerances::default()).unwrap();
    let (s3, s7) = (3f64.sqrt(), 7f64.sqrt());
    let expected = reals(&[1.0, -s3, s3, -s7, s7, 3.0]);
    assert!(nearest_multiset_distance(&report.values, &expected).unwrap() <= 1e-12);

    let ranks: Vec<usize> = d
        .irreps
        .irreps()
        .iter()
        .map(|r| subgroup_sum(r, &d.stabilizer, DEFAULT_RANK_TOL).rank)
        .collect();
    assert_eq!(ranks, vec![1, 0, 1]);
}

#[test]
fn irrep_spectra() {
    let d = dumbbell();
    let (s3, s7) = (3f64.sqrt(), 7f64.sqrt());
    let expected = [
        reals(&[1.0, 3.0]),
        reals(&[-3.0, -1.0]),
        reals(&[-s7, -s3, s3, s7]),
    ];
    for (index, want) in expected.iter().enumerate() {
        let m = rho_image(&d.b, &d.irreps, index).matrix;
        let eig = liftspec::linalg::eig_dense(&m, true, 1e-12).unwrap();
        assert!(nearest_multiset_distance(&eig.values, want).unwrap() <= 1e-12);
    }
}

#[test]
fn regular_spectrum_both_ways() {
    let d = dumbbell();
    let (s3, s7) = (3f64.sqrt(), 7f64.sqrt());
    let expected = reals(&[3.0, s7, s7, s3, s3, 1.0, -1.0, -s3, -s3, -s7, -s7, -3.0]);
    let trivial = SubgroupContext::trivial(d.group.clone());
    let via_irreps = lift_spectrum(&d.b, &d.irreps, &trivial, &Tolerances::default()).unwrap();
    let characters = regular_spectrum_via_characters(&d.b, &d.irreps).unwrap();
    assert!(nearest_multiset_distance(&via_irreps.values, &expected).unwrap() <= 1e-12);
    assert!(nearest_multiset_distance(&characters.values, &expected).unwrap() <= 1e-9);
    assert!(nearest_multiset_distance(&characters.values, &via_irreps.values).unwrap() <= 1e-7);
}

#[test]
fn group_algebra_traces() {
    let d = dumbbell();
    let g = &d.group;
    let (a, b) = (element(g, "(2 3)"), element(g, "(1 2)"));
    let (ab, ba) = (g.mul(a, b), g.mul(b, a));
    let traces = power_traces(&d.b, 4, g).unwrap();

    assert_eq!(traces[1].integer_terms().unwrap(), vec![(0, 10)]);
    let mut third = traces[2].integer_terms().unwrap();
    third.sort();
    let mut want = vec![(a, 14), (b, 14)];
    want.sort();
    assert_eq!(third, want);

    // direct convolution splits the 16 evenly between the two 3-cycles
    let expected =
        GroupAlgebraElement::from_terms([(0, real(66.0)), (ab, real(8.0)), (ba, real(8.0))]);
    assert_eq!(traces[3], expected);
    assert_eq!(g.element(ab).to_string(), "(1 2 3)");

    // class sums agree with 66e + 16gh: 66 on the identity, 16 on the 3-cycles
    let classes: Vec<Vec<usize>> = g
        .conjugacy_classes()
        .into_iter()
        .map(|c| c.members)
        .collect();
    let sums = traces[3].class_sums(&classes);
    let three_cycles = classes.iter().position(|c| c.contains(&ab)).unwrap();
    let identity = classes.iter().position(|c| c.contains(&0)).unwrap();
    assert_eq!(sums[identity], real(66.0));
    assert_eq!(sums[three_cycles], real(16.0));
    let written = GroupAlgebraElement::from_terms([(0, real(66.0)), (ab, real(16.0))]);
    for rho in d.irreps.irreps() {
        assert!(
            (apply_character(rho.character(), &written)
                - apply_character(rho.character(), &traces[3]))
            .norm()
                < 1e-12
        );
    }
}

#[test]
fn sigma_power_system() {
    let d = dumbbell();
    let traces = power_traces(&d.b, 4, &d.group).unwrap();
    let sigma = d.irreps.irreps()[2].character();
    let sums: Vec<Complex64> = traces.iter().map(|t| apply_character(sigma, t)).collect();
    for (got, want) in sums.iter().zip([0.0, 20.0, 0.0, 116.0]) {
        assert!((got - real(want)).norm() < 1e-12);
    }
    let roots = power_sums_to_roots(&sums).unwrap();
    let (s3, s7) = (3f64.sqrt(), 7f64.sqrt());
    assert!(nearest_multiset_distance(&roots, &reals(&[-s7, -s3, s3, s7])).unwrap() < 1e-12);
}

#[test]
fn identity_coefficient() {
    let d = dumbbell();
    for (u, l, want) in [(0, 1, 0.0), (0, 2, 5.0), (1, 2, 5.0), (0, 4, 33.0)] {
        let got = coefficient_of_identity(&d.b, &d.irreps, u, l).unwrap();
        assert!((got - real(want)).norm() < 1e-9, "u={u} l={l}: {got}");
    }
}

fn parallel(a: &[Complex64], b: &[f64]) -> bool {
    let pivot = b.iter().position(|x| *x != 0.0).unwrap();
    let scale = a[pivot] / b[pivot];
    scale.norm() > 1e-9 && a.iter().zip(b).all(|(x, y)| (x - scale * y).norm() <= 1e-9)
}

#[test]
fn eigenvector_columns() {
    let d = dumbbell();
    let sh = build_sh(&d.irreps, &d.stabilizer, 2);
    for r in 0..6 {
        let col = if r < 3 { 0 } else { 1 };
        assert_eq!(sh[(r, col)], real(2.0));
    }

    let bundle = lift_eigenvectors(&d.b, &d.irreps, &d.stabilizer, &Tolerances::default()).unwrap();
    let iota: Vec<_> = bundle.columns.iter().filter(|c| c.irrep == 0).collect();
    let top = iota
        .iter()
        .find(|c| (c.eigenvalue - real(3.0)).norm() < 1e-12)
        .unwrap();
    let one = iota
        .iter()
        .find(|c| (c.eigenvalue - real(1.0)).norm() < 1e-12)
        .unwrap();
    assert!(parallel(top.vector.as_slice(), &[1.0; 6]));
    assert!(parallel(
        one.vector.as_slice(),
        &[-1.0, -1.0, -1.0, 1.0, 1.0, 1.0]
    ));
    assert!(bundle
        .columns
        .iter()
        .filter(|c| c.irrep == 1)
        .all(|c| c.zero));

    let minus_sqrt3 = real(-3f64.sqrt());
    for (a, b) in [(5, 9), (8, 12)] {
        let (x, y) = (&bundle.columns[a - 1].vector, &bundle.columns[b - 1].vector);
        assert!((y - x * minus_sqrt3).iter().all(|z| z.norm() <= 1e-9));
    }
    assert_eq!(bundle.selected.len(), 6);
    assert!(bundle.max_residual <= 1e-8);
}
