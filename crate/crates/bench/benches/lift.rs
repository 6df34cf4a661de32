use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use liftspec::characters::regular_spectrum_via_characters;
use liftspec::spectral::oracle_spectrum;
use liftspec::sweep::{generate_instances, standard_pool, SweepConfig};
use liftspec::{
    build_base_matrix, builtin_irreps, compute_irreps, lift_eigenvectors, lift_spectrum,
    FiniteGroup, GroupFamily, Permutation, SubgroupContext, Tolerances, VoltageGraph,
    DEFAULT_ORDER_CAP,
};

fn dumbbell(c: &mut Criterion) {
    let (group, irreps) = builtin_irreps(GroupFamily::Sym3, 0).unwrap();
    let at = |text: &str| {
        group
            .index_of(&Permutation::parse(text, 3).unwrap())
            .unwrap()
    };
    let graph = VoltageGraph::undirected(
        vec!["u".into(), "v".into()],
        &[(0, 0, at("(2 3)")), (0, 1, 0), (1, 1, at("(1 2)"))],
        &group,
    )
    .unwrap();
    let b = build_base_matrix(&graph);
    let ctx = SubgroupContext::new(group.clone(), &group.stabilizer(1).unwrap()).unwrap();
    let regular = SubgroupContext::trivial(group.clone());
    let tol = Tolerances::default();

    let mut g = c.benchmark_group("dumbbell");
    g.bench_function("relative spectrum", |bench| {
        bench.iter(|| lift_spectrum(black_box(&b), &irreps, &ctx, &tol).unwrap())
    });
    g.bench_function("relative eigenvectors", |bench| {
        bench.iter(|| lift_eigenvectors(black_box(&b), &irreps, &ctx, &tol).unwrap())
    });
    g.bench_function("regular spectrum", |bench| {
        bench.iter(|| lift_spectrum(black_box(&b), &irreps, &regular, &tol).unwrap())
    });
    g.bench_function("regular via characters", |bench| {
        bench.iter(|| regular_spectrum_via_characters(black_box(&b), &irreps).unwrap())
    });
    g.finish();
}

fn decomposition(c: &mut Criterion) {
    let gens = [
        Permutation::parse("(1 2)", 4).unwrap(),
        Permutation::parse("(1 2 3 4)", 4).unwrap(),
    ];
    let sym4 = Arc::new(FiniteGroup::generate(4, &gens, DEFAULT_ORDER_CAP).unwrap());
    c.bench_function("compute_irreps Sym(4)", |bench| {
        bench.iter_batched(
            || sym4.clone(),
            |g| compute_irreps(g, 3, 1e-9).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn method_against_oracle(c: &mut Criterion) {
    let pool = standard_pool(1).unwrap();
    let sym4 = pool.iter().position(|p| p.group().order() == 24).unwrap();
    let config = SweepConfig {
        max_vertices: 5,
        ..SweepConfig::default()
    };
    // the largest lift among the draws
    let instance = generate_instances(&pool[sym4..=sym4], 64, 9, &config)
        .into_iter()
        .max_by_key(|i| i.graph.vertex_count() * i.ctx.index())
        .unwrap();
    let b = build_base_matrix(&instance.graph);
    let tol = Tolerances::default();

    let mut g = c.benchmark_group(format!(
        "random Sym(4) lift, kn = {}",
        instance.graph.vertex_count() * instance.ctx.index()
    ));
    g.bench_function("irrep method", |bench| {
        bench.iter(|| lift_spectrum(black_box(&b), &instance.irreps, &instance.ctx, &tol).unwrap())
    });
    g.bench_function("dense oracle", |bench| {
        bench.iter(|| oracle_spectrum(black_box(&instance.graph), &instance.ctx))
    });
    g.finish();
}

criterion_group!(benches, dumbbell, decomposition, method_against_oracle);
criterion_main!(benches);
