use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use geocommittee::{random_committee, solve, Algorithm, DistanceMatrix, Swarm, SwarmConfig, SolverConfig};
use geocommittee_bench::social_instance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fitness(c: &mut Criterion) {
    let instance = social_instance(2000, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut group = c.benchmark_group("fitness");
    for k in [3, 5, 10] {
        let committees: Vec<_> = (0..64)
            .map(|_| random_committee(instance.node_count(), k, &mut rng).unwrap())
            .collect();
        group.bench_with_input(BenchmarkId::from_parameter(k), &committees, |b, cs| {
            b.iter(|| cs.iter().map(|c| instance.fitness(c).unwrap().value).sum::<f64>())
        });
    }
    group.finish();
}

fn distances(c: &mut Criterion) {
    let instance = social_instance(2000, 3);
    let g = instance.graph();
    c.bench_function("bfs_single_source", |b| b.iter(|| g.shortest_path_lengths(black_box(0)).unwrap()));
    let mut group = c.benchmark_group("matrix");
    group.sample_size(10);
    group.bench_function("build_2000", |b| b.iter(|| DistanceMatrix::build(g).unwrap()));
    group.finish();
}

fn swarm_step(c: &mut Criterion) {
    let instance = social_instance(4000, 4);
    let cfg = SwarmConfig::default();
    let mut swarm = Swarm::new(&instance, 4, &cfg, ChaCha8Rng::seed_from_u64(5)).unwrap();
    c.bench_function("swarm_step_4000", |b| b.iter(|| swarm.step(&instance, &cfg).unwrap()));
}

fn solvers(c: &mut Criterion) {
    let instance = social_instance(1000, 6);
    let mut group = c.benchmark_group("solve_1000_nodes");
    group.sample_size(10);
    for algorithm in Algorithm::ALL {
        let mut cfg = SolverConfig::new(algorithm, 4, 7);
        cfg.swarm.max_iterations = 100;
        group.bench_function(algorithm.tag(), |b| b.iter(|| solve(&instance, &cfg).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, fitness, distances, swarm_step, solvers);
criterion_main!(benches);
