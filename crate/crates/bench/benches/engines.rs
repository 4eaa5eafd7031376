use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rydsim_core::classical::{KmcSystem, NeighborTable, ProbabilityVector, RateGenerator};
use rydsim_core::devices::{build_gas_switch, transport_chain, ChainScale, GasSwitchSpec};
use rydsim_core::quantum::{lindblad_rhs, DensityMatrix, Hamiltonian};
use rydsim_core::{Configuration, DetuningSchedule, SimParams};

fn lindblad(c: &mut Criterion) {
    let params = SimParams::dimensionless(1.0, 0.003).unwrap();
    let mut group = c.benchmark_group("lindblad_rhs");
    for n in [4, 6] {
        let dev = transport_chain(n, ChainScale::default()).unwrap();
        let ham = Hamiltonian::build(&dev.network, dev.network.static_detunings(), 1.0).unwrap();
        let rho = DensityMatrix::maximally_mixed(n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| lindblad_rhs(&rho, &ham, &params).unwrap())
        });
    }
    group.finish();
}

fn rate_propagation(c: &mut Criterion) {
    let params = SimParams::dimensionless(1.0, 0.003).unwrap();
    let dev = transport_chain(10, ChainScale::default()).unwrap();
    let generator =
        RateGenerator::build(&dev.network, &params, dev.network.static_detunings()).unwrap();
    c.bench_function("classical_exact_n10_t1", |b| {
        b.iter(|| {
            let mut p = ProbabilityVector::from_configuration(&dev.initial).unwrap();
            p.propagate(&generator, 1.0, 0.005).unwrap();
            p
        })
    });
}

fn gillespie(c: &mut Criterion) {
    let spec = GasSwitchSpec::desk_scale();
    let dev = build_gas_switch(&spec, true, 1, 0).unwrap();
    let params = spec.params().unwrap();
    let floor = 1e-3 * params.omega().min(params.gamma());
    let table = NeighborTable::build(&dev.network, floor).unwrap();
    let schedule = DetuningSchedule::empty();
    let system = KmcSystem::new(&dev.network, &table, params, &schedule).unwrap();
    let c0 = Configuration::ground(dev.network.len());
    let mut stream = 0u64;
    c.bench_function("gillespie_desk_gas_t10", |b| {
        b.iter(|| {
            stream += 1;
            system.run_seeded(&c0, 10.0, 7, stream).unwrap()
        })
    });
}

criterion_group!(benches, lindblad, rate_propagation, gillespie);
criterion_main!(benches);
