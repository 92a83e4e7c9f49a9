//! Hot-path benchmarks: the pointwise coupling pass, one right-hand-side
//! evaluation per coupling family, a full rk4 step, and a reduced march.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nldirac::evolve::rk4_step;
use nldirac::solutions::{expected_assignment, CatalogRow, ClosedFormSolution, RowConstants};
use nldirac::{
    coupling_fields, rhs, Complex64, Couplings, DerivativeOperator, EquationId, Grid2D,
    IvpOptions, ModelSpec, RadicandPolicy, SpinorState, StencilOrder,
};

const SIDE: usize = 64;

fn packet() -> SpinorState {
    let grid = Grid2D::periodic_box(SIDE, -8.0, 8.0).expect("valid box");
    SpinorState::from_fn(grid, 0.0, |x, y| {
        let env = (-(x * x + y * y) / 4.0).exp();
        (Complex64::new(env, 0.3 * env), Complex64::new(0.5 * env, -0.2 * env))
    })
}

fn family_members() -> Vec<ModelSpec> {
    let policy = RadicandPolicy::SignedSqrt;
    [
        (
            EquationId::Eq5,
            Couplings::FourVector { alpha_s: 0.3, alpha_v: 0.2, alpha_u: 0.4, alpha_w: 0.5 },
        ),
        (EquationId::Eq7, Couplings::ThreeVector { alpha_s: 0.3, alpha_v: 0.2, alpha_w: 0.5 }),
        (
            EquationId::Eq12,
            Couplings::ComponentWise {
                alpha_plus: 0.3,
                alpha_minus: 0.2,
                beta_plus: 0.4,
                beta_minus: 0.5,
            },
        ),
        (
            EquationId::Eq9,
            Couplings::Quadratic { alpha_plus: 0.3, alpha_minus: 0.2, alpha_w: 0.4 },
        ),
    ]
    .into_iter()
    .map(|(eq, couplings)| ModelSpec::new(eq, 0.6, couplings, policy).expect("valid member"))
    .collect()
}

fn coupling_pass(c: &mut Criterion) {
    let state = packet();
    c.bench_function(&format!("couplings/{SIDE}x{SIDE}"), |b| {
        b.iter(|| {
            coupling_fields(
                black_box(state.plus()),
                black_box(state.minus()),
                RadicandPolicy::SignedSqrt,
            )
            .expect("smooth state")
        })
    });
}

fn rhs_per_family(c: &mut Criterion) {
    let state = packet();
    let op = DerivativeOperator::new(StencilOrder::Four);
    let mut group = c.benchmark_group(format!("rhs/{SIDE}x{SIDE}"));
    for spec in family_members() {
        group.bench_function(spec.equation.to_string(), |b| {
            b.iter(|| rhs(black_box(&spec), black_box(&state), &op).expect("smooth state"))
        });
    }
    group.finish();
}

fn rk4_step_cost(c: &mut Criterion) {
    let initial = packet();
    let op = DerivativeOperator::new(StencilOrder::Four);
    let spec = ModelSpec::new(
        EquationId::Eq12,
        0.6,
        Couplings::ComponentWise {
            alpha_plus: 0.3,
            alpha_minus: 0.2,
            beta_plus: 0.4,
            beta_minus: 0.5,
        },
        RadicandPolicy::SignedSqrt,
    )
    .expect("valid member");
    c.bench_function(&format!("rk4-step/{SIDE}x{SIDE}"), |b| {
        b.iter(|| {
            let mut state = initial.clone();
            rk4_step(&spec, &mut state, &op, black_box(1e-3)).expect("one stable step");
            state
        })
    });
}

fn reduced_march(c: &mut Criterion) {
    let solution =
        ClosedFormSolution::new(RowConstants::defaults(CatalogRow::Four)).expect("catalog row");
    let (chi0, _) = solution
        .evaluate(0.5)
        .expect("anchor inside the domain")
        .assigned(expected_assignment(CatalogRow::Four));
    let samples: Vec<f64> = (0..9).map(|j| 0.5 + j as f64 * (4.0 - 0.5) / 8.0).collect();
    let opts = IvpOptions::default();
    c.bench_function("reduce/row4-march", |b| {
        b.iter(|| {
            solution
                .system()
                .integrate(black_box((0.5, 4.0)), chi0, &samples, &opts)
                .expect("convergent march")
        })
    });
}

criterion_group!(kernels, coupling_pass, rhs_per_family, rk4_step_cost, reduced_march);
criterion_main!(kernels);
