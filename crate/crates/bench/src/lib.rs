//! Benchmark workloads: generated systems paired with the problem to solve.

use ruletree::generators::{gen_family, random_system, Family, FamilySpec, RandomConstraints};
use ruletree::{ProblemKind, RuleSystem};

pub struct Workload {
    pub name: String,
    pub system: RuleSystem,
    pub problem: ProblemKind,
}

fn family(f: Family, n: usize, d: usize, k: usize, problem: ProblemKind) -> Workload {
    Workload {
        name: format!("{f}_{n}_{d}_{k}_{problem}"),
        system: gen_family(&FamilySpec::new(f, n, d, k))
            .expect("valid family parameters")
            .system,
        problem,
    }
}

pub fn solver_workloads() -> Vec<Workload> {
    let mut out = vec![
        family(Family::Cyclic, 6, 2, 2, ProblemKind::SR),
        family(Family::DistinctDecisions, 6, 3, 3, ProblemKind::ESR),
        family(Family::DistinctDecisions, 5, 2, 3, ProblemKind::EAR),
        family(Family::BlockEar, 8, 2, 2, ProblemKind::EAR),
        family(Family::RecursiveEsr, 8, 2, 2, ProblemKind::ESR),
    ];
    let constraints = RandomConstraints::default();
    for seed in 0..2 {
        out.push(Workload {
            name: format!("random_6_3_3_seed{seed}_EAD"),
            system: random_system(6, 3, 3, seed, &constraints).expect("random system"),
            problem: ProblemKind::EAD,
        });
    }
    out
}
