//! Random functional-graph suites: the inclusion chain, invariance of Stab,
//! surjectivity forcing Stab = Attrac, and brute-force maximality of Stab
//! over all subsets on small systems.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use stabint_core::dynsys::{analyze, check_godelle, FiniteDynSys};
use std::collections::BTreeSet;

fn random_system(r: &mut StdRng, max_nodes: usize) -> FiniteDynSys {
    let n = r.gen_range(1..=max_nodes);
    let targets: Vec<usize> = (0..n).map(|_| r.gen_range(0..n)).collect();
    FiniteDynSys::from_fn(n, |i| targets[i])
}

fn random_permutation(r: &mut StdRng, max_nodes: usize) -> FiniteDynSys {
    let n = r.gen_range(1..=max_nodes);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = r.gen_range(0..=i);
        perm.swap(i, j);
    }
    FiniteDynSys::from_fn(n, |i| perm[i])
}

#[test]
fn random_systems_satisfy_the_classical_facts() {
    let mut r = StdRng::seed_from_u64(91);
    for _ in 0..100 {
        let sys = random_system(&mut r, 200);
        let g = check_godelle(&sys);
        assert!(g.inclusions_hold, "fix ⊆ per ⊆ stab ⊆ attrac");
        assert!(g.stab_invariant, "phi(stab) = stab");
        if g.surjective {
            assert!(g.stab_equals_attrac);
        }
        assert!(g.passes());
    }
}

#[test]
fn surjective_systems_have_stab_equal_attrac() {
    let mut r = StdRng::seed_from_u64(92);
    for _ in 0..50 {
        let sys = random_permutation(&mut r, 60);
        let g = check_godelle(&sys);
        assert!(g.surjective);
        assert!(g.stab_equals_attrac);
    }
}

/// Stab is the largest subset with phi(B) = B: on systems small enough to
/// enumerate every subset, no phi-invariant subset escapes it.
#[test]
fn stab_is_maximal_by_exhaustive_subset_search() {
    let mut r = StdRng::seed_from_u64(93);
    for _ in 0..40 {
        let sys = random_system(&mut r, 12);
        let n = sys.len();
        let report = analyze(&sys);
        for mask in 0u32..(1 << n) {
            let b: BTreeSet<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if sys.image(&b) == b {
                assert!(
                    b.is_subset(&report.stab),
                    "phi-invariant subset outside stab"
                );
            }
        }
        // and stab itself is phi-invariant
        assert_eq!(sys.image(&report.stab), report.stab);
    }
}

#[test]
fn attrac_is_stationary_beyond_system_size() {
    let mut r = StdRng::seed_from_u64(94);
    for _ in 0..30 {
        let sys = random_system(&mut r, 80);
        let report = analyze(&sys);
        let mut cur: BTreeSet<usize> = (0..sys.len()).collect();
        for _ in 0..2 * sys.len() {
            cur = sys.image(&cur);
        }
        assert_eq!(report.attrac, cur);
    }
}
