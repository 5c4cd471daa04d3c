use ghwlab::defining::{
    class1_build, class2_build, class3_build, class3_membership_equivalence, class3_variant_build,
    DefiningSet, Elements, ThetaStrategy, TracePattern,
};
use ghwlab::enumerate::enumerate_subspaces;
use ghwlab::field::FieldContext;
use ghwlab::ghw::{lemma_checks, ButterflyTable, DualSearch, Limits};
use ghwlab::linalg::Subspace;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pow(q: u32, e: usize) -> usize {
    (q as usize).pow(e as u32)
}

#[test]
fn set_sizes() {
    for (q, m, k, h) in [
        (2, 4, 2, 0),
        (2, 4, 2, 1),
        (3, 3, 1, 2),
        (3, 4, 2, 2),
        (2, 6, 3, 1),
        (5, 2, 1, 3),
    ] {
        let set = class1_build(q, m, k, h, &ThetaStrategy::FirstCosets).unwrap();
        assert_eq!(
            set.len(),
            pow(q, m) - (h + 1) * pow(q, k),
            "{q} {m} {k} {h}"
        );
    }
    for (q, m, s, k, l) in [
        (2, 3, 1, 2, 1),
        (3, 2, 1, 2, 1),
        (2, 2, 1, 2, 1),
        (2, 4, 2, 2, 1),
        (2, 4, 1, 4, 2),
    ] {
        let set = class2_build(q, m, s, k, l).unwrap();
        assert_eq!(set.len(), (pow(q, m) - pow(q, s)) * (pow(q, k) - pow(q, l)));
    }
    for m in 2..=5 {
        assert_eq!(class3_build(m).unwrap().len(), 1 << (2 * m - 2));
    }
}

#[test]
fn butterfly_predicates_agree() {
    for m in 2..=4 {
        assert!(class3_membership_equivalence(m).unwrap(), "m={m}");
    }
}

#[test]
fn butterfly_variants_partition_the_plane() {
    for m in 2..=4 {
        let mut total = 0;
        let mut all = std::collections::HashSet::new();
        for p in TracePattern::ALL {
            let set = class3_variant_build(m, p).unwrap();
            total += set.len();
            all.extend(set.flattened());
        }
        assert_eq!(total, 1 << (2 * m));
        assert_eq!(all.len(), total);
    }
}

/// |D ∩ H^⊥| straight from Tr(h·d) over each basis vector of H.
fn brute_intersection(set: &DefiningSet, h: &Subspace) -> usize {
    let ctxs = set.ambient().contexts();
    let tr = |ctx: &FieldContext, u: &[u8], v: &[u8]| {
        let a = ctx.element(u.to_vec()).unwrap();
        let b = ctx.element(v.to_vec()).unwrap();
        ctx.trace_to_prime(&ctx.mul(&a, &b).unwrap()).unwrap() as u32
    };
    let q = set.ambient().q() as u32;
    set.flattened()
        .iter()
        .filter(|d| {
            h.basis().row_vectors().all(|g| {
                let mut at = 0;
                let mut total = 0;
                for ctx in &ctxs {
                    let n = ctx.degree();
                    total += tr(ctx, &g[at..at + n], &d[at..at + n]);
                    at += n;
                }
                total % q == 0
            })
        })
        .count()
}

#[test]
fn dual_membership_matches_trace_scan() {
    let sets = [
        class1_build(3, 3, 1, 2, &ThetaStrategy::FirstCosets).unwrap(),
        class2_build(2, 3, 1, 2, 1).unwrap(),
        class2_build(3, 2, 1, 2, 1).unwrap(),
        class3_build(2).unwrap(),
    ];
    for set in &sets {
        let n = set.ambient().dim();
        let q = set.ambient().q();
        let search = DualSearch::new(set, Subspace::zero(q, n)).unwrap();
        for r in 0..=n {
            for h in enumerate_subspaces(n, r, q).unwrap().iter().take(400) {
                assert_eq!(
                    search.count(&h),
                    brute_intersection(set, &h),
                    "{:?} {h}",
                    set.params()
                );
            }
        }
    }
}

#[test]
fn character_sum_exhaustive_small_m() {
    for m in 2..=3 {
        let set = class3_build(m).unwrap();
        let table = ButterflyTable::new(m).unwrap();
        let search = DualSearch::new(&set, Subspace::zero(2, 2 * m)).unwrap();
        let mut checked = 0;
        for r in 0..=2 * m {
            for h in enumerate_subspaces(2 * m, r, 2).unwrap().iter() {
                assert_eq!(
                    table.charsum(&h).unwrap(),
                    search.count(&h) as i64,
                    "m={m} {h}"
                );
                checked += 1;
            }
        }
        assert!(checked > 0);
    }
}

#[test]
fn character_sum_sampled_m4() {
    let m = 4;
    let set = class3_build(m).unwrap();
    let table = ButterflyTable::new(m).unwrap();
    let search = DualSearch::new(&set, Subspace::zero(2, 8)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..10_000 {
        let count = rng.gen_range(0..=8);
        let vectors: Vec<Vec<u8>> = (0..count)
            .map(|_| (0..8).map(|_| rng.gen_range(0..2)).collect())
            .collect();
        let h = Subspace::span(2, 8, &vectors).unwrap();
        assert_eq!(table.charsum(&h).unwrap(), search.count(&h) as i64, "{h}");
    }
}

#[test]
fn lemma_suite_has_no_violations() {
    let sets = [
        class1_build(3, 3, 1, 2, &ThetaStrategy::FirstCosets).unwrap(),
        class1_build(3, 4, 2, 2, &ThetaStrategy::FirstCosets).unwrap(),
        class1_build(2, 4, 2, 1, &ThetaStrategy::FirstCosets).unwrap(),
        class2_build(2, 3, 1, 2, 1).unwrap(),
        class2_build(3, 2, 1, 2, 1).unwrap(),
        class2_build(2, 2, 1, 2, 1).unwrap(),
        class3_build(2).unwrap(),
        class3_build(3).unwrap(),
    ];
    for set in &sets {
        let checks = lemma_checks(set, &Limits::forced()).unwrap();
        assert!(!checks.is_empty());
        for c in &checks {
            assert!(
                c.passed,
                "{:?}: {} {:?}",
                set.params(),
                c.name,
                c.violations
            );
            assert!(c.checked > 0);
        }
    }
}

#[test]
fn class1_elements_avoid_theta_cosets() {
    let set = class1_build(3, 4, 2, 2, &ThetaStrategy::FirstCosets).unwrap();
    let ctx = &set.ambient().contexts()[0].clone();
    let Elements::Univariate(elements) = set.elements() else {
        panic!("class 1 is univariate")
    };
    let ghwlab::defining::ClassParams::Class1(p) = set.params() else {
        unreachable!()
    };
    for x in elements {
        for t in &p.thetas {
            assert!(!ctx.is_in_subfield(&ctx.sub(x, t).unwrap(), 2).unwrap());
        }
    }
}
