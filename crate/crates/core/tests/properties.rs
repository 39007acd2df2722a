//! Property tests. Random instances are drawn from a proptest-chosen seed so
//! shrinking acts on sizes and seeds.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use interlace::linalg::{self, HermitianMatrix, C64};
use interlace::mixedchar::{affine_in_each_argument_check, inclusion_exclusion, mixed_char, mixed_char_poly};
use interlace::partition::{self, enumerate_assignments, lift, partition_search, Assignment, LiftedSystem, SearchOptions};
use interlace::paving::{choose_r, dilate, verify_paving};
use interlace::realstable::{barrier, PsdSystem};
use interlace::unipoly::{is_nice_family, nice_family_falsifier, real_roots, PolyFamily, RealPoly};
use interlace::{sample, Config};

fn cfg() -> Config {
    Config::default()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn system(d: usize, mats: Vec<HermitianMatrix>) -> PsdSystem {
    PsdSystem::new(d, mats, &cfg().tol).expect("valid system")
}

fn random_psd_system(seed: u64, d: usize, m: usize) -> PsdSystem {
    let mut g = rng(seed);
    let mats = (0..m)
        .map(|_| {
            let rank = g.gen_range(1..=d);
            sample::psd(&mut g, d, rank)
        })
        .collect();
    system(d, mats)
}

fn rank_one_system(seed: u64, d: usize, m: usize) -> PsdSystem {
    let mut g = rng(seed);
    let mats = (0..m)
        .map(|_| {
            let u: Vec<C64> = sample::gaussian_vector(&mut g, d).iter().map(|c| c * 0.5).collect();
            HermitianMatrix::outer(&u)
        })
        .collect();
    system(d, mats)
}

fn coeff_tol(p: &RealPoly) -> f64 {
    1e-9 * p.max_abs_coeff().max(1.0)
}

fn objective(sys: &PsdSystem, blocks: &[Vec<usize>]) -> f64 {
    blocks
        .iter()
        .map(|b| linalg::hermitian_norm(&HermitianMatrix::sum(sys.dim(), b.iter().map(|&i| &sys.matrices()[i]))))
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mu_is_invariant_under_permutation(seed in any::<u64>(), d in 1usize..=3, m in 1usize..=4) {
        let sys = random_psd_system(seed, d, m);
        let mut perm: Vec<usize> = (0..m).collect();
        perm.reverse();
        perm.rotate_left(seed as usize % m);
        let a = mixed_char_poly(&sys, &cfg()).unwrap().0;
        let b = mixed_char_poly(&sys.permuted(&perm), &cfg()).unwrap().0;
        prop_assert!(a.max_coeff_deviation(&b) <= coeff_tol(&a));
    }

    #[test]
    fn mu_is_invariant_under_unitary_conjugation(seed in any::<u64>(), d in 1usize..=3, m in 1usize..=4) {
        let sys = random_psd_system(seed, d, m);
        let u = sample::unitary(&mut rng(seed ^ 0x5555), d);
        let rotated = system(d, sys.matrices().iter().map(|a| a.conjugate_by(&u)).collect());
        let a = mixed_char_poly(&sys, &cfg()).unwrap().0;
        let b = mixed_char_poly(&rotated, &cfg()).unwrap().0;
        prop_assert!(a.max_coeff_deviation(&b) <= coeff_tol(&a));
    }

    #[test]
    fn mu_is_monic_real_rooted_with_trace_coefficient(seed in any::<u64>(), d in 1usize..=3, m in 1usize..=4) {
        let sys = random_psd_system(seed, d, m);
        let res = mixed_char(&sys, &cfg()).unwrap();
        prop_assert_eq!(res.mu.degree(), d);
        prop_assert_eq!(res.mu.coeffs()[d], 1.0);
        prop_assert!((res.mu.coeffs()[d - 1] + sys.sum().trace()).abs() <= 1e-9);
        prop_assert_eq!(res.roots.len(), d);
        // PSD inputs give nonnegative roots
        prop_assert!(res.roots.iter().all(|&r| r >= -1e-7));
    }

    #[test]
    fn inclusion_exclusion_matches_interpolation(seed in any::<u64>(), d in 1usize..=4, m in 1usize..=6) {
        let sys = rank_one_system(seed, d, m);
        let fast = inclusion_exclusion(&sys, &cfg()).unwrap();
        let mut c = cfg();
        c.budget.subsets = 0;
        let (slow, method, _) = mixed_char_poly(&sys, &c).unwrap();
        prop_assert_eq!(method, interlace::mixedchar::Method::Interpolation);
        prop_assert!(fast.max_coeff_deviation(&slow) <= coeff_tol(&slow));
    }

    #[test]
    fn mu_is_affine_in_each_slot(seed in any::<u64>(), d in 1usize..=3, m in 1usize..=3, t in 0.0f64..=1.0) {
        let sys = random_psd_system(seed, d, m);
        let mut g = rng(seed.wrapping_add(1));
        let a = sample::psd(&mut g, d, d);
        let b = sample::psd(&mut g, d, 1);
        let check = affine_in_each_argument_check(&sys, (seed as usize) % m, &a, &b, t, &cfg()).unwrap();
        prop_assert!(check.holds, "deviation {}", check.deviation);
    }

    #[test]
    fn dilation_is_a_projection(seed in any::<u64>(), m in 1usize..=5) {
        let t = sample::selfadjoint_contraction(&mut rng(seed), m);
        let dil = dilate(&t, &cfg()).unwrap();
        prop_assert_eq!(dil.p.dim(), 2 * m);
        prop_assert!(dil.projection_defect() <= 1e-9);
        // top-left block is (I + T)/2
        for i in 0..m {
            for j in 0..m {
                let expect = (if i == j { 1.0 } else { 0.0 } + t.get(i, j)) * 0.5;
                prop_assert!((dil.p.get(i, j) - expect).norm() <= 1e-9);
            }
        }
    }

    #[test]
    fn dilation_of_zero_diagonal_contraction_has_half_diagonal(seed in any::<u64>(), m in 2usize..=5) {
        let t = sample::zero_diagonal_hermitian(&mut rng(seed), m);
        let dil = dilate(&t, &cfg()).unwrap();
        prop_assert!(dil.diagonal_defect() <= 1e-9);
        prop_assert!((dil.p.trace() - m as f64).abs() <= 1e-9);
    }

    #[test]
    fn lift_is_block_diagonal_with_scaled_block_sums(seed in any::<u64>(), d in 1usize..=2, m in 1usize..=4, r in 1usize..=3) {
        let base = random_psd_system(seed, d, m);
        let mut g = rng(seed ^ 0xabc);
        let omega: Vec<usize> = (0..m).map(|_| g.gen_range(1..=r)).collect();
        let assignment = Assignment::new(r, omega.clone()).unwrap();
        let l = LiftedSystem::new(base.clone(), r).unwrap();
        let big = lift(&l, &assignment).unwrap();
        prop_assert_eq!(big.dim(), r * d);
        prop_assert!((big.trace() - r as f64 * base.sum().trace()).abs() <= 1e-9);
        for (j, block) in assignment.blocks().iter().enumerate() {
            let idx: Vec<usize> = (j * d..(j + 1) * d).collect();
            let expect = HermitianMatrix::sum(d, block.iter().map(|&i| &base.matrices()[i])).scale(r as f64);
            let diff = big.principal_submatrix(&idx).sub(&expect);
            prop_assert!(linalg::hermitian_norm(&diff) <= 1e-9);
        }
        // off-diagonal blocks vanish
        for a in 0..r * d {
            for b in 0..r * d {
                if a / d != b / d {
                    prop_assert_eq!(big.get(a, b).norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn canonical_search_matches_full_enumeration(seed in any::<u64>(), d in 1usize..=2, m in 2usize..=6, r in 2usize..=3) {
        let sys = system(d, sample::rank_one_identity(&mut rng(seed), d, m.max(d)));
        let res = partition_search(&sys, r, &SearchOptions::exhaustive(1_000_000)).unwrap();
        let brute = enumerate_assignments(sys.m(), r, 1_000_000)
            .unwrap()
            .map(|a| objective(&sys, &a.blocks()))
            .fold(f64::INFINITY, f64::min);
        prop_assert!((res.objective - brute).abs() <= 1e-12);
        prop_assert!((objective(&sys, &res.best.blocks()) - res.objective).abs() <= 1e-12);
        prop_assert!(res.objective <= partition::partition_bound(r, res.c) + 1e-9);
    }

    #[test]
    fn local_search_is_deterministic_and_never_beats_exhaustive(seed in any::<u64>(), m in 3usize..=7) {
        let sys = system(2, sample::rank_one_identity(&mut rng(seed), 2, m));
        let exact = partition_search(&sys, 2, &SearchOptions::exhaustive(1_000_000)).unwrap();
        let a = partition_search(&sys, 2, &SearchOptions::local(20_000, seed)).unwrap();
        let b = partition_search(&sys, 2, &SearchOptions::local(20_000, seed)).unwrap();
        prop_assert_eq!(a.best.omega(), b.best.omega());
        prop_assert!(a.objective >= exact.objective - 1e-12);
    }

    #[test]
    fn choose_r_is_minimal(eps in 0.05f64..4.0) {
        let lhs = |r: usize| 2.0 * (1.0 / (r as f64).sqrt() + std::f64::consts::FRAC_1_SQRT_2).powi(2) - 1.0;
        let r = choose_r(eps).unwrap();
        prop_assert!(lhs(r) <= eps + 1e-12);
        prop_assert!(r == 1 || lhs(r - 1) > eps + 1e-12);
    }

    #[test]
    fn compressions_never_exceed_the_operator_norm(seed in any::<u64>(), n in 2usize..=6) {
        let mut g = rng(seed);
        let t = sample::zero_diagonal(&mut g, n);
        let mut blocks = vec![Vec::new(); 3];
        for i in 0..n {
            blocks[g.gen_range(0..3)].push(i);
        }
        let rep = verify_paving(&t, &blocks, None).unwrap();
        prop_assert!(rep.max_ratio <= 1.0 + 1e-12);
        let whole = verify_paving(&t, &[(0..n).collect()], Some(1.0)).unwrap();
        prop_assert!((whole.max_ratio - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn real_roots_recovers_simple_roots(mut roots in prop::collection::vec(-5.0f64..5.0, 1..=6)) {
        roots.sort_by(|a, b| b.total_cmp(a));
        roots.dedup_by(|a, b| (*a - *b).abs() < 1e-2);
        let found = real_roots(&RealPoly::from_roots(&roots), 1e-7).unwrap();
        prop_assert_eq!(found.len(), roots.len());
        for (a, b) in found.iter().zip(&roots) {
            prop_assert!((a - b).abs() <= 1e-6);
        }
    }

    #[test]
    fn interlacing_families_are_nice(seed in any::<u64>(), n in 1usize..=4, k in 2usize..=4) {
        // member roots drawn from disjoint windows [2j, 2j + 1]
        let mut g = rng(seed);
        let members: Vec<RealPoly> = (0..k)
            .map(|_| RealPoly::from_roots(&(0..n).map(|j| 2.0 * j as f64 + g.gen::<f64>()).collect::<Vec<_>>()))
            .collect();
        let fam = PolyFamily::new(members).unwrap();
        prop_assert!(is_nice_family(&fam, 1e-7, 1e-8).nice);
        prop_assert!(nice_family_falsifier(&fam, 200, seed, 1e-7).is_none());
    }

    #[test]
    fn barrier_is_positive_and_nonincreasing(seed in any::<u64>(), d in 1usize..=3, m in 1usize..=4, step in 0.0f64..3.0) {
        let mut g = rng(seed);
        let sys = system(d, (0..m).map(|_| sample::psd(&mut g, d, d)).collect());
        let x: Vec<f64> = (0..m).map(|_| g.gen_range(0.5..2.0)).collect();
        let j = g.gen_range(0..m);
        let mut y = x.clone();
        y[g.gen_range(0..m)] += step;
        let (fx, fy) = (barrier(&sys, &x, j).unwrap(), barrier(&sys, &y, j).unwrap());
        prop_assert!(fx > 0.0);
        prop_assert!(fy <= fx + 1e-12);
    }
}
