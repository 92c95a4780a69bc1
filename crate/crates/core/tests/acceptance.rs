//! Acceptance gate: ten numbered criteria, one pass/fail line each.
//!
//! Every criterion prints `PASS [n] …` on success (visible with
//! `--nocapture`) or panics with `FAIL [n] …` carrying the first violation.

use resinv::gen::{circulant_sqrt, gaussian, harmonic, unit_columns};
use resinv::gia_select::{
    ellipsoid_projection_inradius, giannopoulos_select, grothendieck_pietsch_subset,
    main_theorem_select, sauer_shelah_extract, SignSet,
};
use resinv::matlin::{norm_2_to_1, Matrix, Weights};
use resinv::mss_select::{barrier_bound, expected_char_poly, g_poly, interlacing_greedy_select};
use resinv::oracle::{best_subset, binomial, Objective};
use resinv::volume_select::volume_exchange_select;

use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn subsets_of_size(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut sigma: Vec<usize> = (0..k).collect();
    loop {
        out.push(sigma.clone());
        // colex successor
        let mut advanced = false;
        for i in 0..k {
            let ceiling = if i + 1 < k { sigma[i + 1] } else { m };
            if sigma[i] + 1 < ceiling {
                sigma[i] += 1;
                for (j, slot) in sigma.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            return out;
        }
    }
}

/// [1] Circulant sharpness: every size-k restriction of √((m+1)I−J) has
/// s_min = √(m+1−k) to 1e-9, and all dual-basis leverages equal 2/(m+1).
#[test]
fn criterion_01_circulant_sharpness() {
    for m in [5usize, 8, 12] {
        let a = circulant_sqrt(m);
        for k in 1..=m {
            let want = ((m + 1 - k) as f64).sqrt();
            for sigma in subsets_of_size(m, k) {
                let cert = a.restrict_certificate(&sigma);
                assert!(
                    (cert.smin - want).abs() <= 1e-9,
                    "FAIL [1] m={m} k={k} sigma={sigma:?}: smin {} != {want}",
                    cert.smin
                );
            }
        }
        let omega: Vec<usize> = (0..m).collect();
        let db = a.dual_basis(&omega).unwrap();
        for (j, &l) in db.leverage.iter().enumerate() {
            assert!(
                (l - 2.0 / (m as f64 + 1.0)).abs() <= 1e-9,
                "FAIL [1] m={m}: leverage {j} = {l}"
            );
        }
    }
    println!("PASS [1] circulant sharpness: s_min = sqrt(m+1-k) and leverages 2/(m+1) for m in {{5,8,12}}");
}

/// [2] Interlacing greedy certificate: s_min(AJ_σ)² ≥ γ/m on 50 random
/// instances with n, m ≤ 10 and k < rank.
#[test]
fn criterion_02_interlacing_certificate() {
    let mut rng = StdRng::seed_from_u64(2);
    for trial in 0..50u64 {
        let n = rng.random_range(3..=10usize);
        let m = rng.random_range(3..=10usize);
        let a = gaussian(n, m, 20_000 + trial);
        let rank = a.rank();
        if rank < 2 {
            continue;
        }
        let k = rng.random_range(1..rank);
        let sel = interlacing_greedy_select(&a, k)
            .unwrap_or_else(|e| panic!("FAIL [2] trial {trial} (n={n}, m={m}, k={k}): {e}"));
        let gamma = resinv::mss_select::gamma(&a, k).unwrap();
        assert!(
            sel.smin * sel.smin >= gamma / m as f64 - 1e-9,
            "FAIL [2] trial {trial}: smin^2 {} < gamma/m {}",
            sel.smin * sel.smin,
            gamma / m as f64
        );
    }
    println!("PASS [2] interlacing greedy: smin^2 >= gamma/m on 50 random instances");
}

fn random_spectra(count: usize) -> Vec<(Matrix, usize)> {
    let mut rng = StdRng::seed_from_u64(3);
    (0..count)
        .map(|i| {
            let n = rng.random_range(2..=9usize);
            let m = rng.random_range(2..=9usize);
            let k = rng.random_range(1..=n.min(8));
            (gaussian(n, m, 30_000 + i as u64), k)
        })
        .collect()
}

/// [3] Polynomial identity q = x^{n−k}·g: the two expansion routes agree
/// coefficientwise to relative 1e-8 on 100 random spectra with k ≤ 8.
#[test]
fn criterion_03_polynomial_identity() {
    for (i, (a, k)) in random_spectra(100).iter().enumerate() {
        // expected_char_poly internally errors when the operator-product and
        // elementary-symmetric routes disagree beyond relative 1e-8
        let q = expected_char_poly(a, *k).unwrap_or_else(|e| panic!("FAIL [3] spectrum {i}: {e}"));
        let g = g_poly(&a.singular_values().unwrap(), a.rank(), *k);
        let shifted = g.shift_up(a.nrows() - k);
        let rel = q.rel_distance(&shifted);
        assert!(
            rel <= 1e-8,
            "FAIL [3] spectrum {i}: q vs x^(n-k)g rel {rel}"
        );
    }
    println!("PASS [3] polynomial identity q = x^(n-k) g to relative 1e-8 on 100 spectra");
}

/// [4] Barrier chain: min root(g) ≥ refined bound ≥ γ with slack ≤ 1e-9 on
/// the same 100 spectra; at the identity all three collapse to (√n−√k)².
#[test]
fn criterion_04_barrier_chain() {
    for (i, (a, k)) in random_spectra(100).iter().enumerate() {
        if *k >= a.rank() {
            continue;
        }
        let g = g_poly(&a.singular_values().unwrap(), a.rank(), *k);
        let min_root = g.real_roots(1e-6).unwrap()[0];
        let b = barrier_bound(a, *k).unwrap();
        assert!(
            min_root >= b.value - 1e-9 && b.value >= b.gamma - 1e-9,
            "FAIL [4] spectrum {i}: chain {min_root} / {} / {}",
            b.value,
            b.gamma
        );
    }
    for n in [4usize, 9] {
        let a = Matrix::identity(n);
        for k in 1..n {
            let expect = ((n as f64).sqrt() - (k as f64).sqrt()).powi(2);
            let g = g_poly(&a.singular_values().unwrap(), n, k);
            let min_root = g.real_roots(1e-6).unwrap()[0];
            let b = barrier_bound(&a, k).unwrap();
            // With equal singular values the convexity step in the barrier
            // argument is tight, so the refined bound and gamma both equal
            // (sqrt(n)-sqrt(k))^2 exactly. The smallest root of g itself is a
            // Laguerre-type root strictly above that value for finite n (e.g.
            // n=4, k=1 gives g = x-4 with root 4), so for min-root(g) only the
            // chain inequality is checked.
            for v in [b.value, b.gamma] {
                assert!(
                    (v - expect).abs() <= 1e-9,
                    "FAIL [4] identity n={n} k={k}: {v} != {expect}"
                );
            }
            assert!(
                min_root >= b.value - 1e-9,
                "FAIL [4] identity n={n} k={k}: min root {min_root} < refined {}",
                b.value
            );
        }
    }
    println!("PASS [4] barrier chain min-root(g) >= refined >= gamma; identity collapse to (sqrt(n)-sqrt(k))^2");
}

/// [5] Grothendieck–Pietsch subset: |σ| ≥ (1−ε)m and the restricted operator
/// norm bound √(π/(2εm))·‖T‖_{ℓ2→ℓ1} on 50 random T, ε ∈ {0.2, 0.4, 0.6}.
#[test]
fn criterion_05_grothendieck_pietsch() {
    let mut rng = StdRng::seed_from_u64(5);
    for trial in 0..50u64 {
        let m = rng.random_range(3..=12usize);
        let n = rng.random_range(2..=8usize);
        let t = gaussian(m, n, 50_000 + trial);
        let norm21 = norm_2_to_1(&t, 22).unwrap();
        for eps in [0.2, 0.4, 0.6] {
            let sigma = grothendieck_pietsch_subset(&t, eps)
                .unwrap_or_else(|e| panic!("FAIL [5] trial {trial} eps {eps}: {e}"));
            assert!(
                sigma.len() as f64 >= (1.0 - eps) * m as f64,
                "FAIL [5] trial {trial} eps {eps}: |sigma| = {}",
                sigma.len()
            );
            let sub = Matrix::new(DMatrix::from_fn(sigma.len(), n, |i, j| {
                t.inner()[(sigma[i], j)]
            }));
            let lhs = sub.schatten_norm(f64::INFINITY);
            let rhs = (std::f64::consts::PI / (2.0 * eps * m as f64)).sqrt() * norm21;
            assert!(
                lhs <= rhs + 1e-6,
                "FAIL [5] trial {trial} eps {eps}: {lhs} > {rhs}"
            );
        }
    }
    println!("PASS [5] Grothendieck-Pietsch subset size and operator-norm bound on 50 random T");
}

/// [6] Rank pipeline with tracked constant: inv_norm ≤ C_impl × rank-bound
/// minimum on 50 random instances (m ≤ 12) and harmonic m ∈ {16, 32, 64}
/// with k = ⌈√m⌉; additionally inv_norm ≥ 1/oracle-best at m ≤ 10.
#[test]
fn criterion_06_rank_pipeline() {
    let mut rng = StdRng::seed_from_u64(6);
    for trial in 0..50u64 {
        let m = rng.random_range(4..=12usize);
        let n = rng.random_range(3..=m);
        let a = gaussian(n, m, 60_000 + trial);
        let rank = a.rank();
        if rank < 3 {
            continue;
        }
        let k = rng.random_range(1..rank.min(4));
        let res = main_theorem_select(&a, k, None)
            .unwrap_or_else(|e| panic!("FAIL [6] trial {trial} (n={n}, m={m}, k={k}): {e}"));
        assert!(
            res.selection.inv_norm <= res.c_impl * res.bound_value + 1e-9,
            "FAIL [6] trial {trial}: inv_norm {} > C_impl*bound {}",
            res.selection.inv_norm,
            res.c_impl * res.bound_value
        );
        if m <= 10 {
            let best = best_subset(&a, k, Objective::Smin).unwrap();
            assert!(
                res.selection.inv_norm >= 1.0 / best.best_value - 1e-9,
                "FAIL [6] trial {trial}: inv_norm below the oracle optimum"
            );
        }
    }
    for m in [16usize, 32, 64] {
        let a = harmonic(m);
        let k = (m as f64).sqrt().ceil() as usize;
        let res = main_theorem_select(&a, k, None)
            .unwrap_or_else(|e| panic!("FAIL [6] harmonic m={m} k={k}: {e}"));
        assert!(
            res.selection.inv_norm <= res.c_impl * res.bound_value + 1e-9,
            "FAIL [6] harmonic m={m}: inv_norm {} > C_impl*bound {}",
            res.selection.inv_norm,
            res.c_impl * res.bound_value
        );
    }
    println!(
        "PASS [6] rank pipeline inv_norm <= C_impl x rank-bound on 50 random + harmonic 16/32/64"
    );
}

/// [7] Identity suite across 200 random instances: trace identity, diagonal
/// identity, biorthogonality, Fan lemma, srank_p monotonicity, entropic
/// stable rank as the p → 2⁺ limit.
#[test]
fn criterion_07_identity_suite() {
    let mut rng = StdRng::seed_from_u64(7);
    for trial in 0..200u64 {
        let n = rng.random_range(2..=8usize);
        let m = rng.random_range(2..=8usize);
        let a = gaussian(n, m, 70_000 + trial);
        let r = a.rank();
        if r >= 2 {
            let tau = volume_exchange_select(&a, r.min(m), &Weights::uniform(m)).unwrap();
            let db = a.dual_basis(&tau).unwrap();
            // trace identity
            let lhs: f64 = db.leverage.iter().sum();
            let rhs: f64 = a
                .restrict(&tau)
                .singular_values()
                .unwrap()
                .iter()
                .map(|s| 1.0 / (s * s))
                .sum();
            assert!(
                (lhs - rhs).abs() <= 1e-8 * rhs.max(1.0),
                "FAIL [7] trial {trial}: trace identity {lhs} vs {rhs}"
            );
            for (x, &jx) in tau.iter().enumerate() {
                // diagonal identity: ℓ_j = 1/‖P_{F_j}Ae_j‖²
                let others: Vec<usize> = tau.iter().cloned().filter(|&j| j != jx).collect();
                let p = a.proj_complement(&others);
                let proj_len = (&p * a.column(jx)).norm();
                assert!(
                    (db.leverage[x] - 1.0 / (proj_len * proj_len)).abs()
                        <= 1e-8 * db.leverage[x].max(1.0),
                    "FAIL [7] trial {trial}: diagonal identity at {jx}"
                );
                // biorthogonality
                for (y, &jy) in tau.iter().enumerate() {
                    let ip = db.vectors[x].dot(&a.column(jy));
                    let expect = if x == y { 1.0 } else { 0.0 };
                    assert!(
                        (ip - expect).abs() <= 1e-8,
                        "FAIL [7] trial {trial}: biorthogonality ({x},{y})"
                    );
                }
            }
        }
        // Fan lemma on a random projector
        let pr = rng.random_range(0..=n);
        let p = resinv::test_util::random_projector(n, pr, 71_000 + trial);
        assert!(
            a.fan_projection_check(&p).unwrap(),
            "FAIL [7] trial {trial}: Fan lemma at rank {pr}"
        );
        // srank_p monotone in p; entrank = lim srank_p
        let mut prev = f64::INFINITY;
        for p in [2.01, 2.5, 3.0, 4.0, 8.0, 32.0, f64::INFINITY] {
            let v = a.stable_rank(p).unwrap();
            assert!(
                v <= prev * (1.0 + 1e-8),
                "FAIL [7] trial {trial}: srank not monotone at p={p}"
            );
            prev = v;
        }
        let ent = a.entropic_stable_rank().unwrap();
        let near = a.stable_rank(2.0 + 1e-6).unwrap();
        assert!(
            (ent - near).abs() / ent <= 1e-3,
            "FAIL [7] trial {trial}: entrank {ent} vs lim {near}"
        );
    }
    println!("PASS [7] identity suite (trace, diagonal, biorthogonality, Fan, srank monotone, entrank) on 200 instances");
}

/// [8] Sauer–Shelah: random Ω with |Ω| = 2^{n−1}+1 yield an exhaustively
/// verified shattered set of size ≥ ⌈(n+1)/2⌉, 100 rounds (odd n ≤ 11).
#[test]
fn criterion_08_sauer_shelah() {
    let mut rng = StdRng::seed_from_u64(8);
    for trial in 0..100 {
        // Odd n only: for |Omega| = 2^{n-1}+1 the counting bound
        // sum_{j < t} C(n,j) < |Omega| guarantees a shattered set of size
        // t = (n+1)/2 exactly when n is odd (the sum is 2^{n-1}). For even n
        // the guarantee fails and random families genuinely fall short
        // (observed at n = 4, where 9 < 11 is required but |Omega| = 9).
        let n = 2 * rng.random_range(1..=5usize) + 1;
        let want = (n + 1).div_ceil(2);
        let mut members: Vec<u32> = (0..1u32 << n).collect();
        while members.len() > (1usize << (n - 1)) + 1 {
            let at = rng.random_range(0..members.len());
            members.swap_remove(at);
        }
        let omega = SignSet::new(n, members).unwrap();
        let sigma = sauer_shelah_extract(&omega, want)
            .unwrap_or_else(|e| panic!("FAIL [8] trial {trial} (n={n}): {e}"));
        assert!(
            sigma.len() >= want && omega.shatters(&sigma),
            "FAIL [8] trial {trial} (n={n}): |sigma| = {} shatters = {}",
            sigma.len(),
            omega.shatters(&sigma)
        );
    }
    println!("PASS [8] Sauer-Shelah extraction of shattered sets of size >= ceil((n+1)/2) on 100 random sign sets");
}

/// [9] Ellipsoid equivalence: for random unit-column Y, the coordinate
/// projection of E = {a : ‖Σ a_j y_j‖ ≤ 1} onto the pipeline's σ contains a
/// ball of radius (1/C_impl)·√((m−k)/m) − 1e-8.
#[test]
fn criterion_09_ellipsoid_equivalence() {
    let mut rng = StdRng::seed_from_u64(9);
    let mut done = 0u32;
    let mut attempt = 0u64;
    while done < 20 {
        attempt += 1;
        let m = rng.random_range(4..=10usize);
        let y = unit_columns(m, m, 90_000 + attempt);
        if y.rank() < m {
            continue;
        }
        let gram_inv = (y.inner().transpose() * y.inner())
            .cholesky()
            .unwrap()
            .inverse();
        let a = Matrix::new(y.inner() * gram_inv);
        let k = rng.random_range(1..m);
        let (sel, trace) = giannopoulos_select(&a, k)
            .unwrap_or_else(|e| panic!("FAIL [9] attempt {attempt} (m={m}, k={k}): {e}"));
        let inr = ellipsoid_projection_inradius(&y, &sel.sigma, false).unwrap();
        let want = (1.0 / trace.c_impl) * ((m - k) as f64 / m as f64).sqrt() - 1e-8;
        assert!(
            inr >= want,
            "FAIL [9] attempt {attempt} (m={m}, k={k}): inradius {inr} < {want}"
        );
        done += 1;
    }
    println!("PASS [9] ellipsoid projection inradius >= (1/C_impl) sqrt((m-k)/m) on 20 unit-column instances");
}

/// [10] Oracle dominance: every selector's certificate is at most the
/// exhaustive optimum wherever C(m,k) ≤ 1e5, with equality on the identity.
#[test]
fn criterion_10_oracle_dominance() {
    let mut instances: Vec<(String, Matrix)> = Vec::new();
    for m in [5usize, 6, 8] {
        instances.push((format!("identity-{m}"), Matrix::identity(m)));
        instances.push((format!("circulant-{m}"), circulant_sqrt(m)));
        instances.push((format!("harmonic-{m}"), harmonic(m)));
    }
    let mut rng = StdRng::seed_from_u64(10);
    for i in 0..12u64 {
        let n = rng.random_range(3..=9usize);
        let m = rng.random_range(3..=10usize);
        instances.push((format!("gaussian-{n}x{m}-{i}"), gaussian(n, m, 100_000 + i)));
    }
    for (name, a) in &instances {
        let m = a.ncols();
        let rank = a.rank();
        for k in 1..rank.max(2) {
            if binomial(m, k) > 100_000 {
                continue;
            }
            let best = best_subset(a, k, Objective::Smin).unwrap();
            let mut certs: Vec<(&str, f64)> = Vec::new();
            if let Ok(tau) = volume_exchange_select(a, k, &Weights::uniform(m)) {
                certs.push(("volume", a.restrict_certificate(&tau).smin));
            }
            if rank == m && k < m {
                if let Ok((sel, _)) = giannopoulos_select(a, k) {
                    certs.push(("gia", sel.smin));
                }
            }
            if k < rank {
                if let Ok(res) = main_theorem_select(a, k, None) {
                    certs.push(("rank", res.selection.smin));
                }
                if let Ok(sel) = interlacing_greedy_select(a, k) {
                    certs.push(("mss", sel.smin));
                }
            }
            assert!(!certs.is_empty(), "FAIL [10] {name} k={k}: no selector ran");
            for (which, smin) in certs {
                assert!(
                    smin <= best.best_value + 1e-9,
                    "FAIL [10] {name} k={k}: {which} certificate {smin} beats oracle {}",
                    best.best_value
                );
                if name.starts_with("identity") {
                    assert!(
                        (smin - best.best_value).abs() <= 1e-9,
                        "FAIL [10] {name} k={k}: {which} not tight on the identity"
                    );
                }
            }
        }
    }
    println!("PASS [10] oracle dominance (and identity tightness) across structured and random instances");
}
