//! Power means checked against exact integer computations that share no code
//! with the floating-point kernels.

use sumlab_core::arith::{self, Modulus};
use sumlab_core::exp_sums::{power_mean, InnerDomain, PhaseFamily, Twist, VaryingSlot};

fn pow_mod(b: u64, e: u32, p: u64) -> u64 {
    (0..e).fold(1, |acc, _| acc * b % p)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    (1..p).find(|&x| a * x % p == 1).unwrap()
}

/// Exact `Σ_v |Σ_a ζ^{phase(v, a)}|^{2k}` in `Z[ζ_p]`.
///
/// Each inner sum is a count vector over exponents; `|S|^2` is its cyclic
/// autocorrelation and higher powers are cyclic convolutions. A rational
/// integer `Σ_j c_j ζ^j` has `c_1 = … = c_{p-1}`, and then equals `c_0 - c_1`.
fn exact_power_mean(p: u64, two_k: u32, sweep: &[u64], phases: impl Fn(u64) -> Vec<u64>) -> i128 {
    let n = p as usize;
    let mut total = vec![0i128; n];
    for &v in sweep {
        let mut counts = vec![0i128; n];
        for ph in phases(v) {
            counts[ph as usize] += 1;
        }
        let mut norm = vec![0i128; n];
        for (i, &ci) in counts.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            for (j, &cj) in counts.iter().enumerate() {
                norm[(i + n - j) % n] += ci * cj;
            }
        }
        let mut acc = norm.clone();
        for _ in 1..two_k / 2 {
            let mut next = vec![0i128; n];
            for (i, &ai) in acc.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                for (j, &nj) in norm.iter().enumerate() {
                    next[(i + j) % n] += ai * nj;
                }
            }
            acc = next;
        }
        for (t, a) in total.iter_mut().zip(acc) {
            *t += a;
        }
    }
    assert!(
        total[1..].iter().all(|&c| c == total[1]),
        "not rational at p={p}"
    );
    total[0] - total[1]
}

fn rounded(family: &PhaseFamily, p: u64, two_k: u32) -> i128 {
    power_mean(family, &Modulus::new(p).unwrap(), two_k)
        .unwrap()
        .checked()
        .unwrap()
}

#[test]
fn cubic_conjecture_family_matches_cyclotomic_oracle() {
    for p in arith::odd_primes_in_range(3, 31) {
        for two_k in [2, 4, 6, 8] {
            let sweep: Vec<u64> = (0..p).collect();
            let exact = exact_power_mean(p, two_k, &sweep, |m| {
                (0..p).map(|a| (m * pow_mod(a, 3, p) + a) % p).collect()
            });
            assert_eq!(
                rounded(&PhaseFamily::cubic_conjecture(), p, two_k),
                exact,
                "p={p} 2k={two_k}"
            );
        }
    }
}

#[test]
fn twisted_family_matches_cyclotomic_oracle() {
    for p in arith::odd_primes_in_range(3, 29) {
        for k in 1..=3 {
            for two_k in [2, 4, 6] {
                let sweep: Vec<u64> = (0..p).collect();
                let exact = exact_power_mean(p, two_k, &sweep, |m| {
                    (1..p)
                        .map(|a| (m * pow_mod(a, k, p) + inv_mod(a, p)) % p)
                        .collect()
                });
                assert_eq!(
                    rounded(&PhaseFamily::twisted_monomial(k), p, two_k),
                    exact,
                    "p={p} k={k} 2k={two_k}"
                );
            }
        }
    }
}

#[test]
fn two_term_and_linear_slot_families_match_cyclotomic_oracle() {
    for p in arith::odd_primes_in_range(5, 23) {
        let sweep: Vec<u64> = (1..p).collect();
        for (k, n) in [(2, 1), (3, 2), (4, 1), (3, p - 1)] {
            let exact = exact_power_mean(p, 4, &sweep, |m| {
                (0..p).map(|a| (m * pow_mod(a, k, p) + n * a) % p).collect()
            });
            assert_eq!(
                rounded(&PhaseFamily::two_term(k, n as i64), p, 4),
                exact,
                "p={p} k={k} n={n}"
            );
        }
        if p % 3 == 1 {
            // without a cube root of every unit the sum is not Galois-stable
            continue;
        }
        let exact = exact_power_mean(p, 6, &sweep, |a| {
            (0..p).map(|x| (pow_mod(x, 3, p) + a * x) % p).collect()
        });
        assert_eq!(
            rounded(&PhaseFamily::cubic_varying_linear(), p, 6),
            exact,
            "p={p}"
        );
    }
}

#[test]
fn kloosterman_family_matches_cyclotomic_oracle() {
    for p in arith::odd_primes_in_range(3, 23) {
        for n in [1, 2] {
            let sweep: Vec<u64> = (0..p).collect();
            let exact = exact_power_mean(p, 4, &sweep, |m| {
                (1..p).map(|a| (m * a + n * inv_mod(a, p)) % p).collect()
            });
            assert_eq!(
                rounded(&PhaseFamily::kloosterman(n as i64), p, 4),
                exact,
                "p={p} n={n}"
            );
        }
    }
}

/// `Σ_{m,n} |Σ_a e((m a^k + n a)/p)|^4 = p^2 · #{a+b=c+d, a^k+b^k=c^k+d^k}`.
#[test]
fn fourth_moment_over_both_coefficients_counts_quadruples() {
    for p in arith::odd_primes_in_range(3, 31) {
        for k in 2..=4u32 {
            let pw: Vec<u64> = (0..p).map(|a| pow_mod(a, k, p)).collect();
            let mut quadruples = 0i128;
            for a in 0..p {
                for b in 0..p {
                    for c in 0..p {
                        let d = (a + b + p - c) % p;
                        if (pw[a as usize] + pw[b as usize]) % p
                            == (pw[c as usize] + pw[d as usize]) % p
                        {
                            quadruples += 1;
                        }
                    }
                }
            }
            let total: i128 = (0..p)
                .map(|n| {
                    let fam = PhaseFamily::new(
                        k,
                        InnerDomain::AllResidues,
                        Twist::None,
                        VaryingSlot::MonomialCoefficient,
                        n as i64,
                        true,
                    )
                    .unwrap();
                    rounded(&fam, p, 4)
                })
                .sum();
            let pp = i128::from(p);
            assert_eq!(total, pp * pp * quadruples, "p={p} k={k}");
        }
    }
}

/// Same count for Kloosterman sums: units with `a+b=c+d` and `ā+b̄=c̄+d̄`.
#[test]
fn kloosterman_fourth_moment_counts_quadruples() {
    for p in arith::odd_primes_in_range(3, 31) {
        let inv: Vec<u64> = (0..p)
            .map(|a| if a == 0 { 0 } else { inv_mod(a, p) })
            .collect();
        let mut quadruples = 0i128;
        for a in 1..p {
            for b in 1..p {
                for c in 1..p {
                    let d = (a + b + p - c) % p;
                    if d != 0
                        && (inv[a as usize] + inv[b as usize]) % p
                            == (inv[c as usize] + inv[d as usize]) % p
                    {
                        quadruples += 1;
                    }
                }
            }
        }
        let total: i128 = (0..p)
            .map(|n| rounded(&PhaseFamily::kloosterman(n as i64), p, 4))
            .sum();
        let pp = i128::from(p);
        assert_eq!(total, pp * pp * quadruples, "p={p}");
    }
}

#[test]
fn second_moment_is_parseval() {
    // Σ_{m=0}^{p-1} |S(m)|^2 = p · Σ_{a^k = b^k} e((t(a) - t(b))/p)
    for p in arith::odd_primes_in_range(3, 97) {
        let pp = i128::from(p);
        let cube_roots_of_unity = if p % 3 == 1 { 3 } else { 1 };
        assert_eq!(
            rounded(&PhaseFamily::cubic_conjecture(), p, 2),
            pp * (pp - (cube_roots_of_unity - 1))
        );
        assert_eq!(
            rounded(&PhaseFamily::twisted_monomial(2), p, 2),
            pp * (pp - 2)
        );
    }
}
