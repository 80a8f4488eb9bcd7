//! Deterministic random instance generation.
//!
//! Joints use dyadic rationals with denominator at most 2^10, produced by
//! throwing 2^d balls into cells so the mass is exactly one. Every
//! generator takes its RNG explicitly; suites derive one ChaCha stream per
//! trial index, which makes reports independent of thread scheduling.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dist::{Domain, Joint};
use crate::distinguisher::{close_under_complement, Distinguisher, Kind};
use crate::error::Result;
use crate::rat::{rat_zero, Rat};
use num_bigint::BigInt;
use num_rational::BigRational;

pub const MAX_DENOM_BITS: u32 = 10;

/// One independent stream per (seed, trial).
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial.wrapping_add(1));
    rng
}

fn dyadic(count: u64, denom_bits: u32) -> Rat {
    BigRational::new(BigInt::from(count), BigInt::from(1u64 << denom_bits))
}

/// Throws 2^denom_bits balls into `cells` bins.
fn ball_counts(rng: &mut ChaCha8Rng, cells: usize, denom_bits: u32) -> Vec<u64> {
    let mut counts = vec![0u64; cells];
    for _ in 0..(1u64 << denom_bits) {
        counts[rng.gen_range(0..cells)] += 1;
    }
    counts
}

/// A random dyadic joint with mass exactly one.
pub fn random_joint(rng: &mut ChaCha8Rng, n: u32, m: u32, denom_bits: u32) -> Result<Joint> {
    let denom_bits = denom_bits.min(MAX_DENOM_BITS);
    let x_domain = Domain::new(n)?;
    let z_domain = Domain::new(m)?;
    let cells = x_domain.size() * z_domain.size();
    let probs = ball_counts(rng, cells, denom_bits)
        .into_iter()
        .map(|c| dyadic(c, denom_bits))
        .collect();
    Joint::new(x_domain, z_domain, probs)
}

/// A random dyadic joint with the given z-marginal weights (in units of
/// 2^-denom_bits), so two joints can share a Z-marginal exactly.
pub fn random_joint_with_marginal(
    rng: &mut ChaCha8Rng,
    n: u32,
    z_weights: &[u64],
    denom_bits: u32,
) -> Result<Joint> {
    let x_domain = Domain::new(n)?;
    let zs = z_weights.len();
    let m = zs.trailing_zeros();
    let z_domain = Domain::new(m)?;
    let mut probs = vec![rat_zero(); x_domain.size() * zs];
    for (z, &w) in z_weights.iter().enumerate() {
        let mut col = vec![0u64; x_domain.size()];
        for _ in 0..w {
            col[rng.gen_range(0..x_domain.size())] += 1;
        }
        for (x, &c) in col.iter().enumerate() {
            probs[x * zs + z] = dyadic(c, denom_bits);
        }
    }
    Joint::new(x_domain, z_domain, probs)
}

/// Integer z-marginal weights summing to 2^denom_bits.
pub fn random_z_weights(rng: &mut ChaCha8Rng, m: u32, denom_bits: u32) -> Vec<u64> {
    ball_counts(rng, 1usize << m, denom_bits)
}

/// A full scenario: random dyadic joint, random boolean-table class
/// (complement-closed on request), dyadic parameters. Deterministic per
/// seed; trial streams never interfere with each other.
pub fn generate_instance(
    n: u32,
    m: u32,
    class_size: usize,
    complement_close: bool,
    seed: u64,
) -> Result<crate::scenario::ScenarioFile> {
    use crate::rat::format_rat;
    let mut rng = trial_rng(seed, 0);
    let j = random_joint(&mut rng, n, m, MAX_DENOM_BITS)?;
    let class = random_bool_class(&mut rng, n, m, class_size, complement_close)?;
    let k = rng.gen_range(1..=n.max(1));
    let eps_pow = rng.gen_range(1..=6u32);
    let zs = j.z_domain().size();
    let joint_rows = (0..j.x_domain().size())
        .map(|x| (0..zs).map(|z| format_rat(j.prob(x, z))).collect())
        .collect();
    let members = class
        .iter()
        .map(|d| crate::scenario::DistinguisherFile {
            kind: "table".into(),
            values: Some(d.values().iter().map(format_rat).collect()),
            boolean: Some(true),
            source: None,
            parts: None,
            size: Some(d.size()),
        })
        .collect();
    Ok(crate::scenario::ScenarioFile {
        n,
        m: Some(m),
        m1: None,
        m2: None,
        joint: joint_rows,
        joint_y: None,
        class: Some(crate::scenario::ClassSpecFile {
            kind: "list".into(),
            members: Some(members),
            source: None,
            path: None,
            max_size: None,
            gates: None,
            dedup: None,
            complement_close: None,
        }),
        params: Some(crate::scenario::ParamsFile {
            gamma: None,
            k: Some(k),
            epsilon: format!("1/{}", 1u64 << eps_pow),
            size_budget: None,
        }),
        delta: None,
        t: None,
        eps: None,
        distinguisher: None,
        sampler: None,
        assumption: None,
        mode: None,
        circuit_size: None,
        sampler_size: None,
        f: None,
    })
}

/// Random boolean-table distinguishers, optionally closed under complement.
pub fn random_bool_class(
    rng: &mut ChaCha8Rng,
    n: u32,
    m: u32,
    count: usize,
    complement_close: bool,
) -> Result<Vec<Distinguisher>> {
    let len = 1usize << (n + m);
    let mut class = Vec::with_capacity(count);
    for _ in 0..count {
        let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(0.5)).collect();
        class.push(Distinguisher::from_bool_table(n, m, &bits, 1)?);
    }
    Ok(if complement_close {
        close_under_complement(class)
    } else {
        class
    })
}

/// A random real-valued distinguisher with dyadic values of denominator 16.
pub fn random_real_distinguisher(rng: &mut ChaCha8Rng, n: u32, m: u32) -> Result<Distinguisher> {
    let len = 1usize << (n + m);
    let values: Vec<Rat> = (0..len)
        .map(|_| BigRational::new(BigInt::from(rng.gen_range(0..=16u32)), BigInt::from(16)))
        .collect();
    Distinguisher::from_table(n, m, values, Kind::Real, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_joint(&mut trial_rng(7, 3), 2, 2, 10).unwrap();
        let b = random_joint(&mut trial_rng(7, 3), 2, 2, 10).unwrap();
        assert_eq!(a, b);
        let c = random_joint(&mut trial_rng(7, 4), 2, 2, 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn masses_are_exactly_one_and_dyadic() {
        for trial in 0..20 {
            let j = random_joint(&mut trial_rng(1, trial), 2, 1, 10).unwrap();
            let total: Rat = j.probs().iter().fold(rat_zero(), |a, p| a + p);
            assert!(total.is_one());
            for p in j.probs() {
                // denominator divides 2^10
                let d = p.denom();
                assert!((BigInt::from(1u64 << 10) % d).is_zero());
            }
        }
    }

    #[test]
    fn shared_marginal_generation() {
        let mut rng = trial_rng(2, 0);
        let w = random_z_weights(&mut rng, 2, 10);
        let jp = random_joint_with_marginal(&mut rng, 2, &w, 10).unwrap();
        let jq = random_joint_with_marginal(&mut rng, 2, &w, 10).unwrap();
        assert_eq!(jp.z_marginal(), jq.z_marginal());
    }

    #[test]
    fn generate_instance_is_deterministic_and_valid() {
        let a = generate_instance(2, 2, 3, true, 77).unwrap();
        let b = generate_instance(2, 2, 3, true, 77).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        // parses back to a valid joint with mass exactly 1, and a
        // complement-closed class
        let j = a.joint().unwrap();
        let total: Rat = j.probs().iter().fold(rat_zero(), |acc, p| acc + p);
        assert!(total.is_one());
        let class = a.class().unwrap();
        assert!(crate::distinguisher::complement_closed(&class));
        assert!(a.params().is_ok());
        let c = generate_instance(2, 2, 3, true, 78).unwrap();
        assert_ne!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&c).unwrap()
        );
    }
}
