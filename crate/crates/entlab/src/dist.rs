//! Exact distributions and joint distributions over bitstring domains.
//!
//! All mass is exact rational; validity (entries in \[0,1\], total exactly 1)
//! is enforced at construction, so downstream theorem checks never carry a
//! tolerance. Entropy levels are exposed as guessing probabilities; see
//! [`crate::rat`].

use crate::error::{Error, Result};
use crate::rat::{neg_log2, pow2_inv, rat_one, rat_zero, Rat};
use num_traits::Zero;

/// Desk-scale guard: exhaustive exactness is the point, so domains stay small.
pub const MAX_DOMAIN_BITS: u32 = 16;

/// A bitstring domain `{0,1}^bits`, identified with `0..2^bits`.
///
/// Bit `i` of the integer index is coordinate `i` of the string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Domain {
    bits: u32,
}

impl Domain {
    pub fn new(bits: u32) -> Result<Self> {
        if bits > MAX_DOMAIN_BITS {
            return Err(Error::DomainTooLarge { bits });
        }
        Ok(Domain { bits })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn size(&self) -> usize {
        1usize << self.bits
    }

    /// Smallest admissible max-probability cap on this domain, 2^-bits.
    pub fn min_cap(&self) -> Rat {
        pow2_inv(self.bits)
    }
}

/// An exact distribution over a [`Domain`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dist {
    domain: Domain,
    probs: Vec<Rat>,
}

impl Dist {
    pub fn new(domain: Domain, probs: Vec<Rat>) -> Result<Self> {
        if probs.len() != domain.size() {
            return Err(Error::InvalidDist(format!(
                "expected {} entries, got {}",
                domain.size(),
                probs.len()
            )));
        }
        let mut total = rat_zero();
        for p in &probs {
            if p < &rat_zero() || p > &rat_one() {
                return Err(Error::InvalidDist(format!(
                    "probability {} outside [0,1]",
                    p
                )));
            }
            total += p;
        }
        if total != rat_one() {
            return Err(Error::InvalidDist(format!("mass {} is not 1", total)));
        }
        Ok(Dist { domain, probs })
    }

    pub fn uniform(domain: Domain) -> Self {
        let p = pow2_inv(domain.bits());
        Dist {
            domain,
            probs: vec![p; domain.size()],
        }
    }

    pub fn point_mass(domain: Domain, point: usize) -> Result<Self> {
        if point >= domain.size() {
            return Err(Error::InvalidDist(format!("point {point} out of range")));
        }
        let mut probs = vec![rat_zero(); domain.size()];
        probs[point] = rat_one();
        Ok(Dist { domain, probs })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn probs(&self) -> &[Rat] {
        &self.probs
    }

    pub fn prob(&self, x: usize) -> &Rat {
        &self.probs[x]
    }

    /// max_x P(x); min-entropy is -log2 of this.
    pub fn guess_prob(&self) -> Rat {
        self.probs.iter().max().cloned().unwrap_or_else(rat_one)
    }

    /// Display form of the min-entropy, presentation only.
    pub fn min_entropy_display(&self) -> f64 {
        neg_log2(&self.guess_prob())
    }

    /// (1/2) sum_x |p(x) - q(x)|.
    pub fn statistical_distance(&self, other: &Dist) -> Result<Rat> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        let mut total = rat_zero();
        for (p, q) in self.probs.iter().zip(&other.probs) {
            total += if p >= q { p - q } else { q - p };
        }
        Ok(total / crate::rat::rat_int(2))
    }

    /// `E_{x<-self}[values[x]]`.
    pub fn expect(&self, values: &[Rat]) -> Result<Rat> {
        if values.len() != self.probs.len() {
            return Err(Error::DomainMismatch);
        }
        let mut acc = rat_zero();
        for (p, v) in self.probs.iter().zip(values) {
            if !p.is_zero() {
                acc += p * v;
            }
        }
        Ok(acc)
    }
}

/// An exact joint distribution P(x, z), stored x-major: `probs[x * 2^m + z]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Joint {
    x_domain: Domain,
    z_domain: Domain,
    probs: Vec<Rat>,
}

impl Joint {
    pub fn new(x_domain: Domain, z_domain: Domain, probs: Vec<Rat>) -> Result<Self> {
        let expected = x_domain.size() * z_domain.size();
        if probs.len() != expected {
            return Err(Error::InvalidDist(format!(
                "expected {} entries, got {}",
                expected,
                probs.len()
            )));
        }
        let mut total = rat_zero();
        for p in &probs {
            if p < &rat_zero() || p > &rat_one() {
                return Err(Error::InvalidDist(format!("entry {} outside [0,1]", p)));
            }
            total += p;
        }
        if total != rat_one() {
            return Err(Error::InvalidDist(format!("mass {} is not 1", total)));
        }
        Ok(Joint {
            x_domain,
            z_domain,
            probs,
        })
    }

    /// Builds the joint of (X, Z) from independent marginals.
    pub fn independent(x: &Dist, z: &Dist) -> Self {
        let mut probs = Vec::with_capacity(x.domain().size() * z.domain().size());
        for px in x.probs() {
            for pz in z.probs() {
                probs.push(px * pz);
            }
        }
        Joint {
            x_domain: x.domain(),
            z_domain: z.domain(),
            probs,
        }
    }

    pub fn x_domain(&self) -> Domain {
        self.x_domain
    }

    pub fn z_domain(&self) -> Domain {
        self.z_domain
    }

    pub fn probs(&self) -> &[Rat] {
        &self.probs
    }

    pub fn prob(&self, x: usize, z: usize) -> &Rat {
        &self.probs[x * self.z_domain.size() + z]
    }

    /// P(Z = z).
    pub fn z_mass(&self, z: usize) -> Rat {
        let mut acc = rat_zero();
        for x in 0..self.x_domain.size() {
            acc += self.prob(x, z);
        }
        acc
    }

    pub fn z_marginal(&self) -> Vec<Rat> {
        (0..self.z_domain.size()).map(|z| self.z_mass(z)).collect()
    }

    pub fn x_marginal(&self) -> Dist {
        let zs = self.z_domain.size();
        let probs = (0..self.x_domain.size())
            .map(|x| {
                let mut acc = rat_zero();
                for z in 0..zs {
                    acc += &self.probs[x * zs + z];
                }
                acc
            })
            .collect();
        Dist {
            domain: self.x_domain,
            probs,
        }
    }

    /// Flattens to a distribution over the (x, z) product domain, x-major.
    pub fn flatten(&self) -> Result<Dist> {
        let domain = Domain::new(self.x_domain.bits() + self.z_domain.bits())?;
        Dist::new(domain, self.probs.clone())
    }

    /// The conditional distribution X | Z = z. Errors on zero-mass columns.
    pub fn condition(&self, z: usize) -> Result<Dist> {
        let mass = self.z_mass(z);
        if mass.is_zero() {
            return Err(Error::ZeroMassCondition { z });
        }
        let probs = (0..self.x_domain.size())
            .map(|x| self.prob(x, z) / &mass)
            .collect();
        Dist::new(self.x_domain, probs)
    }

    /// sum_z max_x P(x, z) = E_z[max_x P(x|z)]; average conditional
    /// min-entropy is -log2 of this.
    pub fn cond_guess_prob_avg(&self) -> Rat {
        let mut acc = rat_zero();
        for z in 0..self.z_domain.size() {
            let mut best = rat_zero();
            for x in 0..self.x_domain.size() {
                let p = self.prob(x, z);
                if p > &best {
                    best = p.clone();
                }
            }
            acc += best;
        }
        acc
    }

    /// max over supported z of max_x P(x|z). Zero-mass columns are skipped;
    /// errors if no column has mass.
    pub fn cond_guess_prob_worst(&self) -> Result<Rat> {
        let mut best: Option<Rat> = None;
        for z in 0..self.z_domain.size() {
            let mass = self.z_mass(z);
            if mass.is_zero() {
                continue;
            }
            let mut col_max = rat_zero();
            for x in 0..self.x_domain.size() {
                let p = self.prob(x, z);
                if p > &col_max {
                    col_max = p.clone();
                }
            }
            let g = col_max / mass;
            if best.as_ref().is_none_or(|b| &g > b) {
                best = Some(g);
            }
        }
        best.ok_or(Error::DegenerateSupport)
    }

    /// Average-to-worst-case split at failure mass `delta`: returns the
    /// inflated cap avg/delta and the set of z whose conditional guessing
    /// probability stays within it. The mass outside the returned set is
    /// certified to be strictly below delta (Markov, exact).
    pub fn avg_to_worst_split(&self, delta: &Rat) -> Result<AvgWorstSplit> {
        if delta <= &rat_zero() || delta > &rat_one() {
            return Err(Error::BadDelta);
        }
        let gamma_new = self.cond_guess_prob_avg() / delta;
        let mut good_z = Vec::new();
        let mut good_mass = rat_zero();
        for z in 0..self.z_domain.size() {
            let mass = self.z_mass(z);
            if mass.is_zero() {
                continue;
            }
            let mut col_max = rat_zero();
            for x in 0..self.x_domain.size() {
                let p = self.prob(x, z);
                if p > &col_max {
                    col_max = p.clone();
                }
            }
            if col_max / &mass <= gamma_new {
                good_z.push(z);
                good_mass += mass;
            }
        }
        Ok(AvgWorstSplit {
            gamma_new,
            good_z,
            good_mass,
        })
    }

    /// Marginalizes a (X, (Z1, Z2)) joint onto (X, Z1). The z-index packs
    /// z1 as the high bits: z = z1 * 2^m2 + z2.
    pub fn marginal_z1(&self, m1: u32, m2: u32) -> Result<Joint> {
        if m1 + m2 != self.z_domain.bits() {
            return Err(Error::DomainMismatch);
        }
        let z1_domain = Domain::new(m1)?;
        let z2s = 1usize << m2;
        let mut probs = Vec::with_capacity(self.x_domain.size() * z1_domain.size());
        for x in 0..self.x_domain.size() {
            for z1 in 0..z1_domain.size() {
                let mut acc = rat_zero();
                for z2 in 0..z2s {
                    acc += self.prob(x, z1 * z2s + z2);
                }
                probs.push(acc);
            }
        }
        Joint::new(self.x_domain, z1_domain, probs)
    }

    /// Exact check of the information-theoretic leakage chain rule on a
    /// (X, (Z1, Z2)) joint: the average guessing probability given (Z1, Z2)
    /// is at most 2^m2 times the one given Z1 alone.
    pub fn it_chain_rule_check(&self, m1: u32, m2: u32) -> Result<ChainRuleCheck> {
        let full = self.cond_guess_prob_avg();
        let z1_only = self.marginal_z1(m1, m2)?.cond_guess_prob_avg();
        let bound = crate::rat::pow2(m2) * &z1_only;
        Ok(ChainRuleCheck {
            holds: full <= bound,
            guess_prob_full: full,
            guess_prob_z1: z1_only,
            bound,
        })
    }
}

#[derive(Debug, Clone)]
pub struct AvgWorstSplit {
    /// avg guessing probability divided by delta; caps every good column.
    pub gamma_new: Rat,
    /// Supported z with max_x P(x|z) <= gamma_new.
    pub good_z: Vec<usize>,
    /// Exact total mass of `good_z`; always >= 1 - delta.
    pub good_mass: Rat,
}

#[derive(Debug, Clone)]
pub struct ChainRuleCheck {
    pub holds: bool,
    pub guess_prob_full: Rat,
    pub guess_prob_z1: Rat,
    pub bound: Rat,
}

/// Quality triple for an entropy claim: guessing-probability cap gamma
/// (canonical form of 2^-k), advantage bound epsilon, optional gate budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntropyParams {
    pub gamma: Rat,
    pub epsilon: Rat,
    pub size_budget: Option<u64>,
}

impl EntropyParams {
    pub fn new(gamma: Rat, epsilon: Rat, size_budget: Option<u64>) -> Result<Self> {
        if gamma <= rat_zero() || gamma > rat_one() {
            return Err(Error::Scenario(format!("gamma {} outside (0,1]", gamma)));
        }
        if epsilon < rat_zero() || epsilon > rat_one() {
            return Err(Error::Scenario(format!("epsilon {} outside [0,1]", epsilon)));
        }
        Ok(EntropyParams {
            gamma,
            epsilon,
            size_budget,
        })
    }

    /// k = -log2(gamma), presentation only.
    pub fn display_k(&self) -> f64 {
        neg_log2(&self.gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn d(bits: u32) -> Domain {
        Domain::new(bits).unwrap()
    }

    #[test]
    fn domain_guard() {
        assert!(Domain::new(16).is_ok());
        assert!(matches!(
            Domain::new(17),
            Err(Error::DomainTooLarge { bits: 17 })
        ));
    }

    #[test]
    fn guess_prob_examples() {
        // uniform over {0,1}^2 -> 1/4
        assert_eq!(Dist::uniform(d(2)).guess_prob(), rat(1, 4));
        // (1/2, 1/4, 1/8, 1/8) -> 1/2
        let dist = Dist::new(d(2), vec![rat(1, 2), rat(1, 4), rat(1, 8), rat(1, 8)]).unwrap();
        assert_eq!(dist.guess_prob(), rat(1, 2));
        assert_eq!(dist.min_entropy_display(), 1.0);
        // point mass -> 1
        assert_eq!(Dist::point_mass(d(2), 3).unwrap().guess_prob(), rat(1, 1));
    }

    #[test]
    fn dist_validation() {
        assert!(Dist::new(d(1), vec![rat(1, 2), rat(1, 4)]).is_err());
        assert!(Dist::new(d(1), vec![rat(3, 2), rat(-1, 2)]).is_err());
        assert!(Dist::new(d(1), vec![rat(1, 2), rat(1, 2)]).is_ok());
    }

    #[test]
    fn cond_guess_prob_avg_uniform_and_independent() {
        let j = Joint::independent(&Dist::uniform(d(1)), &Dist::uniform(d(1)));
        // uniform 2x2 table -> 1/2
        assert_eq!(j.cond_guess_prob_avg(), rat(1, 2));
        // X independent of Z -> guess_prob(X)
        let x = Dist::new(d(2), vec![rat(1, 2), rat(1, 4), rat(1, 8), rat(1, 8)]).unwrap();
        let z = Dist::new(d(1), vec![rat(1, 4), rat(3, 4)]).unwrap();
        let j = Joint::independent(&x, &z);
        assert_eq!(j.cond_guess_prob_avg(), x.guess_prob());
        assert_eq!(j.cond_guess_prob_worst().unwrap(), x.guess_prob());
    }

    #[test]
    fn cond_guess_prob_worst_uniform() {
        let j = Joint::independent(&Dist::uniform(d(1)), &Dist::uniform(d(1)));
        assert_eq!(j.cond_guess_prob_worst().unwrap(), rat(1, 2));
    }

    #[test]
    fn condition_cases() {
        let j = Joint::independent(&Dist::uniform(d(2)), &Dist::uniform(d(1)));
        assert_eq!(j.condition(0).unwrap(), Dist::uniform(d(2)));

        // deterministic X = f(Z): column is a point mass at f(z)
        let probs = vec![
            rat(1, 2),
            rat(0, 1), // x=0: only under z=0
            rat(0, 1),
            rat(1, 2), // x=1: only under z=1
        ];
        let j = Joint::new(d(1), d(1), probs).unwrap();
        assert_eq!(j.condition(1).unwrap(), Dist::point_mass(d(1), 1).unwrap());

        // zero-mass column errors
        let probs = vec![rat(1, 2), rat(0, 1), rat(1, 2), rat(0, 1)];
        let j = Joint::new(d(1), d(1), probs).unwrap();
        assert!(matches!(
            j.condition(1),
            Err(Error::ZeroMassCondition { z: 1 })
        ));
    }

    #[test]
    fn statistical_distance_cases() {
        let p = Dist::new(d(1), vec![rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(p.statistical_distance(&p).unwrap(), rat(0, 1));
        let a = Dist::point_mass(d(1), 0).unwrap();
        let b = Dist::point_mass(d(1), 1).unwrap();
        assert_eq!(a.statistical_distance(&b).unwrap(), rat(1, 1));
        let q = Dist::new(d(1), vec![rat(3, 4), rat(1, 4)]).unwrap();
        assert_eq!(p.statistical_distance(&q).unwrap(), rat(1, 4));
        let w = Dist::uniform(d(2));
        assert!(matches!(
            p.statistical_distance(&w),
            Err(Error::DomainMismatch)
        ));
    }

    #[test]
    fn avg_to_worst_split_gamma_doubles_at_half() {
        // avg guessing probability 2^-4 and delta = 1/2 gives cap 2^-3
        let x = Dist::uniform(d(4));
        let z = Dist::uniform(d(1));
        let j = Joint::independent(&x, &z);
        let split = j.avg_to_worst_split(&rat(1, 2)).unwrap();
        assert_eq!(split.gamma_new, rat(1, 8));
        assert_eq!(split.good_mass, rat(1, 1));

        // delta -> 1: cap equals the average itself
        let split = j.avg_to_worst_split(&rat(1, 1)).unwrap();
        assert_eq!(split.gamma_new, rat(1, 16));
        assert!(j.avg_to_worst_split(&rat(0, 1)).is_err());
    }

    #[test]
    fn it_chain_rule_z2_constant_is_lossless() {
        let x = Dist::new(d(2), vec![rat(1, 2), rat(1, 4), rat(1, 8), rat(1, 8)]).unwrap();
        let z = Dist::uniform(d(2));
        let j = Joint::independent(&x, &z);
        // treat z as (z1, z2) with m2 = 0: z2 constant, zero loss
        let check = j.it_chain_rule_check(2, 0).unwrap();
        assert!(check.holds);
        assert_eq!(check.guess_prob_full, check.bound);
    }

    #[test]
    fn it_chain_rule_z2_copy_of_x() {
        // Z2 = X with n = m2 = 1, Z1 constant (m1 = 0)
        let probs = vec![rat(1, 2), rat(0, 1), rat(0, 1), rat(1, 2)];
        let j = Joint::new(d(1), d(1), probs).unwrap();
        let check = j.it_chain_rule_check(0, 1).unwrap();
        assert!(check.holds);
        // revealing X costs exactly the full m2 = 1 bits here
        assert_eq!(check.guess_prob_full, rat(1, 1));
        assert_eq!(check.guess_prob_z1, rat(1, 2));
    }
}
