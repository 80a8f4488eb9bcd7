//! The sampler-based distinguisher: compare a candidate against fresh
//! samples of the samplable distribution.
//!
//! D''(x, z) accepts iff D'(x, z) strictly exceeds D' on every one of
//! l = ceil(64/eps^2) - 1 samples y_i of Y'|Z=z drawn by the sampler
//! circuit. Acceptance probabilities are computed analytically and exactly:
//! P[accept | x, z] = F_z(D'(x,z)^-)^l, where F_z(v^-) is the probability
//! that D'(Y'_z, z) falls strictly below v. Ties resolve to reject, which
//! matches the strict comparison and makes the Y'-side bound 1/(l+1)
//! unconditional (among l+1 exchangeable draws, each is the unique strict
//! maximum with probability at most 1/(l+1)).

use crate::dist::{Dist, Joint};
use crate::distinguisher::Distinguisher;
use crate::error::{Error, Result};
use crate::rat::{rat_int, rat_pow, rat_zero, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

pub const L_GUARD: u128 = 1_000_000;

/// A sampler for Y'|Z=z: one conditional distribution per z, plus the
/// declared circuit size of the sampling procedure.
#[derive(Debug, Clone)]
pub struct Sampler {
    pub conditionals: Vec<Dist>,
    pub declared_size: u64,
}

impl Sampler {
    pub fn new(conditionals: Vec<Dist>, declared_size: u64) -> Result<Self> {
        if conditionals.is_empty() {
            return Err(Error::Scenario("sampler needs at least one column".into()));
        }
        let d0 = conditionals[0].domain();
        if conditionals.iter().any(|c| c.domain() != d0) {
            return Err(Error::DomainMismatch);
        }
        Ok(Sampler {
            conditionals,
            declared_size,
        })
    }

    /// Worst-case guessing probability over the columns.
    pub fn worst_guess_prob(&self) -> Rat {
        self.conditionals
            .iter()
            .map(|c| c.guess_prob())
            .max()
            .unwrap()
    }
}

/// ceil(64 / eps^2) - 1, guarded.
pub fn sample_count(eps: &Rat) -> Result<u64> {
    if eps <= &rat_zero() {
        return Err(Error::Scenario("eps must be positive".into()));
    }
    let ratio = rat_int(64) / (eps * eps);
    let (num, den) = (ratio.numer().clone(), ratio.denom().clone());
    let ceil = num.div_ceil(&den);
    let l_plus_1 = ceil.to_u128().ok_or(Error::LTooLarge { l: u128::MAX })?;
    let l = l_plus_1.saturating_sub(1);
    if l > L_GUARD {
        return Err(Error::LTooLarge { l });
    }
    Ok(l as u64)
}

#[derive(Debug, Clone)]
pub struct SamplerArtifact {
    pub l: u64,
    /// Exact P[D''(X, Z) = 1].
    pub accept_x: Rat,
    /// Exact P[D''(Y', Z) = 1].
    pub accept_y: Rat,
    pub gap: Rat,
    /// eps^2/32: certified lower bound on accept_x.
    pub x_bound: Rat,
    /// 1/(l+1); itself at most eps^2/64.
    pub y_bound: Rat,
    /// eps^2/64: certified lower bound on the gap.
    pub gap_bound: Rat,
    /// (l+1) (size(D') + size(Gamma)).
    pub composite_size: u64,
    pub transcript: Vec<String>,
}

/// Per-z strictly-below CDF of D' under Y'_z, evaluated at each distinct
/// value of the column, with the Y'-mass sitting exactly at each value.
fn below_cdf(column: &[Rat], y_z: &Dist) -> Vec<(Rat, Rat, Rat)> {
    // returns (value, mass_at_value, mass_strictly_below)
    let mut order: Vec<usize> = (0..column.len()).collect();
    order.sort_by(|&a, &b| column[a].cmp(&column[b]).then(a.cmp(&b)));
    let mut out: Vec<(Rat, Rat, Rat)> = Vec::new();
    let mut below = rat_zero();
    let mut i = 0;
    while i < order.len() {
        let v = &column[order[i]];
        let mut at = rat_zero();
        let mut j = i;
        while j < order.len() && &column[order[j]] == v {
            at += y_z.prob(order[j]);
            j += 1;
        }
        out.push((v.clone(), at.clone(), below.clone()));
        below += at;
        i = j;
    }
    out
}

/// Builds the sample-comparison distinguisher and certifies the gap.
///
/// `d_prime` is the (boolean or real) distinguisher whose modulus
/// hypothesis is violated at level `eps`; `sampler` provides Y'|Z=z; `j`
/// is the (X, Z) side. All claims are recomputed exactly; a failed claim
/// is reported as a violated precondition.
pub fn sampler_distinguisher(
    d_prime: &Distinguisher,
    sampler: &Sampler,
    j: &Joint,
    eps: &Rat,
) -> Result<SamplerArtifact> {
    let zs = j.z_domain().size();
    if sampler.conditionals.len() != zs
        || sampler.conditionals[0].domain() != j.x_domain()
        || d_prime.n_bits() != j.x_domain().bits()
        || d_prime.m_bits() != j.z_domain().bits()
    {
        return Err(Error::DomainMismatch);
    }
    let l = sample_count(eps)?;
    let xs = j.x_domain().size();

    let mut accept_x = rat_zero();
    let mut accept_y = rat_zero();
    for z in 0..zs {
        let mass = j.z_mass(z);
        let column = d_prime.column(z);
        let y_z = &sampler.conditionals[z];
        let cdf = below_cdf(&column, y_z);
        // cache F^l per distinct value
        let powered: Vec<(Rat, Rat, Rat)> = cdf
            .iter()
            .map(|(v, at, below)| (v.clone(), at.clone(), rat_pow(below, l as u32)))
            .collect();
        let accept_at = |v: &Rat| -> Rat {
            for (val, _, p) in &powered {
                if val == v {
                    return p.clone();
                }
            }
            unreachable!("value from the same column")
        };
        if !mass.is_zero() {
            for x in 0..xs {
                let pxz = j.prob(x, z);
                if pxz.is_zero() {
                    continue;
                }
                accept_x += pxz * accept_at(&column[x]);
            }
        }
        // Y'-side conditioned on the same Z-marginal
        if !mass.is_zero() {
            let mut col_acc = rat_zero();
            for (_, at, p) in &powered {
                if !at.is_zero() && !p.is_zero() {
                    col_acc += at * p;
                }
            }
            accept_y += &mass * col_acc;
        }
    }

    let gap = &accept_x - &accept_y;
    let eps_sq = eps * eps;
    let x_bound = &eps_sq / rat_int(32);
    let gap_bound = &eps_sq / rat_int(64);
    let y_bound = Rat::new(BigInt::from(1), BigInt::from(l + 1));

    if accept_x < x_bound {
        return Err(Error::PreconditionFailed(format!(
            "P[D''(X,Z)=1] = {} below eps^2/32 = {}",
            accept_x, x_bound
        )));
    }
    if accept_y > y_bound {
        return Err(Error::PreconditionFailed(format!(
            "P[D''(Y',Z)=1] = {} above 1/(l+1) = {}",
            accept_y, y_bound
        )));
    }
    if y_bound > gap_bound {
        return Err(Error::PreconditionFailed(format!(
            "1/(l+1) = {} above eps^2/64 = {}",
            y_bound, gap_bound
        )));
    }
    if gap < gap_bound {
        return Err(Error::PreconditionFailed(format!(
            "gap {} below eps^2/64 = {}",
            gap, gap_bound
        )));
    }

    let composite_size = (l + 1) * (d_prime.size() + sampler.declared_size);
    Ok(SamplerArtifact {
        l,
        accept_x,
        accept_y,
        gap,
        x_bound,
        y_bound,
        gap_bound,
        composite_size,
        transcript: vec![format!(
            "l = {l}, composite size = ({} + 1)({} + {})",
            l,
            d_prime.size(),
            sampler.declared_size
        )],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Domain;
    use crate::rat::rat;

    fn dom(bits: u32) -> Domain {
        Domain::new(bits).unwrap()
    }

    #[test]
    fn sample_count_formula() {
        assert_eq!(sample_count(&rat(1, 1)).unwrap(), 63);
        assert_eq!(sample_count(&rat(1, 2)).unwrap(), 255);
        assert_eq!(sample_count(&rat(1, 4)).unwrap(), 1023);
        assert!(matches!(
            sample_count(&rat(1, 1000)),
            Err(Error::LTooLarge { .. })
        ));
    }

    #[test]
    fn constant_column_never_accepts_y_side() {
        // D' constant per z: strict comparison never fires on the Y' side
        let j = Joint::independent(&Dist::uniform(dom(2)), &Dist::uniform(dom(0)));
        let d = Distinguisher::from_bool_table(2, 0, &[true, true, true, true], 1).unwrap();
        let sampler = Sampler::new(vec![Dist::uniform(dom(2))], 4).unwrap();
        // run the internals directly: the artifact itself would fail its
        // X-side claim (there is no violation here)
        let cdf = below_cdf(&d.column(0), &sampler.conditionals[0]);
        assert_eq!(cdf.len(), 1);
        assert_eq!(cdf[0].2, rat(0, 1)); // nothing strictly below
        let out = sampler_distinguisher(&d, &sampler, &j, &rat(1, 2));
        assert!(matches!(out, Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn violating_instance_certifies() {
        // X sits on the single D' = 1 point per z; Y' is uniform over 2^6
        let n = 6u32;
        let xs = 1usize << n;
        let mut probs = vec![rat(0, 1); xs];
        probs[5] = rat(1, 1); // X = point mass at 5, z constant
        let j = Joint::new(dom(n), dom(0), probs).unwrap();
        let mut bits = vec![false; xs];
        bits[5] = true;
        let d = Distinguisher::from_bool_table(n, 0, &bits, 10).unwrap();
        let sampler = Sampler::new(vec![Dist::uniform(dom(n))], 6).unwrap();
        let eps = rat(1, 2);
        let art = sampler_distinguisher(&d, &sampler, &j, &eps).unwrap();
        assert_eq!(art.l, 255);
        // accept_x = (1 - 1/64)^255 exactly
        assert_eq!(art.accept_x, rat_pow(&rat(63, 64), 255));
        // accept_y = (1/64) (63/64)^255
        assert_eq!(art.accept_y, rat(1, 64) * rat_pow(&rat(63, 64), 255));
        assert!(art.gap >= art.gap_bound);
        assert_eq!(art.composite_size, 256 * 16);
    }
}
