//! The core-lemma event and the heavy-z truncation.
//!
//! When a distinguisher's modulus aggregate exceeds eps against every
//! worst-case-feasible (Y, Z), the per-z gaps can be sign-aligned (keep /
//! complement / zero). Restricting to one global choice (D itself or its
//! complement) still leaves an event of mass at least eps^2/16 where
//! D'(x, z) beats the best feasible per-z expectation by eps/4. Truncating
//! the sign-aligned distinguisher to the 2^(m-t) heaviest z-values (by
//! P(z) times per-z gap) trades a factor 2^-t of advantage for selector
//! hardware of O(2^(m-t) m) gates, counted here exactly.

use crate::dist::Joint;
use crate::distinguisher::{Distinguisher, SignAction};
use crate::entropy::interval::achievable_interval;
use crate::entropy::piecewise::clamp_cap;
use crate::entropy::{column_data, modulus_min, Variant};
use crate::error::{Error, Result};
use crate::rat::{pow2_inv, rat_int, rat_zero, Rat};
use num_traits::Zero;

#[derive(Debug, Clone)]
pub struct CoreEventArtifact {
    /// The chosen global candidate: D when false, its complement when true.
    pub chose_complement: bool,
    pub d_prime: Distinguisher,
    /// Per-z actions of the sign-aligned variant (the eq-style selector).
    pub sign_profile: Vec<SignAction>,
    /// Exact P[(x,z) : D'(x,z) - sup_Y E D'(Y|z, z) >= eps/4].
    pub event_probability: Rat,
    /// eps^2 / 16.
    pub bound: Rat,
    /// The violation level the hypothesis was checked at.
    pub eps: Rat,
    pub transcript: Vec<String>,
}

/// Exact event probability for a fixed global candidate.
fn event_probability(j: &Joint, d: &Distinguisher, cap: &Rat, quarter: &Rat) -> Result<Rat> {
    let data = column_data(j, d)?;
    let xs = j.x_domain().size();
    let zs = j.z_domain().size();
    let mut p = rat_zero();
    for z in 0..zs {
        if data.mass[z].is_zero() {
            continue;
        }
        let upper = achievable_interval(&data.columns[z], cap)?.upper;
        for x in 0..xs {
            if &data.columns[z][x] - &upper >= *quarter {
                p += j.prob(x, z);
            }
        }
    }
    Ok(p)
}

/// The constructive step of the core lemma.
///
/// Hypothesis (checked exactly): for every (Y, Z) with per-z caps `gamma`,
/// the modulus aggregate of `d` is at least `eps`. Returns whichever of
/// D / D-complement carries the larger exact event probability, certified
/// to be at least eps^2/16.
pub fn core_lemma_event(
    j: &Joint,
    d: &Distinguisher,
    gamma: &Rat,
    eps: &Rat,
) -> Result<CoreEventArtifact> {
    if eps <= &rat_zero() {
        return Err(Error::HypothesisNotViolated);
    }
    let cap = clamp_cap(gamma);
    let worst = modulus_min(j, d, &cap, Variant::Worst)?;
    if &worst.value < eps {
        return Err(Error::HypothesisNotViolated);
    }

    // sign profile per eq-style flip selection
    let data = column_data(j, d)?;
    let zs = j.z_domain().size();
    let mut profile = Vec::with_capacity(zs);
    for z in 0..zs {
        if data.mass[z].is_zero() {
            profile.push(SignAction::Zero);
            continue;
        }
        let iv = achievable_interval(&data.columns[z], &cap)?;
        let a = &data.targets[z];
        profile.push(if a > &iv.upper {
            SignAction::Keep
        } else if a < &iv.lower {
            SignAction::Flip
        } else {
            SignAction::Zero
        });
    }

    let quarter = eps / rat_int(4);
    let p_keep = event_probability(j, d, &cap, &quarter)?;
    let dc = d.complement();
    let p_flip = event_probability(j, &dc, &cap, &quarter)?;
    let bound = eps * eps / rat_int(16);
    let (chose_complement, d_prime, p_star) = if p_keep >= p_flip {
        (false, d.clone(), p_keep.clone())
    } else {
        (true, dc, p_flip.clone())
    };
    if p_star < bound {
        return Err(Error::PreconditionFailed(format!(
            "event probability {} below eps^2/16 = {}",
            p_star, bound
        )));
    }
    Ok(CoreEventArtifact {
        chose_complement,
        d_prime,
        sign_profile: profile,
        event_probability: p_star,
        bound,
        eps: eps.clone(),
        transcript: vec![format!(
            "worst-case modulus {} >= eps {}; p(D) = {}, p(D^c) = {}",
            worst.value, eps, p_keep, p_flip
        )],
    })
}

#[derive(Debug, Clone)]
pub struct TruncationArtifact {
    pub truncated: Distinguisher,
    /// Kept z-values, heaviest P(z) * gap(z) first (ties by z index).
    pub kept_z: Vec<usize>,
    /// One-sided advantage of the truncated distinguisher against every
    /// cap-feasible (Y, Z), recomputed exactly.
    pub advantage: Rat,
    /// 2^-t times the full sign-aligned aggregate.
    pub bound: Rat,
    /// Exact gate count of the z-selector construction.
    pub selector_gates: u64,
    pub transcript: Vec<String>,
}

/// Keeps the sign-aligned distinguisher on the 2^(m-t) heaviest z-values
/// and zeroes the rest.
///
/// The advantage certificate is recomputed from the truncated table: it is
/// E D''(X,Z) minus the best feasible E D''(Y,Z) at per-z caps `gamma`,
/// and is certified to be at least 2^-t times the full aggregate
/// sum_z P(z) gap(z).
///
/// Selector accounting (exact, reported in `selector_gates`): per kept z,
/// an m-literal minterm costs (zero-bits of z) NOTs plus max(m-1, 0) ANDs,
/// plus one AND joining it to the D-output (complemented output shares a
/// single NOT); kept pieces are OR-chained with kept-1 gates. This sits
/// within the O(2^(m-t) m) envelope.
pub fn heavy_truncation(
    j: &Joint,
    d: &Distinguisher,
    gamma: &Rat,
    t: u32,
) -> Result<TruncationArtifact> {
    let m = d.m_bits();
    if t > m {
        return Err(Error::Scenario(format!("t = {t} exceeds m = {m}")));
    }
    let cap = clamp_cap(gamma);
    let data = column_data(j, d)?;
    let zs = j.z_domain().size();

    // per-z sign alignment and weighted gaps
    let mut actions = Vec::with_capacity(zs);
    let mut weighted_gap = Vec::with_capacity(zs);
    for z in 0..zs {
        if data.mass[z].is_zero() {
            actions.push(SignAction::Zero);
            weighted_gap.push(rat_zero());
            continue;
        }
        let iv = achievable_interval(&data.columns[z], &cap)?;
        let a = &data.targets[z];
        if a > &iv.upper {
            actions.push(SignAction::Keep);
            weighted_gap.push(&data.mass[z] * (a - &iv.upper));
        } else if a < &iv.lower {
            actions.push(SignAction::Flip);
            weighted_gap.push(&data.mass[z] * (&iv.lower - a));
        } else {
            actions.push(SignAction::Zero);
            weighted_gap.push(rat_zero());
        }
    }
    let total: Rat = weighted_gap.iter().fold(rat_zero(), |acc, g| acc + g);

    let keep_count = 1usize << (m - t);
    let mut order: Vec<usize> = (0..zs).collect();
    order.sort_by(|&a, &b| weighted_gap[b].cmp(&weighted_gap[a]).then(a.cmp(&b)));
    let kept_z: Vec<usize> = order.into_iter().take(keep_count).collect();

    let mut final_actions = vec![SignAction::Zero; zs];
    for &z in &kept_z {
        final_actions[z] = actions[z];
    }
    let truncated = d.flip_select(&final_actions)?;

    // exact one-sided advantage of the truncated table
    let target = truncated.expect(j)?;
    let tdata = column_data(j, &truncated)?;
    let mut best = rat_zero();
    for z in 0..zs {
        if tdata.mass[z].is_zero() {
            continue;
        }
        best += &tdata.mass[z] * achievable_interval(&tdata.columns[z], &cap)?.upper;
    }
    let advantage = target - best;
    let bound = pow2_inv(t) * &total;
    if advantage < bound {
        return Err(Error::PreconditionFailed(format!(
            "truncated advantage {} below 2^-t aggregate {}",
            advantage, bound
        )));
    }

    // exact selector gate count
    let mut gates = 0u64;
    let mut any_flip = false;
    for &z in &kept_z {
        match final_actions[z] {
            SignAction::Zero => continue,
            SignAction::Flip => any_flip = true,
            SignAction::Keep => {}
        }
        let zeros = (m as u64) - (z as u64).count_ones() as u64;
        let minterm = zeros + (m as u64).saturating_sub(1);
        gates += minterm + 1; // join with the (possibly complemented) output
    }
    let active = kept_z
        .iter()
        .filter(|&&z| !matches!(final_actions[z], SignAction::Zero))
        .count() as u64;
    gates += active.saturating_sub(1); // OR chain
    if any_flip {
        gates += 1; // one shared NOT of the D output
    }

    Ok(TruncationArtifact {
        truncated,
        kept_z,
        advantage,
        bound,
        selector_gates: gates,
        transcript: vec![format!(
            "full aggregate {}, kept {} of {} z-values, advantage {} >= {}",
            total, keep_count, zs, "(recomputed)", "(2^-t bound)"
        )],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{Dist, Domain};
    use crate::rat::rat;

    fn dom(bits: u32) -> Domain {
        Domain::new(bits).unwrap()
    }

    #[test]
    fn zero_gap_everywhere_is_rejected() {
        let j = Joint::independent(&Dist::uniform(dom(2)), &Dist::uniform(dom(1)));
        let d = Distinguisher::from_bool_table(
            2,
            1,
            &[true, true, false, false, true, true, false, false],
            1,
        )
        .unwrap();
        // uniform X achieves every balanced expectation: no violation
        let out = core_lemma_event(&j, &d, &rat(1, 2), &rat(1, 4));
        assert!(matches!(out, Err(Error::HypothesisNotViolated)));
    }

    #[test]
    fn uniform_violation_event_probability() {
        // X concentrated on the D = 1 points, every feasible Y capped at 1/2
        let j = Joint::new(
            dom(2),
            dom(1),
            vec![
                rat(1, 2),
                rat(0, 1),
                rat(1, 2),
                rat(0, 1),
                rat(0, 1),
                rat(0, 1),
                rat(0, 1),
                rat(0, 1),
            ],
        )
        .unwrap();
        // D = 1 exactly on x in {0, 1} for the supported z = 0
        let d = Distinguisher::from_bool_table(
            2,
            1,
            &[true, false, true, false, false, false, false, false],
            1,
        )
        .unwrap();
        // upper at cap 1/4 is 2 * 1/4 = 1/2; a(z=0) = 1: violation 1/2
        let eps = rat(1, 2);
        let art = core_lemma_event(&j, &d, &rat(1, 4), &eps).unwrap();
        assert!(!art.chose_complement);
        // every supported (x, z) has D = 1 and 1 - 1/2 >= eps/4
        assert_eq!(art.event_probability, rat(1, 1));
        assert_eq!(art.bound, rat(1, 64));
        assert_eq!(art.sign_profile[0], SignAction::Keep);
        // degenerate z contributes the zero action
        assert_eq!(art.sign_profile[1], SignAction::Zero);
    }

    #[test]
    fn truncation_keeps_heaviest_and_certifies() {
        // two supported z with unequal weighted gaps; t = 1 keeps one
        let j = Joint::new(
            dom(1),
            dom(1),
            vec![rat(5, 8), rat(1, 8), rat(0, 1), rat(1, 4)],
        )
        .unwrap();
        let d = Distinguisher::from_bool_table(1, 1, &[true, true, false, false], 1).unwrap();
        let full = heavy_truncation(&j, &d, &rat(3, 4), 0).unwrap();
        assert_eq!(full.kept_z.len(), 2);
        let half = heavy_truncation(&j, &d, &rat(3, 4), 1).unwrap();
        assert_eq!(half.kept_z.len(), 1);
        // t = 0 keeps everything: advantage equals the full aggregate
        assert_eq!(full.advantage, full.bound);
        assert!(half.advantage >= half.bound);
        // t = m keeps a single value
        let one = heavy_truncation(&j, &d, &rat(3, 4), 1).unwrap();
        assert_eq!(one.kept_z.len(), 1);
    }
}
