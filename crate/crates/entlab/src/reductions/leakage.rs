//! Leakage witnesses and the modulus leakage chain rule.
//!
//! `leakage_witness`: from one boolean distinguisher that cannot separate X
//! from a cap-gamma distribution Y by more than eps, build for every
//! supported z a per-z witness Y'_z whose cap inflates to gamma/P(z) and
//! whose gap inflates to eps/P(z), by projecting E D(X|z) onto the
//! achievable interval at the inflated cap.
//!
//! `modulus_chain_rule`: from modulus entropy of X given Z1 (against the
//! z2-slices of each class member), assemble a witness (Y, Z1, Z2) whose
//! modulus aggregate is at most 2^m2 eps and whose average guessing
//! probability is at most 2^m2 gamma, both recomputed exactly from the
//! assembled joint.

use crate::dist::{Dist, EntropyParams, Joint};
use crate::distinguisher::Distinguisher;
use crate::entropy::interval::project_to_achievable;
use crate::entropy::{modulus_min, modulus_witness, Variant};
use crate::error::{Error, Result};
use crate::rat::{pow2, rat_one, rat_zero, Rat};
use num_traits::Zero;

#[derive(Debug, Clone)]
pub struct LeakagePiece {
    pub z: usize,
    /// The constructed Y'_z.
    pub dist: Dist,
    /// Actual max probability of Y'_z; certified <= cap_bound.
    pub guess_prob: Rat,
    /// min(1, gamma / P(z)).
    pub cap_bound: Rat,
    /// |E D(X|z) - E D(Y'_z)|, exact; certified <= gap_bound.
    pub gap: Rat,
    /// eps / P(z).
    pub gap_bound: Rat,
}

#[derive(Debug, Clone)]
pub struct LeakageWitness {
    /// One piece per supported z; None where P(z) = 0.
    pub pieces: Vec<Option<LeakagePiece>>,
    pub transcript: Vec<String>,
}

/// Per-z witnesses from an unconditional indistinguishability bound.
///
/// Preconditions (checked): `d` is boolean over x only, `x_dist` is the
/// X-marginal of `z_joint`, guess_prob(y_dist) <= gamma, and
/// |E D(x_dist) - E D(y_dist)| <= eps.
pub fn leakage_witness(
    d: &Distinguisher,
    x_dist: &Dist,
    y_dist: &Dist,
    z_joint: &Joint,
    gamma: &Rat,
    eps: &Rat,
) -> Result<LeakageWitness> {
    if !d.is_boolean() || d.m_bits() != 0 {
        return Err(Error::InfeasibleWitness(
            "leakage witness requires a boolean distinguisher over x".into(),
        ));
    }
    if d.n_bits() != x_dist.domain().bits() || z_joint.x_domain() != x_dist.domain() {
        return Err(Error::DomainMismatch);
    }
    if &z_joint.x_marginal() != x_dist {
        return Err(Error::InfeasibleWitness(
            "z_joint does not have x_dist as its X-marginal".into(),
        ));
    }
    if &y_dist.guess_prob() > gamma {
        return Err(Error::InfeasibleWitness(format!(
            "guess_prob(Y) = {} exceeds gamma = {}",
            y_dist.guess_prob(),
            gamma
        )));
    }
    let values: Vec<Rat> = d.values().to_vec();
    let a_x = x_dist.expect(&values)?;
    let a_y = y_dist.expect(&values)?;
    let gap = if a_x >= a_y { &a_x - &a_y } else { &a_y - &a_x };
    if &gap > eps {
        return Err(Error::InfeasibleWitness(format!(
            "|E D(X) - E D(Y)| = {} exceeds eps = {}",
            gap, eps
        )));
    }

    let zs = z_joint.z_domain().size();
    let mut pieces = Vec::with_capacity(zs);
    let mut transcript = vec![format!("base gap {} <= eps {}", gap, eps)];
    for z in 0..zs {
        let mass = z_joint.z_mass(z);
        if mass.is_zero() {
            pieces.push(None);
            continue;
        }
        let cap = {
            let c = gamma / &mass;
            if c > rat_one() {
                rat_one()
            } else {
                c
            }
        };
        let target = {
            // E D(X | Z = z)
            let cond = z_joint.condition(z)?;
            cond.expect(&values)?
        };
        let (achieved, probs) = project_to_achievable(&values, &cap, &target)?;
        let piece_gap = if target >= achieved {
            &target - &achieved
        } else {
            &achieved - &target
        };
        let gap_bound = eps / &mass;
        if piece_gap > gap_bound {
            return Err(Error::InfeasibleWitness(format!(
                "z = {z}: projected gap {} exceeds eps/P(z) = {}",
                piece_gap, gap_bound
            )));
        }
        let dist = Dist::new(x_dist.domain(), probs)?;
        let gp = dist.guess_prob();
        debug_assert!(gp <= cap);
        transcript.push(format!(
            "z = {z}: cap {} gap {} (bound {})",
            cap, piece_gap, gap_bound
        ));
        pieces.push(Some(LeakagePiece {
            z,
            dist,
            guess_prob: gp,
            cap_bound: cap,
            gap: piece_gap,
            gap_bound,
        }));
    }
    Ok(LeakageWitness { pieces, transcript })
}

#[derive(Debug, Clone)]
pub struct ChainRuleArtifact {
    /// Index of the class member this witness answers.
    pub d_index: usize,
    /// The assembled (Y, Z1, Z2), sharing the (Z1, Z2)-marginal with the input.
    pub witness: Joint,
    /// sum over (z1,z2) of P(z1,z2) |eps_D(z1,z2)|, recomputed from the witness.
    pub modulus_aggregate: Rat,
    /// 2^m2 * eps.
    pub aggregate_bound: Rat,
    /// Average guessing probability of the witness, recomputed.
    pub avg_guess_prob: Rat,
    /// 2^m2 * gamma.
    pub guess_bound: Rat,
    pub transcript: Vec<String>,
}

/// The modulus leakage chain rule, constructively, for every class member.
///
/// `j3` is a joint over (X, (Z1, Z2)) with the z-index packing z1 as high
/// bits. The hypothesis (modulus entropy of X given Z1 at (gamma, eps)
/// against every z2-slice of each class member) is checked exactly; its
/// violation is reported with the offending member.
pub fn modulus_chain_rule(
    j3: &Joint,
    m1: u32,
    m2: u32,
    class: &[Distinguisher],
    params: &EntropyParams,
) -> Result<Vec<ChainRuleArtifact>> {
    if m1 + m2 != j3.z_domain().bits() {
        return Err(Error::DomainMismatch);
    }
    let j1 = j3.marginal_z1(m1, m2)?;
    let xs = j3.x_domain().size();
    let z1s = 1usize << m1;
    let z2s = 1usize << m2;
    let gamma = &params.gamma;
    let eps = &params.epsilon;
    let aggregate_bound = pow2(m2) * eps;
    let guess_bound = pow2(m2) * gamma;

    let mut artifacts = Vec::with_capacity(class.len());
    for (di, d) in class.iter().enumerate() {
        if !d.is_boolean() {
            return Err(Error::PreconditionFailed(format!(
                "class member {di} is not boolean"
            )));
        }
        let mut transcript = Vec::new();
        // Per z2: the slice distinguisher over (x, z1) and its optimal
        // modulus witness Y^{z2} against X | Z1.
        let mut slice_witnesses: Vec<Joint> = Vec::with_capacity(z2s);
        for z2 in 0..z2s {
            let mut vals = Vec::with_capacity(xs * z1s);
            for x in 0..xs {
                for z1 in 0..z1s {
                    vals.push(d.value(x, z1 * z2s + z2).clone());
                }
            }
            let slice = Distinguisher::from_table(
                j3.x_domain().bits(),
                m1,
                vals,
                crate::distinguisher::Kind::Boolean,
                d.size(),
            )?;
            let detail = modulus_min(&j1, &slice, gamma, Variant::Avg)?;
            if &detail.value > eps {
                return Err(Error::PreconditionFailed(format!(
                    "member {di}, slice z2 = {z2}: modulus aggregate {} exceeds eps {}",
                    detail.value, eps
                )));
            }
            transcript.push(format!(
                "z2 = {z2}: slice modulus aggregate {} <= {}",
                detail.value, eps
            ));
            slice_witnesses.push(modulus_witness(&j1, &slice, &detail.assignment)?);
        }

        // Assemble (Y, Z1, Z2) from per-(z1, z2) leakage pieces.
        let mut probs = vec![rat_zero(); xs * z1s * z2s];
        for z1 in 0..z1s {
            let p_z1 = j1.z_mass(z1);
            if p_z1.is_zero() {
                continue;
            }
            for z2 in 0..z2s {
                let z = z1 * z2s + z2;
                let p_z1z2 = j3.z_mass(z);
                if p_z1z2.is_zero() {
                    continue;
                }
                let cond_z2 = &p_z1z2 / &p_z1; // P(Z2 = z2 | Z1 = z1)
                let yz2 = &slice_witnesses[z2];
                let y_cond = yz2.condition(z1)?;
                let cap_base = y_cond.guess_prob();
                let cap = {
                    let c = &cap_base / &cond_z2;
                    if c > rat_one() {
                        rat_one()
                    } else {
                        c
                    }
                };
                // column of D at (z1, z2), target E D(X | z1, z2)
                let col: Vec<Rat> = (0..xs).map(|x| d.value(x, z).clone()).collect();
                let target = j3.condition(z)?.expect(&col)?;
                let (_, piece) = project_to_achievable(&col, &cap, &target)?;
                for x in 0..xs {
                    probs[x * (z1s * z2s) + z] = &piece[x] * &p_z1z2;
                }
            }
        }
        let witness = Joint::new(j3.x_domain(), j3.z_domain(), probs)?;

        // Independent certificates from the assembled witness.
        let prof = d.advantage_profile(j3, &witness)?;
        let avg_gp = witness.cond_guess_prob_avg();
        if prof.modulus_agg > aggregate_bound || avg_gp > guess_bound {
            return Err(Error::PreconditionFailed(format!(
                "member {di}: assembled witness violates its certificate \
                 (aggregate {} vs {}, guess {} vs {})",
                prof.modulus_agg, aggregate_bound, avg_gp, guess_bound
            )));
        }
        transcript.push(format!(
            "aggregate {} <= {}, avg guess prob {} <= {}",
            prof.modulus_agg, aggregate_bound, avg_gp, guess_bound
        ));
        artifacts.push(ChainRuleArtifact {
            d_index: di,
            witness,
            modulus_aggregate: prof.modulus_agg,
            aggregate_bound: aggregate_bound.clone(),
            avg_guess_prob: avg_gp,
            guess_bound: guess_bound.clone(),
            transcript,
        });
    }
    Ok(artifacts)
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
    fn constant_z_witness_is_free() {
        // Z constant (one value): Y' = Y works with zero inflation
        let x = Dist::new(dom(2), vec![rat(1, 2), rat(1, 4), rat(1, 8), rat(1, 8)]).unwrap();
        let j = Joint::independent(&x, &Dist::uniform(dom(0)));
        let d = Distinguisher::from_bool_table(2, 0, &[true, false, true, false], 1).unwrap();
        let y = Dist::uniform(dom(2));
        let gamma = rat(1, 4);
        let vals: Vec<Rat> = d.values().to_vec();
        let eps = {
            let a = x.expect(&vals).unwrap();
            let b = y.expect(&vals).unwrap();
            if a >= b {
                a - b
            } else {
                b - a
            }
        };
        let w = leakage_witness(&d, &x, &y, &j, &gamma, &eps).unwrap();
        let piece = w.pieces[0].as_ref().unwrap();
        assert_eq!(piece.cap_bound, gamma);
        assert!(piece.gap <= eps);
    }

    #[test]
    fn uniform_two_point_z_doubles_caps_and_eps() {
        // uniform Z over 2 points: cap bound doubles, gap bound doubles
        let x = Dist::new(dom(2), vec![rat(3, 8), rat(3, 8), rat(1, 8), rat(1, 8)]).unwrap();
        let j = Joint::independent(&x, &Dist::uniform(dom(1)));
        let d = Distinguisher::from_bool_table(2, 0, &[true, false, false, false], 1).unwrap();
        let y = Dist::uniform(dom(2));
        let gamma = rat(1, 4);
        let eps = rat(1, 4);
        let w = leakage_witness(&d, &x, &y, &j, &gamma, &eps).unwrap();
        for piece in w.pieces.iter().flatten() {
            assert_eq!(piece.cap_bound, rat(1, 2)); // gamma / (1/2)
            assert_eq!(piece.gap_bound, rat(1, 2)); // eps / (1/2)
            assert!(piece.gap <= piece.gap_bound);
            assert!(piece.guess_prob <= piece.cap_bound);
        }
    }

    #[test]
    fn precondition_violations_are_rejected() {
        let x = Dist::uniform(dom(1));
        let j = Joint::independent(&x, &Dist::uniform(dom(1)));
        let d = Distinguisher::from_bool_table(1, 0, &[true, false], 1).unwrap();
        let y = Dist::point_mass(dom(1), 0).unwrap();
        // guess_prob(Y) = 1 > gamma
        assert!(matches!(
            leakage_witness(&d, &x, &y, &j, &rat(1, 2), &rat(1, 1)),
            Err(Error::InfeasibleWitness(_))
        ));
        // wrong marginal
        let x2 = Dist::point_mass(dom(1), 1).unwrap();
        assert!(matches!(
            leakage_witness(&d, &x2, &Dist::uniform(dom(1)), &j, &rat(1, 2), &rat(1, 1)),
            Err(Error::InfeasibleWitness(_))
        ));
    }

    #[test]
    fn chain_rule_with_constant_z2_keeps_parameters() {
        // m2 = 0: the bound factors are 1, parameters unchanged
        let j3 = Joint::new(
            dom(1),
            dom(1),
            vec![rat(3, 8), rat(1, 8), rat(1, 4), rat(1, 4)],
        )
        .unwrap();
        let d = Distinguisher::from_bool_table(1, 1, &[true, false, false, true], 1).unwrap();
        // pick eps tight: the actual modulus optimum for the only slice
        let detail = modulus_min(&j3, &d, &rat(1, 2), Variant::Avg).unwrap();
        let params = EntropyParams::new(rat(1, 2), detail.value.clone(), None).unwrap();
        let arts = modulus_chain_rule(&j3, 1, 0, &[d], &params).unwrap();
        assert_eq!(arts.len(), 1);
        let a = &arts[0];
        assert_eq!(a.aggregate_bound, params.epsilon);
        assert_eq!(a.guess_bound, params.gamma);
        assert!(a.modulus_aggregate <= a.aggregate_bound);
        assert!(a.avg_guess_prob <= a.guess_bound);
    }

    #[test]
    fn chain_rule_bound_arithmetic() {
        // m2 = 2, eps = 1/16: certified bound eps' = 1/4, gamma' = 4 gamma
        let j3 = Joint::independent(&Dist::uniform(dom(1)), &Dist::uniform(dom(2)));
        let d = Distinguisher::from_bool_table(
            1,
            2,
            &[true, false, true, false, false, true, false, true],
            1,
        )
        .unwrap();
        let params = EntropyParams::new(rat(1, 2), rat(1, 16), None).unwrap();
        let arts = modulus_chain_rule(&j3, 0, 2, &[d], &params).unwrap();
        assert_eq!(arts[0].aggregate_bound, rat(1, 4));
        assert_eq!(arts[0].guess_bound, rat(2, 1));
    }

    #[test]
    fn chain_rule_rejects_violated_hypothesis() {
        // biased X with a distinguisher reading x: every feasible Y at cap
        // 1/2 sits at expectation 1/2, but E D(X|z1) = 3/4, so the slice
        // hypothesis fails at eps = 0
        let probs = vec![rat(3, 8), rat(3, 8), rat(1, 8), rat(1, 8)];
        let j3 = Joint::new(dom(1), dom(1), probs).unwrap();
        let d = Distinguisher::from_bool_table(1, 1, &[true, true, false, false], 1).unwrap();
        let params = EntropyParams::new(rat(1, 2), rat(0, 1), None).unwrap();
        let out = modulus_chain_rule(&j3, 0, 1, &[d], &params);
        assert!(matches!(out, Err(Error::PreconditionFailed(_))));
    }
}
