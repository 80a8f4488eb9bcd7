//! Distinguishers as exact \[0,1\]-valued tables over (x, z), plus the
//! advantage algebra, including per-z conditional advantage profiles.
//!
//! Randomized distinguishers are represented by their acceptance-probability
//! tables, computed exactly; the expectation over coins is already folded in.
//! Size bookkeeping for composites is explicit and conservative; the
//! convention for each construction is documented on its method.

use crate::circuit::Circuit;
use crate::dist::Joint;
use crate::error::{Error, Result};
use crate::rat::{rat_one, rat_zero, Rat};
use num_traits::Zero;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Boolean,
    Real,
    /// Acceptance-probability table of a randomized boolean distinguisher.
    RandomizedExpectation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Circuit { dsl: String },
    Table,
    Combo { weights: Vec<Rat>, parts: Vec<Provenance> },
    Derived { op: String, from: Box<Provenance> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distinguisher {
    n_bits: u32,
    m_bits: u32,
    values: Vec<Rat>, // x-major: values[x * 2^m + z]
    kind: Kind,
    size: u64,
    provenance: Provenance,
}

/// Per-z action when aligning signs of conditional gaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignAction {
    Keep,
    Flip,
    Zero,
}

/// Signed per-z conditional gaps eps_D(z) between two joints sharing a
/// Z-marginal, with their metric-style and modulus-style aggregates.
#[derive(Debug, Clone)]
pub struct AdvantageProfile {
    pub z_mass: Vec<Rat>,
    /// eps_D(z) = E[D(X|z, z)] - E[D(Y|z, z)]; zero on unsupported z.
    pub gaps: Vec<Rat>,
    /// sum_z P(z) eps_D(z), signed.
    pub metric_agg: Rat,
    /// sum_z P(z) |eps_D(z)|.
    pub modulus_agg: Rat,
}

impl AdvantageProfile {
    /// Keep where the gap is positive, flip where negative, zero elsewhere.
    pub fn sign_actions(&self) -> Vec<SignAction> {
        self.gaps
            .iter()
            .map(|g| {
                if g > &rat_zero() {
                    SignAction::Keep
                } else if g < &rat_zero() {
                    SignAction::Flip
                } else {
                    SignAction::Zero
                }
            })
            .collect()
    }
}

impl Distinguisher {
    pub fn from_table(
        n_bits: u32,
        m_bits: u32,
        values: Vec<Rat>,
        kind: Kind,
        size: u64,
    ) -> Result<Self> {
        let expected = 1usize << (n_bits + m_bits);
        if values.len() != expected {
            return Err(Error::DomainMismatch);
        }
        for v in &values {
            if v < &rat_zero() || v > &rat_one() {
                return Err(Error::Scenario(format!("value {} outside [0,1]", v)));
            }
            if kind == Kind::Boolean && !v.is_zero() && v != &rat_one() {
                return Err(Error::Scenario(format!(
                    "boolean distinguisher has non-boolean value {}",
                    v
                )));
            }
        }
        Ok(Distinguisher {
            n_bits,
            m_bits,
            values,
            kind,
            size,
            provenance: Provenance::Table,
        })
    }

    pub fn from_circuit(c: &Circuit) -> Self {
        let values = c
            .truth_table()
            .into_iter()
            .map(|b| if b { rat_one() } else { rat_zero() })
            .collect();
        Distinguisher {
            n_bits: c.n_x(),
            m_bits: c.m_z(),
            values,
            kind: Kind::Boolean,
            size: c.size(),
            provenance: Provenance::Circuit { dsl: c.to_dsl() },
        }
    }

    pub fn from_bool_table(n_bits: u32, m_bits: u32, bits: &[bool], size: u64) -> Result<Self> {
        let values = bits
            .iter()
            .map(|&b| if b { rat_one() } else { rat_zero() })
            .collect();
        Self::from_table(n_bits, m_bits, values, Kind::Boolean, size)
    }

    pub fn n_bits(&self) -> u32 {
        self.n_bits
    }

    pub fn m_bits(&self) -> u32 {
        self.m_bits
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn value(&self, x: usize, z: usize) -> &Rat {
        &self.values[x * (1usize << self.m_bits) + z]
    }

    /// The column D(., z) as owned values, one per x.
    pub fn column(&self, z: usize) -> Vec<Rat> {
        let zs = 1usize << self.m_bits;
        (0..1usize << self.n_bits)
            .map(|x| self.values[x * zs + z].clone())
            .collect()
    }

    pub fn is_boolean(&self) -> bool {
        self.kind == Kind::Boolean
    }

    fn check_joint(&self, j: &Joint) -> Result<()> {
        if j.x_domain().bits() != self.n_bits || j.z_domain().bits() != self.m_bits {
            return Err(Error::DomainMismatch);
        }
        Ok(())
    }

    /// E_{(x,z) <- j} D(x, z).
    pub fn expect(&self, j: &Joint) -> Result<Rat> {
        self.check_joint(j)?;
        let mut acc = rat_zero();
        for (p, v) in j.probs().iter().zip(&self.values) {
            if !p.is_zero() {
                acc += p * v;
            }
        }
        Ok(acc)
    }

    /// |E D(jp) - E D(jq)|.
    pub fn advantage(&self, jp: &Joint, jq: &Joint) -> Result<Rat> {
        let a = self.expect(jp)?;
        let b = self.expect(jq)?;
        Ok(if a >= b { a - b } else { b - a })
    }

    /// Per-z signed gaps and both aggregates. The joints must share their
    /// Z-marginal exactly.
    pub fn advantage_profile(&self, jp: &Joint, jq: &Joint) -> Result<AdvantageProfile> {
        self.check_joint(jp)?;
        self.check_joint(jq)?;
        let pm = jp.z_marginal();
        let qm = jq.z_marginal();
        if pm != qm {
            return Err(Error::ZMarginalMismatch);
        }
        let zs = 1usize << self.m_bits;
        let xs = 1usize << self.n_bits;
        let mut gaps = Vec::with_capacity(zs);
        let mut metric = rat_zero();
        let mut modulus = rat_zero();
        for z in 0..zs {
            if pm[z].is_zero() {
                gaps.push(rat_zero());
                continue;
            }
            let mut weighted = rat_zero(); // P(z) * eps(z)
            for x in 0..xs {
                let v = self.value(x, z);
                if !v.is_zero() {
                    weighted += (jp.prob(x, z) - jq.prob(x, z)) * v;
                }
            }
            let gap = &weighted / &pm[z];
            metric += &weighted;
            modulus += if weighted >= rat_zero() {
                weighted
            } else {
                -weighted
            };
            gaps.push(gap);
        }
        Ok(AdvantageProfile {
            z_mass: pm,
            gaps,
            metric_agg: metric,
            modulus_agg: modulus,
        })
    }

    /// 1 - D. Size convention: size + 1 (one output NOT).
    pub fn complement(&self) -> Distinguisher {
        Distinguisher {
            n_bits: self.n_bits,
            m_bits: self.m_bits,
            values: self.values.iter().map(|v| rat_one() - v).collect(),
            kind: self.kind,
            size: self.size + 1,
            provenance: Provenance::Derived {
                op: "complement".into(),
                from: Box::new(self.provenance.clone()),
            },
        }
    }

    /// Pointwise weighted average. Size convention: sum of part sizes plus
    /// the combination length.
    pub fn convex_combine(parts: &[(Rat, Distinguisher)]) -> Result<Distinguisher> {
        if parts.is_empty() {
            return Err(Error::BadWeights);
        }
        let mut total = rat_zero();
        for (w, _) in parts {
            if w < &rat_zero() {
                return Err(Error::BadWeights);
            }
            total += w;
        }
        if total != rat_one() {
            return Err(Error::BadWeights);
        }
        let (n, m) = (parts[0].1.n_bits, parts[0].1.m_bits);
        let len = 1usize << (n + m);
        let mut values = vec![rat_zero(); len];
        let mut size = parts.len() as u64;
        for (w, d) in parts {
            if d.n_bits != n || d.m_bits != m {
                return Err(Error::DomainMismatch);
            }
            size += d.size;
            if w.is_zero() {
                continue;
            }
            for (acc, v) in values.iter_mut().zip(&d.values) {
                if !v.is_zero() {
                    *acc += w * v;
                }
            }
        }
        let all_bool = parts.iter().all(|(_, d)| d.kind == Kind::Boolean);
        Ok(Distinguisher {
            n_bits: n,
            m_bits: m,
            values,
            kind: if all_bool {
                Kind::RandomizedExpectation
            } else {
                Kind::Real
            },
            size,
            provenance: Provenance::Combo {
                weights: parts.iter().map(|(w, _)| w.clone()).collect(),
                parts: parts.iter().map(|(_, d)| d.provenance.clone()).collect(),
            },
        })
    }

    /// Boolean indicator of {D > t}. Size convention: size + 1.
    pub fn threshold(&self, t: &Rat) -> Distinguisher {
        Distinguisher {
            n_bits: self.n_bits,
            m_bits: self.m_bits,
            values: self
                .values
                .iter()
                .map(|v| if v > t { rat_one() } else { rat_zero() })
                .collect(),
            kind: Kind::Boolean,
            size: self.size + 1,
            provenance: Provenance::Derived {
                op: format!("threshold(>{})", t),
                from: Box::new(self.provenance.clone()),
            },
        }
    }

    /// Per-z keep / complement / constant-zero. Size convention: size plus
    /// the number of non-keep z values (selector bookkeeping).
    pub fn flip_select(&self, actions: &[SignAction]) -> Result<Distinguisher> {
        let zs = 1usize << self.m_bits;
        if actions.len() != zs {
            return Err(Error::DomainMismatch);
        }
        let xs = 1usize << self.n_bits;
        let mut values = self.values.clone();
        let mut extra = 0u64;
        for (z, act) in actions.iter().enumerate() {
            match act {
                SignAction::Keep => {}
                SignAction::Flip => {
                    extra += 1;
                    for x in 0..xs {
                        let v = &mut values[x * zs + z];
                        *v = rat_one() - &*v;
                    }
                }
                SignAction::Zero => {
                    extra += 1;
                    for x in 0..xs {
                        values[x * zs + z] = rat_zero();
                    }
                }
            }
        }
        Ok(Distinguisher {
            n_bits: self.n_bits,
            m_bits: self.m_bits,
            values,
            kind: self.kind,
            size: self.size + extra,
            provenance: Provenance::Derived {
                op: "flip_select".into(),
                from: Box::new(self.provenance.clone()),
            },
        })
    }
}

/// True when every member's complement table also appears in the class.
pub fn complement_closed(class: &[Distinguisher]) -> bool {
    use std::collections::HashSet;
    let tables: HashSet<&[Rat]> = class.iter().map(|d| d.values.as_slice()).collect();
    class.iter().all(|d| {
        let comp: Vec<Rat> = d.values.iter().map(|v| rat_one() - v).collect();
        tables.contains(comp.as_slice())
    })
}

/// Extends a class with any missing complements.
pub fn close_under_complement(class: Vec<Distinguisher>) -> Vec<Distinguisher> {
    use std::collections::HashSet;
    let mut tables: HashSet<Vec<Rat>> = class.iter().map(|d| d.values.clone()).collect();
    let mut out = class.clone();
    for d in &class {
        let comp = d.complement();
        if tables.insert(comp.values.clone()) {
            out.push(comp);
        }
    }
    out
}
