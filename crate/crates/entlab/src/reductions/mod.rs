//! Constructive procedures behind the entropy conversions: witness builders
//! and distinguisher transformers, each returning certified exact
//! parameters. Every certificate field is recomputed from the constructed
//! object itself, never copied from intermediate bookkeeping, so artifacts
//! can be re-derived and compared exactly.

pub mod core_event;
pub mod counting;
pub mod leakage;
pub mod ledger;
pub mod sampler;
pub mod threshold;
pub mod tightness;

pub use core_event::{core_lemma_event, heavy_truncation, CoreEventArtifact, TruncationArtifact};
pub use counting::{
    approx_count_distinguisher, binom_cdf, binom_pmf, claim3_tail, CountMode, CountingArtifact,
};
pub use leakage::{
    leakage_witness, modulus_chain_rule, ChainRuleArtifact, LeakagePiece, LeakageWitness,
};
pub use ledger::{
    conversion_ledger, modulus_to_hill_params, Assumption, HillParams, LedgerEntry, LedgerInputs,
    ParamValue, ProvenanceFlag, SizeFormula,
};
pub use sampler::{sampler_distinguisher, Sampler, SamplerArtifact};
pub use threshold::{real_to_boolean, ThresholdArtifact};
pub use tightness::{tightness_demo, TightnessReport};
