//! Explicit adversaries: random bounded storage, the entangled SMP protocol
//! for inner product, superdense coding, tightness attacks and the
//! guessing-entropy counterexample.

mod knowledge;
mod smp;
mod storage;
mod tightness;

pub use knowledge::{alice_record, knowledge_counterexample, knowledge_referee, KnowledgeReport, MAX_KNOWLEDGE_N};
pub use smp::{
    bell_distribution, bell_vector, ip_from_weights, pair_state, smp_entangled_ip, smp_storage, superdense_message,
    superdense_roundtrip, PauliLabel, SmpRun, SmpTranscript,
};
pub use storage::{random_storage, Flavor, StateMap, StorageStrategy};
pub use tightness::{
    biased_product_sources, orthogonality_probability, tightness_attack, BiasedSources, Branch, Setting,
    TightnessAttack, MAX_BIASED_LEN,
};
