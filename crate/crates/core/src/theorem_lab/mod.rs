//! Executable forms of the impossibility arguments: the profile constructions,
//! the pivotal-voter extraction, and exhaustive claim verifiers.

mod claims;
mod lemma;
mod pivotal;

pub use claims::{
    complement_characterization, satisfies_complement_rule, verify_claim,
    verify_claim_with_population, CensusPair, Claim, ClaimOptions, TheoremVerdict,
};
pub use lemma::{
    build_lemma_profile, check_complementary_pairs, compute_pi, constant_image_violation,
    replay_generalized_unanimity, ComplementaryViolation, LemmaStage,
};
pub use pivotal::{
    extract_dictator_exhaustive, extract_dictator_pivotal, DictatorReport, Method, PivotalLadder,
    TraceStep,
};
