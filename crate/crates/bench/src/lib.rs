//! Benchmark fixtures shared by the criterion targets.

pub use cardtext::synth::generate_card;
pub use cardtext::PipelineConfig;

/// Standard 0.75 MP fixture card.
pub fn fixture_card() -> cardtext::synth::SyntheticCard {
    generate_card(1024, 768, 42)
}
