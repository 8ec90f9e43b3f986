//! Random degree-sequence models and the experiments built on them.

mod compare;
mod concentration;
mod samplers;
mod table;

pub use compare::{compare, ks_pvalue, ComparisonReport, Statistic};
pub use concentration::{sigma_concentration, ConcentrationReport};
pub use samplers::{sample, sample_with, ModelKind, ModelSample, ModelSpec, CHUNK};
pub use table::{canonical_sequences, exact_vs_formula, FormulaRow, FormulaTable};
