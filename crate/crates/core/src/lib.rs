//! Exact computations in crossed products of `C(Σ_A)` by the shift
//! endomorphism of a one-sided subshift of finite type, taken relative to
//! the uniform transfer operator.

pub mod crossed;
pub mod cylfun;
pub mod gns;
pub mod groupoid;
pub mod measure;
pub mod oracle;
pub mod random;
pub mod report;
pub mod scalar;
pub mod sft;
pub mod suites;
