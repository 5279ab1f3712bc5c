//! Period matrices, Abel maps and the Humbert relation search.

mod genus1;
mod genus2;
mod humbert;
mod hyperelliptic;

pub use genus1::{abel_g1, periods_g1, periods_g1_legendre, PeriodsG1};
pub use genus2::{abel_g2, abel_inf_g2, periods_g2, periods_g2_with, HomologyBasis, PeriodsG2};
pub use humbert::{humbert_delta4, HumbertRelation};
pub use hyperelliptic::{BranchOrdering, OddModel};

use nalgebra::Matrix2;

use crate::C64;

pub type CMat2 = Matrix2<C64>;
