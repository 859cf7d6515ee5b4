//! Experiment suites checking the computable content of the norm inequalities:
//! the Cauchy-transform bound, the `1 + √2` bound, the norm-attainment lemma, the
//! shifted-norm bound, Okubo–Ando, the block lemma and projection rigidity.

mod algebra;
mod bounds;
mod lemmas;

pub use algebra::{projection_image_check, random_orthogonal_resolution, skew_idempotent_pair, FinitePointAlgebra, MAX_POINTS};
pub use bounds::{boundary_sup, BoundarySampler, check_basic_bound, cp_check, random_domain_polys, shift_norm_check, ONE_PLUS_SQRT2};
pub use lemmas::{
    admissible_block_triple, block_lemma_check, lemma_xtx_check, okubo_ando_check, random_disk_polys, xtx_w_grid,
    BlockTriple,
};
