//! Cube-height, cube-width and layer-by-layer saturated families of finite
//! posets, with VC-dimension checks of the resulting set families.

pub mod bits;
pub mod catalog;
pub mod cube;
pub mod embedding;
pub mod enumerate;
pub mod error;
pub mod ledger;
pub mod poset;
pub mod saturation;
pub mod search;
pub mod vc;

pub use catalog::{catalog, catalog_from_str, random_poset};
pub use cube::{family_order, first_layers_family, layer_stream, SetFamily, SubsetMask};
pub use embedding::{
    check_separation, construct_height_embedding, cube_height, cube_width, find_cube_embedding, minimize_ground_set,
    separation_lower_bound, Embedding, HeightWidthResult,
};
pub use enumerate::{canonical_form, enumerate_posets};
pub use error::{Error, Result};
pub use ledger::{width_bound_ledger, BoundLedger, LedgerEntry};
pub use poset::{Poset, PosetSpec, MAX_POSET_SIZE};
pub use saturation::{
    contains_induced_copy, exact_sat_oracle, greedy_saturated_family, separates_ground, verify_saturated,
    SaturationReport, VerifyMode,
};
pub use search::find_induced_copy;
pub use vc::{claim31_check, sauer_shelah_bound, shatters, vc_dimension, VcReport};
