//! Shared inputs for the criterion benches.

use conelab_core::configurations::{catalog_cp2_3, NegativeConfiguration};
use conelab_core::{DivisorClass, SurfaceModel};

pub fn classes(k: usize, literals: &[&str]) -> Vec<DivisorClass> {
    let s = SurfaceModel::rational(k);
    literals
        .iter()
        .map(|l| DivisorClass::parse(l, s).expect("bench literal"))
        .collect()
}

/// First entry of the `CP² # 3` catalog for the given `n`.
pub fn cp2_3_config(n: u32) -> NegativeConfiguration {
    catalog_cp2_3(n).remove(0).config
}

/// A class needing several reflections before it reduces.
pub fn deep_class() -> DivisorClass {
    classes(6, &["17H-7E1-6E2-6E3-5E4-4E5-3E6"]).remove(0)
}
