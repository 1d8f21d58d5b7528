//! Inputs shared by the benchmarks in `benches/`.

use umap_core::{canonical_orientation, precubic_maps, HalfType, RibbonMap, DEFAULT_CAP};

/// Canonically oriented precubic maps of a non-orientable type.
pub fn canonical_census(twice_h: u32, m: usize) -> Vec<RibbonMap> {
    let ty = HalfType::new(twice_h, false).expect("non-orientable types exist for every 2h");
    precubic_maps(ty, m, DEFAULT_CAP)
        .expect("census within the default cap")
        .iter()
        .map(|x| canonical_orientation(x).expect("precubic maps are unicellular"))
        .collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn klein_census_size() {
        assert_eq!(super::canonical_census(2, 2).len(), 6);
    }
}
