//! The bundled `.geo` example constructions, embedded so that the property
//! suites run without a checkout.

macro_rules! corpus {
    ($($konst:ident = $file:literal;)*) => {
        $(pub const $konst: &str = include_str!(concat!("../../../corpus/", $file));)*

        /// `(file name, source)` for every bundled construction.
        pub const ALL: &[(&str, &str)] = &[$(($file, $konst)),*];
    };
}

corpus! {
    BH_DELTOID = "bh_deltoid.geo";
    CONJUGATE_CONIC = "conjugate_conic.geo";
    DECAGON = "decagon.geo";
    EUCLID_I1 = "euclid_I1.geo";
    EUCLID_I2 = "euclid_I2.geo";
    GOLDEN_SECTION = "golden_section.geo";
    HEXAGON = "hexagon.geo";
    INVERSION = "inversion.geo";
    OCTAGON_APPROX = "octagon_approx.geo";
    PARALLEL_VIOLATION = "parallel_violation.geo";
    POLAR_LOCUS = "polar_locus.geo";
    RADICAL_AXIS = "radical_axis.geo";
    TWELVE_CHORDS = "twelve_chords.geo";
}

/// Looks a construction up by file name, with or without `.geo`.
pub fn get(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".geo").unwrap_or(name);
    ALL.iter()
        .find(|(f, _)| f.strip_suffix(".geo") == Some(name))
        .map(|(_, s)| *s)
}
