//! Exact arithmetic in `F_p < F_q < F_{q^3} < F_{q^6}`.

mod cache;
mod cubic;
pub(crate) mod poly;
mod tower;

pub use cache::{cache_file_name, load_or_build_log_table};
pub(crate) use cubic::check_characteristic;
pub use cubic::{CubicField, Elem};
pub use tower::{build_tower, FieldTower, SexticElem, DEFAULT_SIZE_LIMIT};

/// Target of a trace map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subfield {
    Fp,
    Fq,
    Fq3,
}
