//! Word lengths: exhaustive Cayley balls, closed-form bounds in BS(1,m),
//! subgroup distortion tables, and the horocyclic distance estimate `d_L`.

pub mod ball;
pub mod distortion;
pub mod dl;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::Int;

pub use ball::{bfs_ball, generator_letters, Ball, BallEntry, DEFAULT_CAP};
pub use distortion::{distortion_table, DistortionRow, DistortionTable, SubgroupSelector};
pub use dl::{dl_distance, HorocyclicPoint};

/// Lower and upper bounds for `|a^r|` in BS(1,m):
/// `(1/2) log_m |r|` and `(m+2) log_m |r| + m/2 + 1`.
pub fn bs_length_bounds(r: &Int, m: u64) -> Result<(f64, f64)> {
    if r.is_zero() {
        return Err(Error::DomainError("r must be nonzero".into()));
    }
    if m < 2 {
        return Err(Error::DomainError("m must be at least 2".into()));
    }
    let log_r = r.abs().to_f64().expect("finite").ln() / (m as f64).ln();
    let mf = m as f64;
    Ok((0.5 * log_r, (mf + 2.0) * log_r + mf / 2.0 + 1.0))
}
