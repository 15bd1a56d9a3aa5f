//! Inputs shared by the benchmarks.

use pihier_core::kdvlab::{build_initial_data, DataParams, InitialDataSpec, KdvConfig};

/// Default initial data for a catastrophe of order `m`.
pub fn initial_data(m: u32) -> InitialDataSpec {
    build_initial_data(m, &DataParams::default()).expect("default parameters are admissible")
}

/// Grid samples of the `-sech^2` profile with a KdV config on `[-15, 15)`.
pub fn sech2_samples(eps: f64, n: usize) -> (Vec<f64>, KdvConfig) {
    let data = initial_data(2);
    let cfg = KdvConfig::new(eps, data.half_width, n);
    let u0 = cfg.grid().iter().map(|&x| data.u0(x)).collect();
    (u0, cfg)
}
