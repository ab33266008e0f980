pub mod cli;
pub mod fdi_sim;
pub mod fuzzy_num;
pub mod interval;
pub mod interval_linalg;
pub mod metrics;
pub mod spectral;
pub mod stability;
